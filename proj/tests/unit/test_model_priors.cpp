#include <cstdint>

#include "doctest.h"

#include "bvs/error.hpp"
#include "bvs/model_priors.hpp"
#include "bvs/numeric.hpp"

using namespace bvs;

namespace {

std::uint64_t choose(int n, int k) {
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_SUITE("model_priors") {

TEST_CASE("uniform prior gives every model the same mass") {
    ModelPrior u(ModelPriorSpec::uniform(10, 10));
    CHECK(u.log_prior_size(0) == doctest::Approx(-10 * std::log(2.0)).epsilon(1e-12));
    CHECK(u.log_prior_size(7) == doctest::Approx(u.log_prior_size(2)).epsilon(1e-12));
    CHECK(u.log_prior_odds(3, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("beta-binomial examples") {
    ModelPrior bb(ModelPriorSpec::beta_binomial(5, 5));
    CHECK(bb.log_prior(ModelIndex({2})) == doctest::Approx(std::log(1.0 / 6) - std::log(5.0)).epsilon(1e-12));
    // size 1 vs size 2: (1/5) / (1/10)
    CHECK(bb.log_prior_odds(2, 1) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    CHECK(bb.log_size_mass(3) == doctest::Approx(-std::log(6.0)).epsilon(1e-12));
}

TEST_CASE("complexity prior ratio equals the exact rational") {
    ModelPrior cx(ModelPriorSpec::complexity(100, 100, 1.0));
    // r_{4,3} = p^{-1} C(100,3)/C(100,4)
    const double exact = static_cast<double>(choose(100, 3)) / (100.0 * static_cast<double>(choose(100, 4)));
    CHECK(cx.log_prior_odds(4, 3) == doctest::Approx(std::log(exact)).epsilon(1e-12));
    ModelPrior c20(ModelPriorSpec::complexity(20, 20, 1.0));
    const double r25 = 8000.0 * static_cast<double>(choose(20, 5)) / static_cast<double>(choose(20, 2));
    CHECK(c20.log_prior_odds(2, 5) == doctest::Approx(std::log(r25)).epsilon(1e-12));
}

TEST_CASE("prior masses sum to one on the truncated space") {
    for (const auto& spec : {ModelPriorSpec::uniform(30, 12), ModelPriorSpec::beta_binomial(30, 12),
                             ModelPriorSpec::complexity(30, 12, 2.0),
                             ModelPriorSpec::custom(30, 12, std::vector<double>(13, 1.0))}) {
        ModelPrior pr(spec);
        LogAccumulator acc;
        for (int l = 0; l <= 12; ++l) acc.add(pr.log_prior_size(l) + log_binom(30, l));
        CHECK(acc.value() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(pr.log_prior_size(13) == kNegInf);
    }
}

TEST_CASE("consistency diagnostics") {
    SUBCASE("uniform C1 is a negative power of tau") {
        ModelPrior u(ModelPriorSpec::uniform(100, 50));
        const auto rep = consistency_diagnostics(u, 100.0, 5, 10.0, 0.9, 0.9);
        for (const auto& r : rep.rows)
            if (r.pm > 5) CHECK(r.c1 == doctest::Approx(std::pow(100.0, -0.9 * (r.pm - 5) / 2)).epsilon(1e-10));
    }
    SUBCASE("beta-binomial threshold for smaller models") {
        ModelPrior bb(ModelPriorSpec::beta_binomial(100, 50));
        const auto rep = consistency_diagnostics(bb, 100.0, 5, 10.0, 0.9, 0.9);
        bool found = false;
        for (const auto& r : rep.rows)
            if (r.pm == 3) {
                found = true;
                CHECK(r.threshold == doctest::Approx(2 * std::log(9500.0 / 3)).epsilon(1e-12));
                CHECK(r.has_threshold);
            }
        CHECK(found);
    }
}

}
