#include <algorithm>
#include <map>

#include "doctest.h"
#include "test_util.hpp"

#include "bvs/error.hpp"
#include "bvs/posterior.hpp"

using namespace bvs;

namespace {

double log_mvt_evidence(const Vector& y, const Matrix& S, double a, double l) {
    Eigen::LDLT<Matrix> f(S);
    const double logdet = f.vectorD().array().log().sum();
    const double q = y.dot(f.solve(y));
    const double n = static_cast<double>(y.size());
    return std::lgamma(0.5 * (a + n)) - std::lgamma(0.5 * a) + 0.5 * a * std::log(0.5 * l) -
           0.5 * n * std::log(2 * M_PI) - 0.5 * logdet - 0.5 * (a + n) * std::log(0.5 * (l + q));
}

Dataset orthogonal_dataset(int n, int p, const std::vector<double>& theta, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    Dataset d;
    d.X = testutil::orthogonal_design(n, p, rng);
    Vector th = Vector::Zero(p);
    for (std::size_t j = 0; j < theta.size(); ++j) th(j) = theta[j];
    d.y = d.X * th;
    for (int i = 0; i < n; ++i) d.y(i) += z(rng);
    std::vector<int> idx;
    for (std::size_t j = 0; j < theta.size(); ++j)
        if (theta[j] != 0) idx.push_back(static_cast<int>(j));
    d.truth = Truth{ModelIndex(idx), th, 1.0, {}, {}, {}};
    return d;
}

double total_variation(const PosteriorSummary& a, const PosteriorSummary& b) {
    std::map<ModelIndex, double> pa;
    for (const auto& r : a.models) pa[r.model] = r.prob;
    double tv = 0;
    for (const auto& r : b.models) {
        tv += std::abs(pa[r.model] - r.prob);
        pa.erase(r.model);
    }
    for (const auto& [m, pr] : pa) tv += pr;
    return 0.5 * tv;
}

}  // namespace

TEST_SUITE("posterior") {

TEST_CASE("p = 1: posterior odds are Bayes factor times prior odds") {
    const auto d = testutil::random_dataset(30, 1, {0.4}, 2);
    LinearCache c(d);
    const auto coef = CoefPriorSpec::zellner_unknown(30.0);
    ModelPrior prior(ModelPriorSpec::complexity(1, 1, 1.0));
    const auto s = enumerate_posterior(c, coef, prior);
    REQUIRE(s.models.size() == 2);
    double p0 = 0, p1 = 0;
    for (const auto& r : s.models) (r.model.empty() ? p0 : p1) = r.prob;
    const double odds = log_bf(c, ModelIndex({0}), ModelIndex(), coef).value + prior.log_prior_odds(1, 0);
    CHECK(std::log(p1 / p0) == doctest::Approx(odds).epsilon(1e-12));
}

TEST_CASE("equal evidences recover the prior") {
    const auto d = testutil::random_dataset(30, 4, {0.4}, 3);
    LinearCache c(d);
    const auto coef = CoefPriorSpec::normal_v(1e-12, VMode::DiagGramInverse);
    ModelPrior prior(ModelPriorSpec::complexity(4, 4, 1.0));
    const auto s = enumerate_posterior(c, coef, prior);
    for (const auto& r : s.models) CHECK(std::abs(r.prob - std::exp(prior.log_prior(r.model))) < 1e-9);
}

TEST_CASE("enumeration matches independently normalized evidences") {
    const auto d = testutil::random_dataset(20, 3, {0.7, 0, -0.5}, 4);
    LinearCache c(d);
    const double tau = 20;
    const auto coef = CoefPriorSpec::zellner_unknown(tau, 0.01, 0.01);
    ModelPrior prior(ModelPriorSpec::beta_binomial(3, 3));
    const auto s = enumerate_posterior(c, coef, prior);
    std::vector<double> lw;
    std::vector<ModelIndex> ms;
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
        const auto m = ModelIndex::from_mask(mask);
        const Matrix S = Matrix::Identity(20, 20) + tau * testutil::projection(d.X, m);
        lw.push_back(log_mvt_evidence(d.y, S, 0.01, 0.01) + prior.log_prior(m));
        ms.push_back(m);
    }
    const double mx = *std::max_element(lw.begin(), lw.end());
    double z = 0;
    for (double v : lw) z += std::exp(v - mx);
    std::vector<double> probs;
    for (double v : lw) probs.push_back(std::exp(v - mx) / z);
    double sum = 0;
    for (const auto& r : s.models) {
        for (std::size_t i = 0; i < ms.size(); ++i)
            if (ms[i] == r.model) CHECK(std::abs(r.prob - probs[i]) < 1e-6 * std::max(probs[i], 1e-3));
        sum += r.prob;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("inclusion probabilities are consistent with the model table") {
    const auto d = testutil::random_dataset(40, 8, {0.5, 0.3, 0.2}, 5);
    LinearCache c(d);
    const auto s = enumerate_posterior(c, CoefPriorSpec::zellner_unknown(40.0), ModelPrior(ModelPriorSpec::beta_binomial(8, 8)));
    for (int j = 0; j < 8; ++j) {
        double pip = 0;
        for (const auto& r : s.models)
            if (r.model.contains(j)) pip += r.prob;
        CHECK(std::abs(pip - s.pip[j]) < 1e-12);
    }
}

TEST_CASE("orthogonal dynamic program agrees with enumeration") {
    const auto d = orthogonal_dataset(40, 12, {0.6, 0.4, 0, 0.3}, 6);
    LinearCache c(d);
    const ModelIndex t({0, 1, 3});
    EngineOptions opt;
    opt.reference = t;
    opt.model_table = true;
    ModelPrior prior(ModelPriorSpec::beta_binomial(12, 12));
    for (const auto& coef : {CoefPriorSpec::zellner_unknown(40.0), CoefPriorSpec::zellner_known(40.0, 1.0),
                             CoefPriorSpec::normal_v(10.0, VMode::DiagGramInverse, 1.0, 1.0)}) {
        const auto e = enumerate_posterior(c, coef, prior, opt);
        const auto o = orthogonal_dp_posterior(c, coef, prior, opt);
        CHECK(total_variation(e, o) <= 1e-10);
        for (int j = 0; j < 12; ++j) CHECK(std::abs(e.pip[j] - o.pip[j]) <= 1e-10);
        for (int l = 0; l <= 12; ++l) {
            CHECK(std::abs(e.size_prob[l] - o.size_prob[l]) <= 1e-10);
            CHECK(std::abs(e.masses->sigma[l] - o.masses->sigma[l]) <= 1e-10);
            CHECK(std::abs(e.masses->sigma_tilde[l] - o.masses->sigma_tilde[l]) <= 1e-10);
        }
        CHECK(std::abs(e.masses->p_reference - o.masses->p_reference) <= 1e-10);
        CHECK(e.map == o.map);
    }
}

TEST_CASE("orthogonal pMOM is exact against Monte Carlo enumeration") {
    auto d = orthogonal_dataset(40, 6, {0.6, 0.3}, 7);
    LinearCache c(d);
    ModelPrior prior(ModelPriorSpec::beta_binomial(6, 6));
    const auto coef = CoefPriorSpec::pmom(0.348 * 40, 0.01, 0.01, 20000, 3);
    const auto e = enumerate_posterior(c, coef, prior);
    const auto o = orthogonal_dp_posterior(c, coef, prior);
    for (int j = 0; j < 6; ++j) CHECK(std::abs(e.pip[j] - o.pip[j]) < 0.01);
}

TEST_CASE("dynamic program with negligible signal returns the prior size masses") {
    const auto d = orthogonal_dataset(40, 10, {1.0}, 8);
    LinearCache c(d);
    ModelPrior prior(ModelPriorSpec::complexity(10, 10, 0.5));
    const auto o = orthogonal_dp_posterior(c, CoefPriorSpec::zellner_known(1e-14, 1.0), prior);
    for (int l = 0; l <= 10; ++l) CHECK(std::abs(o.size_prob[l] - std::exp(prior.log_size_mass(l))) < 1e-10);
}

TEST_CASE("dynamic program rejects correlated designs") {
    const auto d = testutil::random_dataset(40, 5, {1.0}, 9);
    LinearCache c(d);
    CHECK_THROWS_AS(orthogonal_dp_posterior(c, CoefPriorSpec::zellner_unknown(40.0), ModelPrior(ModelPriorSpec::uniform(5, 5))),
                    ContractError);
}

TEST_CASE("enumeration cap") {
    const auto d = testutil::random_dataset(60, 30, {1.0}, 10);
    LinearCache c(d);
    CHECK_THROWS_AS(enumerate_posterior(c, CoefPriorSpec::zellner_unknown(60.0), ModelPrior(ModelPriorSpec::uniform(30, 30))),
                    SizeError);
    CHECK(count_models(30, 2) == 1 + 30 + 435);
    CHECK(default_pbar(110, 100) == 100);
    CHECK(default_pbar(50, 100) == 45);
}

TEST_CASE("Gibbs agrees with enumeration on a correlated design") {
    const auto d = testutil::random_dataset(50, 10, {0.5, 0.4, 0.3}, 11, 0.5);
    LinearCache c(d);
    const auto coef = CoefPriorSpec::zellner_unknown(50.0);
    ModelPrior prior(ModelPriorSpec::beta_binomial(10, 10));
    const auto e = enumerate_posterior(c, coef, prior);
    GibbsConfig cfg;
    cfg.sweeps = 10000;
    cfg.burn_in = 1000;
    cfg.seed = 5;
    const auto g = gibbs_posterior(c, coef, prior, cfg);
    for (int j = 0; j < 10; ++j) CHECK(std::abs(g.pip[j] - e.pip[j]) <= 0.02);
    const auto g2 = gibbs_posterior(c, coef, prior, cfg);
    CHECK(g.pip == g2.pip);
    cfg.seed = 6;
    const auto g3 = gibbs_posterior(c, coef, prior, cfg);
    for (int j = 0; j < 10; ++j) CHECK(std::abs(g.pip[j] - g3.pip[j]) <= 4 * std::hypot(g.pip_se[j], g3.pip_se[j]) + 1e-9);
}

TEST_CASE("Gibbs on exchangeable zero-signal data") {
    // y orthogonal to every column of an orthogonal design: all variables are interchangeable.
    std::mt19937_64 rng(12);
    Dataset d;
    d.X = testutil::orthogonal_design(40, 8, rng);
    const Vector z = testutil::gaussian_matrix(40, 1, rng).col(0);
    d.y = z - testutil::projection(d.X, ModelIndex({0, 1, 2, 3, 4, 5, 6, 7})) * z;
    LinearCache c(d);
    const auto coef = CoefPriorSpec::zellner_unknown(40.0);
    ModelPrior prior(ModelPriorSpec::uniform(8, 8));
    const double common = enumerate_posterior(c, coef, prior).pip[0];
    GibbsConfig cfg;
    cfg.seed = 3;
    const auto g = gibbs_posterior(c, coef, prior, cfg);
    for (int j = 0; j < 8; ++j) CHECK(std::abs(g.pip[j] - common) <= 4 * g.pip_se[j] + 1e-9);
    cfg.random_scan = true;
    cfg.chains = 2;
    const auto r = gibbs_posterior(c, coef, prior, cfg);
    for (int j = 0; j < 8; ++j) CHECK(std::abs(r.pip[j] - common) <= 4 * r.pip_se[j] + 1e-9);
}

TEST_CASE("Gibbs respects the size cap") {
    const auto d = testutil::random_dataset(40, 8, {1, 1, 1, 1}, 13);
    LinearCache c(d);
    GibbsConfig cfg;
    cfg.sweeps = 2000;
    cfg.burn_in = 100;
    const auto g = gibbs_posterior(c, CoefPriorSpec::zellner_unknown(40.0), ModelPrior(ModelPriorSpec::uniform(8, 2)), cfg);
    for (const auto& r : g.models) CHECK(r.model.size() <= 2);
    cfg.burn_in = 2000;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("selection rules") {
    PosteriorSummary s;
    s.p = 2;
    s.pbar = 2;
    s.pip = {0.9, 0.4};
    s.models = {{ModelIndex({0}), 0, 0, 0.6, 0, 0}, {ModelIndex({0, 1}), 0, 0, 0.3, 0, 0}, {ModelIndex({1}), 0, 0, 0.1, 0, 0}};
    s.map = ModelIndex({0});
    s.map_prob = 0.6;
    const auto med = select(s, SelectRule::Median, 0.5, ModelIndex({0}));
    CHECK(med.model == ModelIndex({0}));
    CHECK(*med.equals_reference);
    CHECK(med.prob == doctest::Approx(0.6));
    const auto map = select(s, SelectRule::Map);
    CHECK(map.model == ModelIndex({0}));
    CHECK_THROWS_AS(select(s, SelectRule::Median, 1.0), ContractError);
}

TEST_CASE("MAP ties go to the smaller model") {
    const auto d = testutil::random_dataset(30, 3, {0.0}, 14);
    LinearCache c(d);
    const auto s = enumerate_posterior(c, CoefPriorSpec::normal_v(1e-300, VMode::DiagGramInverse),
                                       ModelPrior(ModelPriorSpec::uniform(3, 3)));
    CHECK(s.map.empty());
}

TEST_CASE("subset masses") {
    SUBCASE("flat stub with p = 4") {
        PosteriorSummary s;
        s.p = 4;
        s.pbar = 4;
        for (std::uint64_t m = 0; m < 16; ++m) s.models.push_back({ModelIndex::from_mask(m), 0, 0, 1.0 / 16, 0, 0});
        const auto sm = subset_masses(s, ModelIndex({0}));
        CHECK(sm.sigma[2] == doctest::Approx(3.0 / 16).epsilon(1e-15));
        CHECK(sm.p_reference == doctest::Approx(1.0 / 16));
    }
    SUBCASE("brute-force classification at p = 10") {
        const auto d = testutil::random_dataset(40, 10, {0.5, 0.5, 0.2}, 15, 0.2);
        LinearCache c(d);
        const ModelIndex t({0, 1, 2});
        EngineOptions opt;
        opt.reference = t;
        const auto s = enumerate_posterior(c, CoefPriorSpec::zellner_unknown(40.0), ModelPrior(ModelPriorSpec::beta_binomial(10, 10)), opt);
        std::vector<double> sig(11, 0.0), sigt(11, 0.0);
        double pt = 0;
        for (const auto& r : s.models) {
            bool super = true;
            for (int j : {0, 1, 2}) super &= r.model.contains(j);
            if (r.model.size() == 3 && super) pt += r.prob;
            else if (super) sig[r.model.size()] += r.prob;
            else sigt[r.model.size()] += r.prob;
        }
        double total = s.masses->p_reference;
        for (int l = 0; l <= 10; ++l) {
            CHECK(std::abs(sig[l] - s.masses->sigma[l]) < 1e-14);
            CHECK(std::abs(sigt[l] - s.masses->sigma_tilde[l]) < 1e-14);
            total += s.masses->sigma[l] + s.masses->sigma_tilde[l];
        }
        CHECK(std::abs(pt - s.masses->p_reference) < 1e-14);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

}
