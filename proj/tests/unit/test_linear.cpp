#include <cstdio>
#include <filesystem>

#include <boost/math/distributions/fisher_f.hpp>

#include "doctest.h"
#include "test_util.hpp"

#include "bvs/dataset_io.hpp"
#include "bvs/error.hpp"
#include "bvs/linear.hpp"

using namespace bvs;

TEST_SUITE("linear") {

TEST_CASE("model index labels and masks") {
    const ModelIndex m({0, 2});
    CHECK(m.label() == "{1,3}");
    CHECK(m.mask_hex() == "0x5");
    CHECK(ModelIndex::from_mask(5) == m);
    CHECK(ModelIndex({0}).is_strict_subset_of(m));
    CHECK(m.with(1) == ModelIndex({0, 1, 2}));
    CHECK(m.without(0) == ModelIndex({2}));
    CHECK_THROWS_AS(ModelIndex({2, 1}), ContractError);
    CHECK(ModelIndex({70}).mask_hex().size() > 18);
}

TEST_CASE("ones column with constant response") {
    Dataset d;
    d.X = Matrix::Ones(4, 1);
    d.y = Vector::Ones(4);
    const auto f = fit_least_squares(d, ModelIndex({0}));
    CHECK(f.theta_hat(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(f.rss) < 1e-12);
}

TEST_CASE("empty model residual is y'y") {
    const auto d = testutil::random_dataset(20, 3, {1, 0, 0}, 3);
    LinearCache c(d);
    CHECK(c.rss(ModelIndex()) == doctest::Approx(d.y.squaredNorm()).epsilon(1e-14));
}

TEST_CASE("residual sum of squares matches an explicit projection") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto d = testutil::random_dataset(20, 3, {0.7, -0.4, 0}, seed);
        LinearCache c(d);
        const ModelIndex m({0, 1, 2});
        const Matrix H = testutil::projection(d.X, m);
        const double oracle = (d.y - H * d.y).squaredNorm();
        CHECK(c.rss(m) == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("duplicated column is rank deficient") {
    auto d = testutil::random_dataset(20, 3, {1, 0, 0}, 4);
    d.X.col(1) = d.X.col(0);
    LinearCache c(d);
    CHECK_THROWS_AS(c.rss(ModelIndex({0, 1})), SingularError);
}

TEST_CASE("rss is monotone under nesting") {
    const auto d = testutil::random_dataset(30, 6, {0.5, 0.5}, 9);
    LinearCache c(d);
    ModelIndex m;
    double prev = c.rss(m);
    for (int j = 0; j < 6; ++j) {
        m = m.with(j);
        const double s = c.rss(m);
        CHECK(s <= prev + 1e-10);
        prev = s;
    }
}

TEST_CASE("F statistic hand example") {
    Dataset d;
    d.X = Matrix::Zero(10, 1);
    d.X(0, 0) = 1.0;
    d.y = Vector::Zero(10);
    d.y(0) = std::sqrt(5.0);
    d.y(1) = std::sqrt(5.0);
    LinearCache c(d);
    CHECK(f_statistic(c, ModelIndex({0}), ModelIndex()) == doctest::Approx(9.0).epsilon(1e-12));
    CHECK_THROWS_AS(f_statistic(c, ModelIndex(), ModelIndex({0})), ContractError);
}

TEST_CASE("F statistic under the null has the F law") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> z;
    const int n = 20;
    Matrix X = testutil::standardize(testutil::gaussian_matrix(n, 3, rng));
    const ModelIndex t({0}), m({0, 1, 2});
    const int reps = 100000;
    testutil::MeanVar mv;
    int above = 0;
    boost::math::fisher_f F(2, n - 3);
    const double q90 = boost::math::quantile(F, 0.9);
    for (int r = 0; r < reps; ++r) {
        Dataset d;
        d.X = X;
        d.y.resize(n);
        for (int i = 0; i < n; ++i) d.y(i) = z(rng);
        LinearCache c(d);
        const double f = f_statistic(c, m, t);
        mv.add(f);
        above += f > q90;
    }
    const double mean = (n - 3.0) / (n - 5.0);
    CHECK(std::abs(mv.mean - mean) < 4 * mv.se());
    const double frac = above / static_cast<double>(reps);
    CHECK(std::abs(frac - 0.1) < 4 * std::sqrt(0.09 / reps));
}

TEST_CASE("noncentrality on an orthogonal design") {
    std::mt19937_64 rng(5);
    Dataset d;
    d.X = testutil::orthogonal_design(100, 3, rng);
    Vector th = Vector::Zero(3);
    th(0) = 0.5;
    d.y = d.X * th;
    d.truth = Truth{ModelIndex({0}), th, 1.0, {}, {}, {}};
    CHECK(noncentrality_nested(d, ModelIndex({1}), ModelIndex({0, 1})) == doctest::Approx(25.0).epsilon(1e-10));
    CHECK(noncentrality_nested(d, ModelIndex({0}), ModelIndex({0, 1})) == doctest::Approx(0.0));
}

TEST_CASE("W_qm law: mean and variance of a non-central chi-square") {
    // Correlated design; W = s_m - s_q computed from explicit projections.
    const auto d0 = testutil::random_dataset(50, 4, {0.3, 0.2, -0.25, 0}, 21, 0.4);
    const ModelIndex m({0}), q({0, 1, 2});
    const double lambda = noncentrality_nested(d0, m, q);
    const Matrix P = testutil::projection(d0.X, q) - testutil::projection(d0.X, m);
    const Vector mu = d0.X * d0.truth->theta;
    std::mt19937_64 rng(22);
    std::normal_distribution<double> z;
    testutil::MeanVar mv, sq;
    const int reps = 100000;
    std::vector<double> w(reps);
    for (int r = 0; r < reps; ++r) {
        Vector y = mu;
        for (int i = 0; i < y.size(); ++i) y(i) += z(rng);
        w[r] = y.dot(P * y);
        mv.add(w[r]);
    }
    for (double x : w) sq.add((x - mv.mean) * (x - mv.mean));
    const double nu = 2;
    CHECK(std::abs(mv.mean - (nu + lambda)) < 4 * mv.se());
    CHECK(std::abs(sq.mean - (2 * nu + 4 * lambda)) < 4 * sq.se());
}

TEST_CASE("sandwich eigenvalues") {
    SUBCASE("identity covariance") {
        const auto d = testutil::random_dataset(30, 3, {0.5, 0.5, 0}, 2);
        const auto s = sandwich_eigs(d, ModelIndex({0}), ModelIndex({0, 1, 2}));
        CHECK(s.omega_lo == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(s.omega_hi == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(s.lambda_tilde == doctest::Approx(s.lambda).epsilon(1e-10));
    }
    SUBCASE("diagonal covariance on coordinate columns") {
        Dataset d;
        d.X = Matrix::Zero(4, 2);
        d.X(0, 0) = 1;
        d.X(1, 1) = 1;
        d.y = Vector::Zero(4);
        Matrix S = Matrix::Zero(4, 4);
        S.diagonal() << 0.5, 1.5, 1.5, 0.5;
        d.truth = Truth{ModelIndex({0}), Vector::Ones(2), 1.0, S, {}, {}};
        const auto s = sandwich_eigs(d, ModelIndex(), ModelIndex({0, 1}));
        CHECK(s.omega_lo == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(s.omega_hi == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("AR(1) covariance brackets") {
        auto d = testutil::random_dataset(40, 4, {0.6, -0.3, 0.4, 0}, 8);
        Matrix S(40, 40);
        for (int i = 0; i < 40; ++i)
            for (int j = 0; j < 40; ++j) S(i, j) = std::pow(0.6, std::abs(i - j));
        d.truth->sigma = S;
        for (const auto& m : {ModelIndex(), ModelIndex({0}), ModelIndex({1, 3})}) {
            const auto s = sandwich_eigs(d, m, ModelIndex({0, 1, 2, 3}));
            CHECK(s.bracket_holds);
            CHECK(s.omega_lo <= s.omega_hi);
        }
        const auto [lo, hi] = complement_eigs(d, ModelIndex({0, 1}));
        CHECK(lo > 0);
        CHECK(lo <= hi);
    }
}

TEST_CASE("shrinkage moments") {
    SUBCASE("huge tau recovers theta") {
        const auto d = testutil::random_dataset(50, 3, {0.5, -1, 0.25}, 31);
        const auto r = shrinkage_moments(d, ModelIndex({0, 1, 2}), 1e12, VMode::DiagGramInverse);
        const Vector th = kl_optimal_coefficients(d, ModelIndex({0, 1, 2}));
        CHECK((r.mu - th).norm() < 1e-9);
    }
    SUBCASE("orthogonal design with Zellner V has unit eigenvalues") {
        std::mt19937_64 rng(3);
        Dataset d;
        d.X = testutil::orthogonal_design(60, 2, rng);
        d.y = Vector::Zero(60);
        d.truth = Truth{ModelIndex({0, 1}), Vector::Constant(2, 0.5), 1.0, {}, {}, {}};
        const double tau = 4;
        const auto r = shrinkage_moments(d, ModelIndex({0, 1}), tau, VMode::Zellner);
        CHECK(r.rho(0) == doctest::Approx(1.0).epsilon(1e-12));
        // sigma_ii / sigma~_ii = (tau/(1+tau))^2 exactly.
        const double exact = std::pow(tau / (1 + tau), 2);
        CHECK(r.sigma_ii(0) / r.sigma_tilde_ii(0) == doctest::Approx(exact).epsilon(1e-12));
        CHECK(r.variance_ok);
        CHECK_FALSE(r.stated_variance_ok);
    }
    SUBCASE("corrected brackets hold on random designs") {
        int stated_fail = 0;
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            const auto d = testutil::random_dataset(25, 3, {0.8, -0.5, 0.3}, seed, 0.5);
            const double tau = 0.5 + seed % 5;
            const auto r = shrinkage_moments(d, ModelIndex({0, 1, 2}), tau, VMode::DiagGramInverse);
            CHECK(r.variance_ok);
            CHECK(r.mean_ok);
            CHECK(r.ncp_ok);
            stated_fail += !(r.stated_variance_ok && r.stated_mean_ok && r.stated_ncp_ok);
        }
        MESSAGE("as-stated bracket failures: " << stated_fail << " of 40");
    }
}

TEST_CASE("dataset csv round trip") {
    const auto d = testutil::random_dataset(12, 3, {1, 0, 0}, 4);
    const auto path = (std::filesystem::temp_directory_path() / "bvs_rt.csv").string();
    write_dataset_csv(d, path);
    const auto e = read_dataset_csv(path);
    CHECK(e.n() == 12);
    CHECK(e.p() == 3);
    CHECK((e.X - d.X).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((e.y - d.y).cwiseAbs().maxCoeff() < 1e-14);
    std::remove(path.c_str());
}

}
