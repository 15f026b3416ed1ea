// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/distributions/non_central_f.hpp>

#include "test_util.hpp"

#include "bvs/coef_priors.hpp"
#include "bvs/global_bounds.hpp"
#include "bvs/l0.hpp"
#include "bvs/posterior.hpp"
#include "bvs/simulation.hpp"
#include "bvs/tail_bounds.hpp"

using namespace bvs;
namespace bm = boost::math;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double log_mvt_evidence(const Vector& y, const Matrix& S, double a, double l) {
    Eigen::LDLT<Matrix> f(S);
    const double logdet = f.vectorD().array().log().sum();
    const double q = y.dot(f.solve(y));
    const double n = static_cast<double>(y.size());
    return std::lgamma(0.5 * (a + n)) - std::lgamma(0.5 * a) + 0.5 * a * std::log(0.5 * l) -
           0.5 * n * std::log(2 * M_PI) - 0.5 * logdet - 0.5 * (a + n) * std::log(0.5 * (l + q));
}

std::vector<ModelIndex> all_models(int p) {
    std::vector<ModelIndex> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p); ++mask) out.push_back(ModelIndex::from_mask(mask));
    return out;
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

// 1. Normalized enumeration probabilities against closed-form marginals.
void evidence_oracle(Outcome& o) {
    const auto t0 = Clock::now();
    double worst = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const int n = 15 + static_cast<int>((seed * 7) % 11);
        const auto d = testutil::random_dataset(n, 3, {0.7, 0, -0.5}, 100 + seed);
        LinearCache c(d);
        ModelPrior prior(ModelPriorSpec::beta_binomial(3, 3));
        const double tau = n;
        for (int known = 0; known < 2; ++known) {
            const auto coef = known ? CoefPriorSpec::zellner_known(tau, 1.0) : CoefPriorSpec::zellner_unknown(tau, 0.01, 0.01);
            const auto s = enumerate_posterior(c, coef, prior);
            std::map<ModelIndex, double> oracle;
            double mx = -INFINITY;
            for (const auto& m : all_models(3)) {
                const Matrix S = Matrix::Identity(n, n) + tau * testutil::projection(d.X, m);
                const double le = known ? testutil::log_mvn0(d.y, S) : log_mvt_evidence(d.y, S, 0.01, 0.01);
                oracle[m] = le + prior.log_prior(m);
                mx = std::max(mx, oracle[m]);
            }
            double z = 0;
            for (auto& [m, v] : oracle) z += std::exp(v - mx);
            for (const auto& r : s.models) {
                const double want = std::exp(oracle.at(r.model) - mx) / z;
                worst = std::max(worst, std::abs(r.prob - want) / want);
            }
            o.require(s.models.size() == 8, "all 8 models listed");
        }
    }
    const double secs = seconds_since(t0);
    o.require(worst <= 1e-5, "relative error <= 1e-5");
    o.require(secs < 10, "runtime < 10 s");
    o.detail << "max relative error " << worst << ", " << secs << " s";
}

// 2. Orthogonal DP against enumeration, and DP speed at p = 100.
void engine_equivalence(Outcome& o) {
    double tv = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto d = orthogonal_dataset(40, 12, {0.6, 0.4, 0, 0.3}, seed);
        LinearCache c(d);
        EngineOptions opt;
        opt.model_table = true;
        ModelPrior prior(ModelPriorSpec::beta_binomial(12, 12));
        const auto coef = CoefPriorSpec::zellner_unknown(40.0);
        tv = std::max(tv, total_variation(enumerate_posterior(c, coef, prior, opt),
                                          orthogonal_dp_posterior(c, coef, prior, opt)));
    }
    const auto d = orthogonal_dataset(110, 100, {0.25, 0.5, 0.75, 1.0, 1.5}, 9);
    LinearCache c(d);
    const auto t0 = Clock::now();
    const auto s = orthogonal_dp_posterior(c, CoefPriorSpec::zellner_unknown(110.0),
                                           ModelPrior(ModelPriorSpec::beta_binomial(100, 100)));
    const double secs = seconds_since(t0);
    o.require(tv <= 1e-10, "total variation <= 1e-10");
    o.require(secs < 1.0, "p = 100 DP < 1 s");
    o.require(s.pip.size() == 100, "p = 100 PIPs");
    o.detail << "TV " << tv << ", p=100 DP " << secs << " s";
}

// 3. Gibbs PIPs against enumeration on an equicorrelated design.
void gibbs_correctness(Outcome& o) {
    const auto t0 = Clock::now();
    double worst = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Scenario sc;
        sc.design = DesignKind::Equicorrelated;
        sc.rho = 0.5;
        sc.n = 100;
        sc.p = 10;
        sc.pt = 3;
        sc.coefficients = {0.4, 0.3, 0.25};
        sc.seed = seed;
        sc.bundles = {Bundle::zellner_betabinomial()};
        const auto d = generate(sc, 0);
        LinearCache c(d);
        const auto coef = CoefPriorSpec::zellner_unknown(d.n());
        ModelPrior prior(ModelPriorSpec::beta_binomial(10, 10));
        const auto e = enumerate_posterior(c, coef, prior);
        GibbsConfig cfg;
        cfg.sweeps = 10000;
        cfg.burn_in = 1000;
        cfg.seed = 1000 + seed;
        const auto g = gibbs_posterior(c, coef, prior, cfg);
        for (int j = 0; j < 10; ++j) worst = std::max(worst, std::abs(g.pip[j] - e.pip[j]));
    }
    const double secs = seconds_since(t0);
    o.require(worst <= 0.02, "max |dPIP| <= 0.02");
    o.require(secs < 60, "runtime < 60 s");
    o.detail << "max |dPIP| " << worst << ", " << secs << " s";
}

double chisq_sf(double nu, double lam, double w) {
    if (lam == 0) return bm::cdf(bm::complement(bm::chi_squared(nu), w));
    return bm::cdf(bm::complement(bm::non_central_chi_squared(nu, lam), w));
}
double chisq_cdf(double nu, double lam, double w) {
    if (lam == 0) return bm::cdf(bm::chi_squared(nu), w);
    return bm::cdf(bm::non_central_chi_squared(nu, lam), w);
}
// P(nu1 W > w) for W ~ F(nu1, nu2, lambda)
double f_sf(double nu1, double nu2, double lam, double w) {
    if (lam == 0) return bm::cdf(bm::complement(bm::fisher_f(nu1, nu2), w / nu1));
    return bm::cdf(bm::complement(bm::non_central_f(nu1, nu2, lam), w / nu1));
}
double f_cdf(double nu1, double nu2, double lam, double w) {
    if (lam == 0) return bm::cdf(bm::fisher_f(nu1, nu2), w / nu1);
    return bm::cdf(bm::non_central_f(nu1, nu2, lam), w / nu1);
}

// Monte Carlo P(nu1 W < w) with 1e6 draws and its standard error.
std::pair<double, double> f_cdf_mc(double nu1, double nu2, double lam, double w, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::chi_squared_distribution<double> c1(nu1), c2(nu2);
    const int draws = 1000000;
    int hits = 0;
    for (int i = 0; i < draws; ++i) {
        // chi^2_nu1(lambda) as (Z + sqrt(lambda))^2 + chi^2_{nu1 - 1}
        const double a = z(rng) + std::sqrt(lam);
        const double u1 = a * a + (nu1 > 1 ? std::chi_squared_distribution<double>(nu1 - 1)(rng) : 0.0);
        const double u2 = c2(rng);
        hits += u1 * nu2 / u2 < w;
    }
    (void)c1;
    const double pr = static_cast<double>(hits) / draws;
    return {pr, std::sqrt(pr * (1 - pr) / draws)};
}

// 4. Every applicable tail bound dominates the exact tail.
void bound_domination(Outcome& o) {
    const auto t0 = Clock::now();
    const std::vector<double> nus{1, 2, 5, 20, 100}, lams{0, 1, 25, 100};
    const std::vector<double> right_k{1.05, 1.5, 2, 4, 8, 16}, left_f{0.02, 0.1, 0.3, 0.5, 0.7, 0.9, 0.98};
    int checks = 0, violations = 0;
    std::string first;
    auto dominate = [&](const TailResult& r, double exact, const std::string& what) {
        if (!r.applicable) return;
        ++checks;
        if (r.value < exact * (1 - 1e-9) - 1e-300) {
            ++violations;
            if (first.empty()) first = what;
        }
    };
    auto tag = [](const char* f, double a, double b, double c, double d = 0) {
        std::ostringstream s;
        s << f << "(" << a << "," << b << "," << c << "," << d << ")";
        return s.str();
    };
    for (double nu : nus) {
        for (double k : right_k) dominate(chisq_right(nu, k * nu), chisq_sf(nu, 0, k * nu), tag("chisq_right", nu, k * nu, 0));
        for (double f : left_f) dominate(chisq_left(nu, f * nu), chisq_cdf(nu, 0, f * nu), tag("chisq_left", nu, f * nu, 0));
        for (double lam : lams) {
            const double mean = nu + lam;
            for (double k : right_k)
                for (auto v : {NcRightVariant::SqrtChoice, NcRightVariant::NuChoice, NcRightVariant::Optimal})
                    dominate(ncchisq_right(nu, lam, k * mean, v), chisq_sf(nu, lam, k * mean), tag("ncchisq_right", nu, lam, k * mean));
            if (lam > 0)
                for (double f : left_f)
                    dominate(ncchisq_left(nu, lam, f * lam), chisq_cdf(nu, lam, f * lam), tag("ncchisq_left", nu, lam, f * lam));
            for (double nu2 : {5.0, 20.0, 100.0}) {
                for (double k : right_k) {
                    const double w = k * mean * std::max(1.0, nu2 / (nu2 - 2));
                    const double ex = f_sf(nu, nu2, lam, w);
                    for (auto mode : {FRightMode::Closed, FRightMode::Optimal})
                        dominate(f_right(nu, nu2, lam, w, mode), ex, tag("f_right", nu, nu2, lam, w));
                    if (lam == 0) {
                        // threshold on W itself: P(W > w / nu1) = P(nu1 W > w)
                        dominate(f_moment(nu, nu2, w / nu), ex, tag("f_moment", nu, nu2, w));
                        dominate(f_moment(nu, nu2, w / nu, std::nullopt, FMomentForm::Simplified), ex,
                                 tag("f_moment_s", nu, nu2, w));
                    }
                }
                if (lam > 0)
                    for (double f : left_f) {
                        const double w = f * lam;
                        dominate(f_left(nu, nu2, lam, w), f_cdf(nu, nu2, lam, w), tag("f_left", nu, nu2, lam, w));
                    }
            }
        }
    }
    // Monte Carlo cross-check of the left F bound where the exact non-central F CDF is least tested.
    int mc_checks = 0, mc_violations = 0;
    std::uint64_t seed = 1;
    for (double nu : {1.0, 5.0})
        for (double lam : {25.0, 100.0})
            for (double f : {0.3, 0.7}) {
                const auto r = f_left(nu, 20, lam, f * lam);
                if (!r.applicable) continue;
                const auto [pr, se] = f_cdf_mc(nu, 20, lam, f * lam, seed++);
                ++mc_checks;
                mc_violations += r.value < pr - 3 * se;
            }
    const double secs = seconds_since(t0);
    o.require(violations == 0, "exact-tail domination (first: " + first + ")");
    o.require(mc_violations == 0, "Monte Carlo domination");
    o.require(checks > 500, "grid coverage");
    o.require(secs < 300, "runtime < 5 min");
    o.detail << checks << " applicable grid points, " << violations << " violations; " << mc_checks
             << " MC checks, " << mc_violations << " violations; " << secs << " s";
}

// 5. Global sums against brute-force per-model sums; simplified rates dominate.
void global_exactness(Outcome& o) {
    double worst = 0;
    auto rel = [&](double got, double want) {
        worst = std::max(worst, std::abs(got - want) / std::max(std::abs(want), 1e-300));
    };
    for (const auto& pr : {ModelPriorSpec::uniform(12, 12), ModelPriorSpec::beta_binomial(12, 12),
                           ModelPriorSpec::complexity(12, 12, 1.0)})
        for (int pt : {1, 3, 5}) {
            BoundScenario sc;
            sc.n = 60;
            sc.p = 12;
            sc.pbar = 12;
            sc.pt = pt;
            sc.tau = 60;
            sc.model_prior = pr;
            sc.lambda_lo = 8;
            sc.lambda_hi = 12;
            ModelPrior prior(pr);
            const ModelIndex t = ModelIndex::from_mask((std::uint64_t{1} << pt) - 1);
            const std::vector<L0Spec> crits{L0Spec::bic(), L0Spec::ebic(0.5), L0Spec::ric()};
            std::vector<double> sums(3 + 3 * crits.size(), 0.0);
            for (const auto& m : all_models(12)) {
                const int l = m.size();
                int shared = 0;
                for (int j : t.indices()) shared += m.contains(j);
                const bool superset = shared == pt;
                for (std::size_t ci = 0; ci <= crits.size(); ++ci) {
                    const L0Spec* l0 = ci ? &crits[ci - 1] : nullptr;
                    auto weight = [&](int k) {
                        if (l0) return std::exp(-sc.alpha * (penalty(k, sc.n, sc.p, *l0) - penalty(pt, sc.n, sc.p, *l0)));
                        return std::exp(sc.alpha * prior.log_prior_odds(k, pt)) * std::pow(sc.tau, -sc.alpha * (k - pt) / 2.0);
                    };
                    double* s = &sums[3 * ci];
                    if (superset && l > pt) s[0] += weight(l);
                    if (l < pt) s[1] += (l0 ? weight(l) : 1.0 / weight(l)) * std::exp(-std::pow(sc.lambda_lo, sc.alpha2) * (pt - l) / 2.0);
                    if (l == pt) s[2] += std::exp(-sc.lambda_hi / 2.0);
                    if (l > pt && !superset) s[2] += weight(l) * std::exp(-(pt - shared) * std::pow(sc.lambda_hi, sc.alpha2) / 2.0);
                }
            }
            rel(bound_spurious(sc).raw, sums[0]);
            rel(bound_nonspurious_small(sc).raw, sums[1]);
            rel(bound_nonspurious_large(sc).raw, sums[2]);
            for (std::size_t ci = 0; ci < crits.size(); ++ci) {
                const auto b = bound_l0(sc, crits[ci]);
                rel(b.spurious.raw, sums[3 * ci + 3]);
                rel(b.nonspurious_small.raw, sums[3 * ci + 4]);
                rel(b.nonspurious_large.raw, sums[3 * ci + 5]);
            }
        }
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0, 1);
    int checked = 0, failed = 0;
    for (int i = 0; i < 50; ++i) {
        const int p = 20 + static_cast<int>(U(rng) * 200);
        const int pbar = std::min(p, 10 + static_cast<int>(U(rng) * 30));
        BoundScenario sc;
        sc.p = p;
        sc.n = 2 * p;
        sc.pbar = pbar;
        sc.pt = 1 + static_cast<int>(U(rng) * 5);
        sc.tau = std::pow(10.0, 1 + 4 * U(rng));
        sc.model_prior = i % 3 == 0   ? ModelPriorSpec::uniform(p, pbar)
                         : i % 3 == 1 ? ModelPriorSpec::beta_binomial(p, pbar)
                                      : ModelPriorSpec::complexity(p, pbar, 0.5 + U(rng));
        const auto rep = simplified_rates(sc);
        for (const auto& r : rep.rates)
            if (r.applicable && r.is_bound) {
                ++checked;
                failed += r.value < rep.exact_spurious * (1 - 1e-12);
            }
    }
    o.require(worst <= 1e-10, "brute-force agreement to 1e-10");
    o.require(failed == 0, "simplified rates dominate");
    o.require(checked > 0, "some rates applicable");
    o.detail << "max relative error " << worst << "; rates " << checked << " checked, " << failed << " failed";
}

// 6. Bound curves for Cases 1 and 3.
void curve_shape(Outcome& o) {
    std::vector<int> grid;
    for (int n = 200; n <= 2000; n += 50) grid.push_back(n);
    const auto c1 = bound_curves(1, grid), c3 = bound_curves(3, grid);
    bool decreasing = true;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        decreasing &= c1[i].spurious.log_raw < c1[i - 1].spurious.log_raw;
        decreasing &= c3[i].spurious.log_raw < c3[i - 1].spurious.log_raw;
    }
    const auto x1 = crossing_n(c1), x3 = crossing_n(c3);
    o.require(decreasing, "spurious curves decrease");
    o.require(x1.has_value() && x3.has_value() && *x1 < *x3, "Case 1 crossing < Case 3 crossing");
    o.detail << "crossing n: Case 1 " << (x1 ? std::to_string(*x1) : "none") << ", Case 3 "
             << (x3 ? std::to_string(*x3) : "none");
}

double mean_pip(const RunResult& r, const std::string& bundle, const std::function<bool(const PipRow&)>& keep) {
    double s = 0;
    int k = 0;
    for (const auto& row : r.pips)
        if (row.bundle == bundle && keep(row)) s += row.mean_pip, ++k;
    return k ? s / k : NAN;
}

// 7. Orthogonal study orderings.
void orthogonal_study_check(Outcome& o, std::vector<RunResult>& runs) {
    const auto t0 = Clock::now();
    const auto r1 = run(orthogonal_study(1, 20));
    const auto r2 = run(orthogonal_study(2, 20));
    auto inactive = [](const PipRow& r) { return r.theta_star == 0; };
    for (const auto* r : {&r1, &r2}) {
        const double cx = mean_pip(*r, "zellner-complexity", inactive), bb = mean_pip(*r, "zellner-betabinomial", inactive);
        o.require(cx <= bb, r->scenario + ": inactive PIP Complexity <= BetaBinomial");
        o.detail << r->scenario << " inactive PIP " << cx << " vs " << bb << "; ";
    }
    auto small = [](const PipRow& r) { return r.theta_star == 0.25; };
    const double cx = mean_pip(r2, "zellner-complexity", small), bb = mean_pip(r2, "zellner-betabinomial", small);
    o.require(bb - cx >= 0.15, "theta=0.25 gap >= 0.15");
    o.detail << "theta=0.25 PIP " << cx << " vs " << bb << "; ";
    auto big = [](const PipRow& r) { return r.theta_star == 1.5; };
    for (const auto& b : r1.bundles) {
        const double v = mean_pip(r1, b, big);
        o.require(v > 0.9, b + ": theta=1.5 PIP > 0.9");
        o.detail << b << " theta=1.5 PIP " << v << "; ";
    }
    o.detail << seconds_since(t0) << " s";
    runs.push_back(r1);
    runs.push_back(r2);
}

// 8. Frequentist checks, non-centrality law and shrunken F bounds.
void inequality_checks(Outcome& o, std::vector<RunResult>& runs) {
    for (auto design : {DesignKind::Equicorrelated, DesignKind::Misspecified, DesignKind::Heteroskedastic}) {
        Scenario sc;
        sc.name = "ci-" + design_name(design);
        sc.design = design;
        sc.rho = 0.3;
        sc.n = 40;
        sc.p = 8;
        sc.pt = 2;
        sc.coefficients = {0.5, 0.35};
        sc.engine = EngineKind::Enumerate;
        sc.replicates = 200;
        sc.seed = 31;
        sc.bundles = {Bundle::zellner_complexity(), Bundle::zellner_betabinomial()};
        L0Spec ebic = L0Spec::ebic(0.5);
        Bundle b;
        b.name = "ebic";
        b.l0 = ebic;
        sc.bundles.push_back(b);
        runs.push_back(run(sc));
    }
    int checks = 0, failed = 0;
    for (const auto& r : runs)
        for (const auto& c : r.checks) {
            ++checks;
            if (!c.holds) {
                ++failed;
                o.detail << " " << r.scenario << "/" << c.bundle << "/" << c.name;
            }
        }
    o.require(failed == 0, "selection-error inequalities within 3 SE");

    // Non-centrality law of W = s_m - s_q.
    const auto d0 = testutil::random_dataset(50, 4, {0.3, 0.2, -0.25, 0}, 21, 0.4);
    const ModelIndex m({0}), q({0, 1, 2});
    const double lambda = noncentrality_nested(d0, m, q);
    const Matrix P = testutil::projection(d0.X, q) - testutil::projection(d0.X, m);
    const Vector mu = d0.X * d0.truth->theta;
    std::mt19937_64 rng(22);
    std::normal_distribution<double> z;
    const int reps = 100000;
    std::vector<double> w(reps);
    testutil::MeanVar mv, sq;
    for (int r = 0; r < reps; ++r) {
        Vector y = mu;
        for (int i = 0; i < y.size(); ++i) y(i) += z(rng);
        w[r] = y.dot(P * y);
        mv.add(w[r]);
    }
    for (double x : w) sq.add((x - mv.mean) * (x - mv.mean));
    const double zm = (mv.mean - (2 + lambda)) / mv.se(), zv = (sq.mean - (4 + 4 * lambda)) / sq.se();
    o.require(std::abs(zm) < 4 && std::abs(zv) < 4, "non-centrality law within 4 SE");

    // Shrunken F statistic inequalities on 500 random nested pairs.
    std::mt19937_64 pick(99);
    int viol = 0, stated_viol = 0;
    for (int i = 0; i < 500; ++i) {
        const int p = 6;
        const auto d = testutil::random_dataset(25, p, {0.4, -0.3, 0.2}, 5000 + i, 0.3);
        LinearCache c(d);
        std::vector<int> tv, mvv;
        for (int j = 0; j < p - 1; ++j) {
            const int u = static_cast<int>(pick() % 3);
            if (u == 0) tv.push_back(j);
            if (u <= 1) mvv.push_back(j);
        }
        if (mvv.size() == tv.size()) mvv.push_back(p - 1);
        const double tau = 0.5 + (i % 7) * 3.0;
        const auto spec = i % 2 ? CoefPriorSpec::zellner_unknown(tau, 0.01, 0.01)
                                : CoefPriorSpec::normal_v(tau, VMode::DiagGramInverse, 0.01, 0.01);
        const auto r = fstat_bayes_bound_check(c, ModelIndex(tv), ModelIndex(mvv), spec);
        viol += !(r.ratio_lower_ok && r.ratio_upper_lphi_ok && r.ftilde_ok);
        stated_viol += !r.ratio_upper_ok;
    }
    o.require(viol == 0, "shrunken F bounds: zero violations");
    o.detail << " " << checks << " simulation checks, " << failed << " failed; W law z = " << zm << ", " << zv
             << "; shrunken F violations " << viol << " (ratio bound without l_phi: " << stated_viol << ")";
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void(Outcome&)> fn;
    };
    std::vector<RunResult> runs;
    const std::vector<Criterion> criteria{
        {"1 evidence oracle", evidence_oracle},
        {"2 engine equivalence", engine_equivalence},
        {"3 Gibbs correctness", gibbs_correctness},
        {"4 bound domination", bound_domination},
        {"5 global-bound exactness", global_exactness},
        {"6 bound curve shape", curve_shape},
        {"7 orthogonal study orderings", [&](Outcome& o) { orthogonal_study_check(o, runs); }},
        {"8 inequality checks", [&](Outcome& o) { inequality_checks(o, runs); }},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            c.fn(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        failures += !o.pass;
        std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failures ? 1 : 0;
}
