#include "bvs/global_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

#include "bvs/error.hpp"
#include "bvs/numeric.hpp"

namespace bvs {

void BoundScenario::validate() const {
    if (n < 1 || p < 1) throw ContractError("bound scenario: n, p must be positive");
    if (pt < 0 || pt > pbar || pbar > std::min(n, p)) throw ContractError("bound scenario: need p_t <= pbar <= min(n, p)");
    if (!(tau > 0)) throw ContractError("bound scenario: tau must be positive");
    if (!(lambda_lo > 0) || !(lambda_hi > 0)) throw ContractError("bound scenario: signal floors must be positive");
    if (!(alpha > 0 && alpha < 1 && alpha2 > 0 && alpha2 < alpha))
        throw ContractError("bound scenario: need 0 < alpha' < alpha < 1");
    if (!(gamma > 0 && gamma < 1)) throw ContractError("bound scenario: gamma must lie in (0,1)");
    if (model_prior.p != p || model_prior.pbar != pbar) throw ContractError("bound scenario: model prior p/pbar mismatch");
    if (!small_exponent_override.empty() && static_cast<int>(small_exponent_override.size()) != pt)
        throw ContractError("bound scenario: small-size override needs p_t entries");
}

BoundValue BoundValue::from_log(double log_raw) {
    BoundValue b;
    b.log_raw = log_raw;
    b.raw = std::exp(log_raw);
    b.clamped = log_raw > 0;
    b.value = b.clamped ? 1.0 : b.raw;
    return b;
}

namespace {

// Size-level ingredients shared by the three sums.
struct SizeTerms {
    const BoundScenario& sc;
    ModelPrior prior;
    const L0Spec* l0;
    double eta_t = 0;

    SizeTerms(const BoundScenario& s, const L0Spec* l) : sc(s), prior(s.model_prior), l0(l) {
        if (l0) eta_t = penalty(sc.pt, sc.n, sc.p, *l0);
    }

    // log of r_{l,p_t}^alpha tau^{-alpha (l - p_t)/2}, or -alpha (eta_l - eta_t).
    double log_weight(int l) const {
        if (l0) return -sc.alpha * (penalty(l, sc.n, sc.p, *l0) - eta_t);
        return sc.alpha * prior.log_prior_odds(l, sc.pt) - sc.alpha * (l - sc.pt) / 2.0 * std::log(sc.tau);
    }
    double log_small_weight(int l, SmallForm form) const {
        if (l0 || form == SmallForm::Consistent) return log_weight(l);
        return -log_weight(l);
    }
    double small_exponent(int l) const {
        if (!sc.small_exponent_override.empty()) return sc.small_exponent_override[l] / 2.0;
        return std::pow(sc.lambda_lo, sc.alpha2) * (sc.pt - l) / 2.0;
    }
    double large_exponent(int missing) const { return missing * std::pow(sc.lambda_hi, sc.alpha2) / 2.0; }
};

double sum_spurious(const SizeTerms& st) {
    const auto& sc = st.sc;
    LogAccumulator acc;
    for (int l = sc.pt + 1; l <= sc.pbar; ++l) acc.add(log_binom(sc.p - sc.pt, l - sc.pt) + st.log_weight(l));
    return acc.value();
}

double sum_small(const SizeTerms& st, SmallForm form) {
    const auto& sc = st.sc;
    LogAccumulator acc;
    for (int l = 0; l < sc.pt; ++l) acc.add(log_binom(sc.p, l) + st.log_small_weight(l, form) - st.small_exponent(l));
    return acc.value();
}

double sum_large(const SizeTerms& st) {
    const auto& sc = st.sc;
    LogAccumulator acc;
    acc.add(log_binom(sc.p, sc.pt) - sc.lambda_hi / 2.0);
    for (int l = sc.pt + 1; l <= sc.pbar; ++l) {
        LogAccumulator inner;
        for (int j = 0; j < sc.pt; ++j)
            inner.add(log_binom(sc.pt, j) + log_binom(sc.p - sc.pt, l - j) - st.large_exponent(sc.pt - j));
        acc.add(st.log_weight(l) + inner.value());
    }
    return acc.value();
}

}  // namespace

BoundValue bound_spurious(const BoundScenario& sc) {
    sc.validate();
    return BoundValue::from_log(sum_spurious(SizeTerms(sc, nullptr)));
}

BoundValue bound_nonspurious_small(const BoundScenario& sc, SmallForm form) {
    sc.validate();
    return BoundValue::from_log(sum_small(SizeTerms(sc, nullptr), form));
}

BoundValue bound_nonspurious_large(const BoundScenario& sc) {
    sc.validate();
    return BoundValue::from_log(sum_large(SizeTerms(sc, nullptr)));
}

L0Bounds bound_l0(const BoundScenario& sc, const L0Spec& l0) {
    sc.validate();
    SizeTerms st(sc, &l0);
    return {BoundValue::from_log(sum_spurious(st)), BoundValue::from_log(sum_small(st, SmallForm::Display)),
            BoundValue::from_log(sum_large(st))};
}

double log_term_model(const BoundScenario& sc, const ModelIndex& m, const ModelIndex& t, BoundPart part,
                      const L0Spec* l0, SmallForm form) {
    sc.validate();
    if (t.size() != sc.pt) throw ContractError("log_term_model: true model size differs from p_t");
    const int l = m.size();
    if (l > sc.pbar) return kNegInf;
    SizeTerms st(sc, l0);
    const bool spurious = t.is_strict_subset_of(m);
    switch (part) {
        case BoundPart::Spurious:
            return spurious ? st.log_weight(l) : kNegInf;
        case BoundPart::NonspuriousSmall:
            return l < sc.pt ? st.log_small_weight(l, form) - st.small_exponent(l) : kNegInf;
        case BoundPart::NonspuriousLarge: {
            if (l < sc.pt || spurious) return kNegInf;
            if (l == sc.pt) return -sc.lambda_hi / 2.0;
            int j = 0;
            for (int v : m.indices()) j += t.contains(v) ? 1 : 0;
            return st.log_weight(l) - st.large_exponent(sc.pt - j);
        }
    }
    return kNegInf;
}

RateReport simplified_rates(const BoundScenario& sc) {
    sc.validate();
    RateReport rep;
    rep.exact_spurious = bound_spurious(sc).raw;
    const double p = sc.p, pt = sc.pt, a = sc.alpha;
    const double ta = std::pow(sc.tau, a / 2.0);
    const auto kind = sc.model_prior.kind;

    const double q = (p - pt) / ta;
    {
        RateEntry e{"uniform_geometric", 0, kind == ModelPriorKind::Uniform, true, ""};
        const int top = sc.pbar - sc.pt;
        e.value = std::abs(q - 1) < 1e-15 ? top : (q - std::pow(q, top + 1)) / (1 - q);
        if (!e.applicable) e.note = "prior is not uniform";
        rep.rates.push_back(e);
        rep.rates.push_back({"uniform_order", q, kind == ModelPriorKind::Uniform && q < 1, false, "(p - p_t)/tau^{alpha/2}"});
    }

    const double b = std::pow(p - pt, 1 - a) / ta;
    auto gf = [&](double x) { return std::expm1(-(pt + 1) * std::log1p(-x)); };
    {
        RateEntry e{"betabinomial_gf", 0, kind == ModelPriorKind::BetaBinomial && b < 1, true, ""};
        e.value = b < 1 ? gf(b) : kInf;
        if (kind != ModelPriorKind::BetaBinomial) e.note = "prior is not beta-binomial";
        else if (b >= 1) e.note = "base (p - p_t)^{1-alpha}/tau^{alpha/2} >= 1";
        rep.rates.push_back(e);
        rep.rates.push_back({"betabinomial_order", (pt + 1) * b, kind == ModelPriorKind::BetaBinomial && b < 1, false,
                             "(p_t + 1)(p - p_t)^{1-alpha}/tau^{alpha/2}"});
    }

    {
        const double c = sc.model_prior.c;
        const bool cx = kind == ModelPriorKind::Complexity;
        rep.rates.push_back({"complexity_order", (pt + 1) * b / std::pow(p, c), cx, false,
                             "(p_t + 1)(p - p_t)^{1-alpha}/(tau^{alpha/2} p^c)"});
        const double x = b / std::pow(p, c * a);
        RateEntry e{"complexity_gf", x < 1 ? gf(x) : kInf, cx && x < 1, true, ""};
        if (!cx) e.note = "prior is not complexity";
        else if (x >= 1) e.note = "base >= 1";
        rep.rates.push_back(e);
    }

    {
        const double lg = std::log(std::sqrt(sc.tau) * (p - pt));
        const double a_fixed = 1.01;
        const bool ok = sc.p > sc.pt && lg > 0;
        rep.rates.push_back({"zellner_known_order",
                             ok ? (pt + 1) * std::pow(sc.pbar - pt, a_fixed / 2) * std::pow(lg, 1.5) / std::sqrt(sc.tau) : kInf,
                             ok, false, "order only, a = 1.01"});
        const bool ok2 = ok && sc.n > sc.pbar;
        rep.rates.push_back(
            {"zellner_unknown_order",
             ok2 ? (pt + 1) / std::sqrt(sc.tau) * std::exp(2 * std::pow(lg, 1.5) * std::sqrt((p - pt) / (sc.n - sc.pbar))) : kInf,
             ok2, false, "order only"});
    }
    return rep;
}

FloorReport lambda_floor(const Dataset& data, const ModelIndex& t, std::size_t max_models, std::uint64_t seed) {
    const Truth& truth = data.require_truth();
    const int p = data.p(), pt = t.size();
    if (pt == 0) throw ContractError("lambda_floor: empty true model");
    if (!(truth.phi > 0)) throw ContractError("lambda_floor: phi* must be positive");
    Matrix Xt(data.n(), pt);
    Vector th(pt);
    double min_th2 = kInf;
    for (int k = 0; k < pt; ++k) {
        Xt.col(k) = data.X.col(t[k]);
        th[k] = truth.theta[t[k]];
        if (th[k] != 0) min_th2 = std::min(min_th2, th[k] * th[k]);
    }
    if (!std::isfinite(min_th2)) min_th2 = 0;

    FloorReport rep;
    rep.min_floor_per_size = kInf;
    auto eval = [&](const ModelIndex& m) {
        Matrix R = Xt;
        if (!m.empty()) {
            Matrix Xm(data.n(), m.size());
            for (int k = 0; k < m.size(); ++k) Xm.col(k) = data.X.col(m[k]);
            Eigen::HouseholderQR<Matrix> qr(Xm);
            const Matrix Q = qr.householderQ() * Matrix::Identity(data.n(), m.size());
            R -= Q * (Q.transpose() * Xt);
        }
        const Matrix M = R.transpose() * R;
        Eigen::SelfAdjointEigenSolver<Matrix> es(M);
        const Vector ev = es.eigenvalues();
        const double tol = 1e-9 * std::max(1.0, ev.maxCoeff());
        FloorRow row;
        row.m = m;
        row.v = kInf;
        for (int k = 0; k < ev.size(); ++k)
            if (ev[k] > tol) {
                ++row.rank;
                row.v = std::min(row.v, ev[k]);
            }
        if (row.rank == 0) row.v = 0;
        row.floor = row.v * row.rank * min_th2 / truth.phi;
        row.lambda = th.dot(M * th) / truth.phi;
        row.holds = row.lambda >= row.floor * (1 - 1e-9) - 1e-12;
        if (!row.holds) ++rep.violations;
        rep.min_floor_per_size = std::min(rep.min_floor_per_size, row.v * min_th2 / truth.phi);
        rep.rows.push_back(std::move(row));
    };

    double total = 0;
    for (int l = 0; l < pt; ++l) total += std::exp(log_binom(p, l));
    if (total <= static_cast<double>(max_models)) {
        std::vector<int> cur;
        auto rec = [&](auto&& self, int start, int left) -> void {
            if (left == 0) {
                eval(ModelIndex(cur));
                return;
            }
            for (int j = start; j <= p - left; ++j) {
                cur.push_back(j);
                self(self, j + 1, left - 1);
                cur.pop_back();
            }
        };
        for (int l = 0; l < pt; ++l) rec(rec, 0, l);
    } else {
        rep.sampled = true;
        std::mt19937_64 rng(substream_seed(seed, 0x1a3b));
        std::vector<int> perm(p);
        for (int j = 0; j < p; ++j) perm[j] = j;
        std::uniform_int_distribution<int> size_dist(0, pt - 1);
        for (std::size_t i = 0; i < max_models; ++i) {
            const int l = size_dist(rng);
            for (int k = 0; k < l; ++k) {
                std::uniform_int_distribution<int> d(k, p - 1);
                std::swap(perm[k], perm[d(rng)]);
            }
            std::vector<int> pick(perm.begin(), perm.begin() + l);
            std::sort(pick.begin(), pick.end());
            eval(ModelIndex(std::move(pick)));
        }
    }
    return rep;
}

LambdaRule parse_lambda_rule(const std::string& s) {
    if (s == "theta-squared-n" || s == "theta") return LambdaRule::ThetaSquaredN;
    if (s == "quarter-n" || s == "quarter") return LambdaRule::QuarterN;
    throw ConfigError("unknown lambda rule '" + s + "' (expected theta-squared-n or quarter-n)");
}

BoundScenario bound_curve_scenario(int case_id, int n, LambdaRule rule) {
    if (case_id < 1 || case_id > 4) throw ContractError("bound curves: case must be 1..4");
    BoundScenario sc;
    sc.n = n;
    const bool big_p = case_id == 2 || case_id == 4;
    if (big_p && n > 46340) throw ContractError("bound curves: n too large for p = n^2");
    sc.p = big_p ? n * n : n;
    sc.pt = big_p ? 10 : 5;
    sc.pbar = std::min(sc.n, sc.p);
    if (sc.pt > sc.pbar) throw ContractError("bound curves: n below p_t");
    sc.tau = n;
    const double weak = rule == LambdaRule::ThetaSquaredN ? 0.25 * 0.25 : 0.25;
    sc.lambda_lo = sc.lambda_hi = (case_id <= 2 ? 0.5 : weak) * n;
    sc.alpha = 0.99;
    sc.alpha2 = 0.98;
    sc.model_prior = ModelPriorSpec::complexity(sc.p, sc.pbar, 1.0);
    return sc;
}

std::vector<CurveRow> bound_curves(int case_id, const std::vector<int>& n_grid, LambdaRule rule, SmallForm form,
                                     int threads) {
    std::vector<CurveRow> rows(n_grid.size());
    for (int n : n_grid) bound_curve_scenario(case_id, n, rule).validate();
    auto work = [&](std::size_t i) {
        const auto sc = bound_curve_scenario(case_id, n_grid[i], rule);
        CurveRow& r = rows[i];
        r.n = sc.n;
        r.p = sc.p;
        r.pt = sc.pt;
        r.lambda = sc.lambda_lo;
        r.spurious = bound_spurious(sc);
        r.nonspurious_small = bound_nonspurious_small(sc, form);
    };
    const int nt = std::max(1, std::min<int>(threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency()),
                                             static_cast<int>(n_grid.size())));
    std::vector<std::thread> pool;
    for (int w = 0; w < nt; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n_grid.size(); i += nt) work(i);
        });
    for (auto& th : pool) th.join();
    return rows;
}

std::optional<int> crossing_n(const std::vector<CurveRow>& rows) {
    for (const auto& r : rows)
        if (r.nonspurious_small.log_raw < r.spurious.log_raw) return r.n;
    return std::nullopt;
}

void write_curves_csv(const std::vector<CurveRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "n,p,pt,lambda,bound_spurious,bound_nonspurious_small,raw_spurious,raw_nonspurious_small,"
           "log_raw_spurious,log_raw_nonspurious_small,clamped_spurious,clamped_nonspurious_small\n";
    out << std::setprecision(17);
    for (const auto& r : rows)
        out << r.n << ',' << r.p << ',' << r.pt << ',' << r.lambda << ',' << r.spurious.value << ','
            << r.nonspurious_small.value << ',' << r.spurious.raw << ',' << r.nonspurious_small.raw << ','
            << r.spurious.log_raw << ',' << r.nonspurious_small.log_raw << ',' << r.spurious.clamped << ','
            << r.nonspurious_small.clamped << '\n';
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace bvs
