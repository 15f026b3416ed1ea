#include "bvs/coef_priors.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bvs/error.hpp"
#include "bvs/numeric.hpp"

namespace bvs {

CoefPriorSpec CoefPriorSpec::zellner_known(double tau, double phi) {
    CoefPriorSpec s;
    s.kind = CoefPriorKind::ZellnerKnownPhi;
    s.tau = tau;
    s.phi = phi;
    s.validate();
    return s;
}

CoefPriorSpec CoefPriorSpec::zellner_unknown(double tau, double a_phi, double l_phi) {
    CoefPriorSpec s;
    s.kind = CoefPriorKind::ZellnerUnknownPhi;
    s.tau = tau;
    s.a_phi = a_phi;
    s.l_phi = l_phi;
    s.validate();
    return s;
}

CoefPriorSpec CoefPriorSpec::normal_v(double tau, VMode mode, double a_phi, double l_phi) {
    CoefPriorSpec s = zellner_unknown(tau, a_phi, l_phi);
    s.kind = CoefPriorKind::NormalV;
    s.vmode = mode;
    return s;
}

CoefPriorSpec CoefPriorSpec::pmom(double tau, double a_phi, double l_phi, int mc_draws, std::uint64_t seed) {
    CoefPriorSpec s = zellner_unknown(tau, a_phi, l_phi);
    s.kind = CoefPriorKind::PMOM;
    s.vmode = VMode::DiagGramInverse;
    s.mc_draws = mc_draws;
    s.seed = seed;
    s.validate();
    return s;
}

void CoefPriorSpec::validate() const {
    if (!(tau > 0) || !std::isfinite(tau)) throw ConfigError("coefficient prior: tau must be positive");
    if (kind == CoefPriorKind::ZellnerKnownPhi) {
        if (!(phi > 0) || !std::isfinite(phi)) throw ConfigError("coefficient prior: phi must be positive");
        return;
    }
    if (!(a_phi > 0) || !(l_phi > 0)) throw ConfigError("coefficient prior: a_phi and l_phi must be positive");
    if (kind == CoefPriorKind::PMOM && mc_draws < 100) throw ConfigError("coefficient prior: mc_draws must be >= 100");
    if (kind == CoefPriorKind::NormalV && vmode == VMode::Explicit && !explicit_v)
        throw ConfigError("coefficient prior: explicit V mode needs a matrix");
}

std::string CoefPriorSpec::name() const {
    std::ostringstream os;
    switch (kind) {
        case CoefPriorKind::ZellnerKnownPhi: os << "zellner-known(tau=" << tau << ",phi=" << phi << ")"; break;
        case CoefPriorKind::ZellnerUnknownPhi: os << "zellner(tau=" << tau << ")"; break;
        case CoefPriorKind::NormalV: os << "normal-v(tau=" << tau << ")"; break;
        case CoefPriorKind::PMOM: os << "pmom(tau=" << tau << ",draws=" << mc_draws << ")"; break;
    }
    return os.str();
}

double tau_preset(TauPreset preset, int n, int p) {
    const double nn = n, pp = p;
    switch (preset) {
        case TauPreset::UnitInformation: return nn;
        case TauPreset::Ric: return pp * pp;
        case TauPreset::Benchmark: return std::max(nn, pp * pp);
        case TauPreset::Pmom: return 0.348 * nn;
    }
    throw ConfigError("unknown tau preset");
}

TauPreset parse_tau_preset(const std::string& s) {
    if (s == "unit-information" || s == "n") return TauPreset::UnitInformation;
    if (s == "ric" || s == "p2") return TauPreset::Ric;
    if (s == "benchmark") return TauPreset::Benchmark;
    if (s == "pmom") return TauPreset::Pmom;
    throw ConfigError("unknown tau preset '" + s + "'");
}

namespace {

double log_ig_normalized(double a, double l, int n, double s_tilde) {
    // log of int N-part * IG(a/2, l/2) over phi, without the (2 pi)^{-n/2} and determinant factors
    return 0.5 * a * std::log(0.5 * l) - std::lgamma(0.5 * a) + std::lgamma(0.5 * (a + n)) -
           0.5 * (a + n) * std::log(0.5 * s_tilde);
}

VMode effective_vmode(const CoefPriorSpec& spec) {
    if (spec.kind == CoefPriorKind::PMOM) return VMode::DiagGramInverse;
    if (spec.kind == CoefPriorKind::NormalV) return spec.vmode;
    return VMode::Zellner;
}

}  // namespace

ShrunkenFit shrunken_fit(const LinearCache& stats, const ModelIndex& model, const CoefPriorSpec& spec) {
    ShrunkenFit out;
    const auto fit = stats.fit(model);
    const int k = model.size();
    if (k == 0) {
        out.s_tilde = spec.l_phi + stats.yty();
        return out;
    }
    const VMode mode = effective_vmode(spec);
    const Matrix* ev = spec.explicit_v ? &*spec.explicit_v : nullptr;
    const Matrix V = prior_covariance(fit->gram, mode, ev, model);
    Eigen::LLT<Matrix> lv(V);
    if (lv.info() != Eigen::Success) throw NumericError("prior covariance not positive definite for model " + model.label());
    const Matrix Lv = lv.matrixL();
    Eigen::SelfAdjointEigenSolver<Matrix> es(Lv.transpose() * fit->gram * Lv, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("eigen-solve failed for model " + model.label());
    out.rho = es.eigenvalues().reverse();

    const Matrix A = fit->gram + lv.solve(Matrix::Identity(k, k)) / spec.tau;
    auto la = robust_cholesky(A, model.label());
    out.v_tilde = la.solve(Matrix::Identity(k, k));
    out.theta_tilde = la.solve(fit->xty);
    out.s_tilde = spec.l_phi + stats.yty() - fit->xty.dot(out.theta_tilde);
    if (mode == VMode::Zellner) {
        // same quantity, written so that it is exact in the residual sum of squares
        const double c = spec.tau / (1.0 + spec.tau);
        out.s_tilde = spec.l_phi + stats.yty() / (1.0 + spec.tau) + c * fit->rss;
    }
    if (!(out.s_tilde > 0)) throw NumericError("non-positive shrunken sum of squares for model " + model.label());
    return out;
}

Evidence log_evidence(const LinearCache& stats, const ModelIndex& model, const CoefPriorSpec& spec) {
    const int n = stats.n();
    const double log2pi = std::log(2.0 * std::numbers::pi);
    Evidence ev;
    if (spec.kind == CoefPriorKind::ZellnerKnownPhi) {
        const double c = spec.tau / (1.0 + spec.tau);
        const double rss = model.empty() ? stats.yty() : stats.rss(model);
        const double q = stats.yty() / (1.0 + spec.tau) + c * rss;
        ev.log_value = -0.5 * n * (log2pi + std::log(spec.phi)) - 0.5 * model.size() * std::log1p(spec.tau) -
                       q / (2.0 * spec.phi);
        return ev;
    }
    const ShrunkenFit sf = shrunken_fit(stats, model, spec);
    double logdet = 0.0;
    for (Eigen::Index j = 0; j < sf.rho.size(); ++j) logdet += std::log1p(spec.tau * sf.rho(j));
    if (effective_vmode(spec) == VMode::Zellner) logdet = model.size() * std::log1p(spec.tau);
    ev.log_value = -0.5 * n * log2pi - 0.5 * logdet + log_ig_normalized(spec.a_phi, spec.l_phi, n, sf.s_tilde);
    if (spec.kind == CoefPriorKind::PMOM) {
        const Evidence d = log_pmom_moment(stats, model, spec);
        ev.log_value += d.log_value;
        ev.mc_se = d.mc_se;
        ev.precision_warning = d.precision_warning;
    }
    return ev;
}

Evidence log_pmom_moment(const LinearCache& stats, const ModelIndex& model, const CoefPriorSpec& spec) {
    Evidence out;
    const int k = model.size();
    if (k == 0) return out;
    const auto fit = stats.fit(model);
    const ShrunkenFit sf = shrunken_fit(stats, model, spec);
    const double alpha = 0.5 * (spec.a_phi + stats.n());
    const double beta = 0.5 * sf.s_tilde;
    // x = phi^{-1/2} has E[x^r] = Gamma(alpha + r/2) / (Gamma(alpha) beta^{r/2}); rescale by x0
    const double x0 = std::sqrt(alpha / beta);
    std::vector<double> log_mom(2 * k + 1);
    for (int r = 0; r <= 2 * k; ++r)
        log_mom[r] = std::lgamma(alpha + 0.5 * r) - std::lgamma(alpha) - 0.5 * r * std::log(beta) - r * std::log(x0);
    std::vector<double> mom(2 * k + 1);
    for (int r = 0; r <= 2 * k; ++r) mom[r] = std::exp(log_mom[r]);

    double log_const = 0.0;
    for (int j = 0; j < k; ++j) log_const += std::log(fit->gram(j, j) / spec.tau);

    Eigen::LLT<Matrix> lt(sf.v_tilde);
    const Matrix L = lt.matrixL();
    std::mt19937_64 rng(substream_seed(spec.seed, ModelIndexHash{}(model)));
    std::normal_distribution<double> normal;

    const int N = spec.mc_draws;
    std::vector<double> logv(N);
    Vector z(k);
    std::vector<double> poly, next;
    for (int d = 0; d < N; ++d) {
        for (int j = 0; j < k; ++j) z(j) = normal(rng);
        const Vector b = L * z;
        // prod_j (a_j x' + c_j)^2 with a_j = theta~_j x0, c_j = b_j, each factor scaled to unit size
        poly.assign(1, 1.0);
        double log_scale = 0.0;
        for (int j = 0; j < k; ++j) {
            double a = sf.theta_tilde(j) * x0, c = b(j);
            const double s = std::max({std::abs(a), std::abs(c), 1e-300});
            a /= s;
            c /= s;
            log_scale += 2.0 * std::log(s);
            const double q2 = a * a, q1 = 2.0 * a * c, q0 = c * c;
            next.assign(poly.size() + 2, 0.0);
            for (std::size_t r = 0; r < poly.size(); ++r) {
                next[r] += poly[r] * q0;
                next[r + 1] += poly[r] * q1;
                next[r + 2] += poly[r] * q2;
            }
            poly.swap(next);
        }
        double acc = 0.0;
        for (std::size_t r = 0; r < poly.size(); ++r) acc += poly[r] * mom[r];
        logv[d] = acc > 0 ? std::log(acc) + log_scale : kNegInf;
    }
    const double lse = log_sum_exp(logv);
    const double log_mean = lse - std::log(static_cast<double>(N));
    double sum2 = 0.0;
    for (double lv : logv) {
        const double r = std::exp(lv - log_mean) - 1.0;
        sum2 += r * r;
    }
    const double rel_sd = std::sqrt(sum2 / (N - 1));
    out.log_value = log_mean + log_const;
    out.mc_se = rel_sd / std::sqrt(static_cast<double>(N));
    out.precision_warning = !std::isfinite(log_mean) || out.mc_se > 0.5;
    return out;
}

double log_bf_zellner_known(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m, const CoefPriorSpec& spec) {
    if (spec.kind != CoefPriorKind::ZellnerKnownPhi) throw ContractError("log_bf_zellner_known: wrong prior variant");
    if (t == m) return 0.0;
    return log_evidence(stats, t, spec).log_value - log_evidence(stats, m, spec).log_value;
}

double log_bf_zellner_unknown(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m, const CoefPriorSpec& spec) {
    if (spec.kind != CoefPriorKind::ZellnerUnknownPhi) throw ContractError("log_bf_zellner_unknown: wrong prior variant");
    if (t == m) return 0.0;
    return log_evidence(stats, t, spec).log_value - log_evidence(stats, m, spec).log_value;
}

double log_bf_normal_v(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m, const CoefPriorSpec& spec) {
    if (spec.kind != CoefPriorKind::NormalV) throw ContractError("log_bf_normal_v: wrong prior variant");
    if (t == m) return 0.0;
    return log_evidence(stats, t, spec).log_value - log_evidence(stats, m, spec).log_value;
}

LogBF log_bf_pmom(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m, const CoefPriorSpec& spec) {
    if (spec.kind != CoefPriorKind::PMOM) throw ContractError("log_bf_pmom: wrong prior variant");
    if (t == m) return {};
    const Evidence et = log_evidence(stats, t, spec);
    const Evidence em = log_evidence(stats, m, spec);
    return {et.log_value - em.log_value, std::hypot(et.mc_se, em.mc_se), et.precision_warning || em.precision_warning};
}

LogBF log_bf(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m, const CoefPriorSpec& spec) {
    switch (spec.kind) {
        case CoefPriorKind::ZellnerKnownPhi: return {log_bf_zellner_known(stats, t, m, spec), 0.0, false};
        case CoefPriorKind::ZellnerUnknownPhi: return {log_bf_zellner_unknown(stats, t, m, spec), 0.0, false};
        case CoefPriorKind::NormalV: return {log_bf_normal_v(stats, t, m, spec), 0.0, false};
        case CoefPriorKind::PMOM: return log_bf_pmom(stats, t, m, spec);
    }
    throw ConfigError("unknown prior variant");
}

double log_bf_zellner_unknown_fform(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m,
                                    const CoefPriorSpec& spec) {
    if (!t.is_strict_subset_of(m)) throw ContractError("F form needs t strictly nested in m");
    const int n = stats.n(), pm = m.size(), pt = t.size();
    if (pm >= n) throw ContractError("F form needs p_m < n");
    const double st = shrunken_fit(stats, t, spec).s_tilde;
    const double sm = shrunken_fit(stats, m, spec).s_tilde;
    const double F = ((st - sm) / (pm - pt)) / (sm / (n - pm));
    return -0.5 * (spec.a_phi + n) * std::log1p((pm - pt) * F / (n - pm)) + 0.5 * (pm - pt) * std::log1p(spec.tau);
}

void require_standardized(const Matrix& X) {
    const double n = static_cast<double>(X.rows());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double mean = X.col(j).mean();
        const double ss = (X.col(j).array() - mean).square().sum();
        const bool unit = std::abs(ss / n - 1.0) < 1e-8 || (n > 1 && std::abs(ss / (n - 1) - 1.0) < 1e-8);
        if (std::abs(mean) > 1e-8 || !unit)
            throw ContractError("pMOM prior needs standardized columns; column " + std::to_string(j + 1) + " is not");
    }
}

FTildeReport fstat_bayes_bound_check(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m,
                                     const CoefPriorSpec& spec) {
    if (spec.kind != CoefPriorKind::NormalV && spec.kind != CoefPriorKind::ZellnerUnknownPhi)
        throw ContractError("fstat_bayes_bound_check: needs a normal prior with unknown phi");
    if (!t.is_strict_subset_of(m)) throw ContractError("fstat_bayes_bound_check: t must be strictly nested in m");
    const int n = stats.n(), pm = m.size(), pt = t.size();
    if (pm >= n) throw ContractError("fstat_bayes_bound_check: needs p_m < n");

    const double s0 = stats.yty();
    const double st = pt == 0 ? s0 : stats.rss(t);
    const double sm = stats.rss(m);
    const ShrunkenFit ft = shrunken_fit(stats, t, spec);
    const ShrunkenFit fm = shrunken_fit(stats, m, spec);
    // shrinkage factor 1/(1 + tau rho) with rho the smallest eigenvalue; zero for the null model
    const double shrink = pt == 0 ? 0.0 : 1.0 / (1.0 + spec.tau * ft.rho(pt - 1));
    const double keep = 1.0 - shrink;

    FTildeReport r;
    r.ratio = ft.s_tilde / st;
    r.ratio_bound = 1.0 + (s0 - st) * shrink / st;
    r.ratio_bound_lphi = r.ratio_bound + spec.l_phi / st;
    r.ftilde_lhs = (n - pm) * (ft.s_tilde - fm.s_tilde) / fm.s_tilde;
    const double F_mt = (n - pm) * (st - sm) / sm / (pm - pt);
    const double F_m0 = (n - pm) * (s0 - sm) / sm / pm;
    r.ftilde_bound = keep * (pm - pt) * F_mt + shrink * pm * F_m0;

    const double tol = 1e-10;
    r.ratio_lower_ok = r.ratio >= 1.0 - tol;
    r.ratio_upper_ok = r.ratio <= r.ratio_bound * (1.0 + tol);
    r.ratio_upper_lphi_ok = r.ratio <= r.ratio_bound_lphi * (1.0 + tol);
    r.ftilde_ok = r.ftilde_lhs <= r.ftilde_bound + tol * (1.0 + std::abs(r.ftilde_bound));
    return r;
}

}  // namespace bvs
