#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bvs/linear.hpp"

namespace bvs {

enum class CoefPriorKind { ZellnerKnownPhi, ZellnerUnknownPhi, NormalV, PMOM };

// p(theta_k | phi, M_k) and, for unknown phi, p(phi) = IG(a_phi/2, l_phi/2).
struct CoefPriorSpec {
    CoefPriorKind kind = CoefPriorKind::ZellnerUnknownPhi;
    double tau = 1.0;
    double phi = 1.0;  // known-phi variant only
    double a_phi = 0.01;
    double l_phi = 0.01;
    VMode vmode = VMode::Zellner;    // NormalV only; PMOM always uses DiagGramInverse
    std::optional<Matrix> explicit_v;
    int mc_draws = 2000;
    std::uint64_t seed = 1;

    static CoefPriorSpec zellner_known(double tau, double phi);
    static CoefPriorSpec zellner_unknown(double tau, double a_phi = 0.01, double l_phi = 0.01);
    static CoefPriorSpec normal_v(double tau, VMode mode, double a_phi = 0.01, double l_phi = 0.01);
    static CoefPriorSpec pmom(double tau, double a_phi = 0.01, double l_phi = 0.01, int mc_draws = 2000,
                              std::uint64_t seed = 1);
    void validate() const;
    bool deterministic() const { return kind != CoefPriorKind::PMOM; }
    std::string name() const;
};

enum class TauPreset { UnitInformation, Ric, Benchmark, Pmom };
double tau_preset(TauPreset preset, int n, int p);
TauPreset parse_tau_preset(const std::string& s);

struct Evidence {
    double log_value = 0.0;  // log p(y | M_k)
    double mc_se = 0.0;      // standard error of log_value (pMOM only)
    bool precision_warning = false;
};

struct LogBF {
    double value = 0.0;  // log B_tm
    double se = 0.0;
    bool precision_warning = false;
};

// Per-model quantities shared by the unknown-phi variants.
struct ShrunkenFit {
    double s_tilde = 0.0;
    Vector rho;           // eigenvalues of V_k X_k'X_k
    Vector theta_tilde;   // (G + V^{-1}/tau)^{-1} X'y
    Matrix v_tilde;       // (G + V^{-1}/tau)^{-1}
};

ShrunkenFit shrunken_fit(const LinearCache& stats, const ModelIndex& model, const CoefPriorSpec& spec);

// Log marginal likelihood including all normalizing constants.
Evidence log_evidence(const LinearCache& stats, const ModelIndex& model, const CoefPriorSpec& spec);

double log_bf_zellner_known(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m, const CoefPriorSpec& spec);
double log_bf_zellner_unknown(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m, const CoefPriorSpec& spec);
double log_bf_normal_v(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m, const CoefPriorSpec& spec);
LogBF log_bf_pmom(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m, const CoefPriorSpec& spec);
LogBF log_bf(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m, const CoefPriorSpec& spec);

// The right-hand F-statistic form of the unknown-phi Zellner Bayes factor (t strictly nested in m).
double log_bf_zellner_unknown_fform(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m,
                                    const CoefPriorSpec& spec);

// Posterior expectation of prod_j theta_j^2 x_j'x_j/(tau phi) for the pMOM prior, log scale.
Evidence log_pmom_moment(const LinearCache& stats, const ModelIndex& model, const CoefPriorSpec& spec);

// Throws unless every column has mean 0 and variance 1 (divisor n or n-1) to 1e-8.
void require_standardized(const Matrix& X);

struct FTildeReport {
    double ratio = 1.0;            // s~_t / s_t
    double ratio_bound = 1.0;      // 1 + (s_0 - s_t)/(s_t (1 + tau rho))
    double ratio_bound_lphi = 1.0; // same bound with the l_phi shift included
    double ftilde_lhs = 0.0;       // (p_m - p_t) F~_mt
    double ftilde_bound = 0.0;     // tau rho/(1+tau rho) (p_m-p_t) F_mt + p_m F_m0/(1+tau rho)
    bool ratio_lower_ok = true;    // s~_t >= s_t
    bool ratio_upper_ok = true;
    bool ftilde_ok = true;
    bool ratio_upper_lphi_ok = true;
};

// Requires t strictly nested in m and p_m < n.
FTildeReport fstat_bayes_bound_check(const LinearCache& stats, const ModelIndex& t, const ModelIndex& m,
                                     const CoefPriorSpec& spec);

}  // namespace bvs
