#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bvs/coef_priors.hpp"
#include "bvs/l0.hpp"
#include "bvs/linear.hpp"
#include "bvs/model_priors.hpp"
#include "bvs/posterior.hpp"

namespace bvs {

enum class DesignKind { Orthogonal, Equicorrelated, CustomMatrix, Misspecified, Heteroskedastic };
enum class EngineKind { Enumerate, OrthoDP, Gibbs };

DesignKind parse_design(const std::string& s);
EngineKind parse_engine(const std::string& s);
std::string design_name(DesignKind d);
std::string engine_name(EngineKind e);

// A prior/criterion combination evaluated on every replicate.
struct Bundle {
    std::string name;
    std::optional<L0Spec> l0;          // set: normalized L0 criterion instead of a Bayesian posterior
    CoefPriorSpec coef;                // tau ignored when tau_preset is set
    std::optional<TauPreset> tau_preset;
    ModelPriorKind model_prior = ModelPriorKind::BetaBinomial;
    double complexity_c = 1.0;

    static Bundle zellner_complexity(double c = 1.0);
    static Bundle zellner_betabinomial();
    static Bundle pmom_betabinomial();
    // Resolved prior specs at a given (n, p, pbar).
    CoefPriorSpec coef_at(int n, int p) const;
    ModelPriorSpec model_prior_at(int p, int pbar) const;
};

struct Scenario {
    std::string name = "scenario";
    DesignKind design = DesignKind::Orthogonal;
    double rho = 0.5;                // equicorrelated
    std::optional<Matrix> custom_x;  // CustomMatrix
    double misspec_coef = 0.5;       // Misspecified: weight of the omitted standardized x_1^2 column
    double hetero_strength = 0.5;    // Heteroskedastic: Var(e_i) proportional to exp(h x_i1)
    int n = 110;
    int p = 100;
    int pt = 5;
    std::vector<double> coefficients;  // length pt, assigned to the first pt columns
    double phi = 1.0;
    std::vector<Bundle> bundles;
    int replicates = 20;
    std::uint64_t seed = 1;
    EngineKind engine = EngineKind::OrthoDP;
    GibbsConfig gibbs;
    std::optional<int> pbar;          // default: default_pbar(n, p)
    double pip_threshold = 0.5;
    int threads = 0;
    // n-sweep (curves.csv); empty means a single run at n. p follows n when p_equals_n is set.
    std::vector<int> n_grid;
    bool p_equals_n = false;

    void validate() const;
    int effective_pbar() const;
};

// Deterministic in (scenario.seed, replicate). Warnings (e.g. infeasible orthogonalization) are appended.
Dataset generate(const Scenario& sc, int replicate, std::vector<std::string>* warnings = nullptr);

struct ReplicateDigest {
    bool ok = false;
    std::string error;
    double p_true = 0;            // p(M_t | y)
    double p_spurious = 0;        // P(S | y)
    double p_nonspur_small = 0;   // sum_{l < p_t} P(S_l^c | y)
    double p_nonspur_large = 0;   // sum_{l >= p_t} P(S_l^c | y)
    std::vector<double> pip;
    bool map_correct = false;
    bool median_correct = false;
    bool p_true_le_half = false;
    std::vector<char> selected;   // PIP > threshold
    double identity_error = 0;    // |p_t + P(S) + P(S^c) - 1|
};

struct Metric {
    std::string bundle;
    std::string name;
    double mean = 0;
    double se = 0;
};

struct PipRow {
    std::string bundle;
    int variable = 0;  // 1-based
    double theta_star = 0;
    double mean_pip = 0;
    double se = 0;
};

struct InequalityCheck {
    std::string bundle;
    std::string name;
    double lhs = 0;
    double rhs = 0;
    double se = 0;      // combined MC standard error of lhs - rhs
    bool holds = true;  // lhs <= rhs + 3 se
};

struct CurveMetric {
    int n = 0;
    std::string bundle;
    std::string metric;
    double mean = 0;
    double se = 0;
};

struct RunResult {
    std::string scenario;
    std::vector<std::string> bundles;
    std::vector<std::vector<ReplicateDigest>> digests;  // [bundle][replicate], last n of the sweep
    std::vector<Metric> summary;
    std::vector<PipRow> pips;
    std::vector<InequalityCheck> checks;
    std::vector<CurveMetric> curves;
    std::vector<std::string> warnings;
    int failures = 0;
    int attempted = 0;

    const Metric* find(const std::string& bundle, const std::string& metric) const;
};

// Executes every bundle on every replicate (and every n of the sweep). Throws Error when more than
// 10% of (replicate, bundle) tasks fail.
RunResult run(const Scenario& sc);

enum class EmitFormat { Csv, PlotData };

// Csv: summary.csv, pips.csv, checks.csv and (for sweeps) curves.csv. PlotData: plotdata.csv
// with long-format (x, series, value) rows. Returns the written paths.
std::vector<std::string> emit(const RunResult& result, EmitFormat format, const std::string& dir);

std::vector<Metric> read_summary_csv(const std::string& path);

// Orthogonal and equicorrelated study presets at desk scale.
Scenario orthogonal_study(int scenario_id, int replicates = 20, std::uint64_t seed = 1);
Scenario correlated_study(int scenario_id, int replicates = 20, std::uint64_t seed = 1);

}  // namespace bvs
