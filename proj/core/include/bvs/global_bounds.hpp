#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bvs/l0.hpp"
#include "bvs/linear.hpp"
#include "bvs/model_priors.hpp"

namespace bvs {

struct BoundScenario {
    int n = 100;
    int p = 10;
    int pbar = 10;
    int pt = 1;
    double tau = 100;
    ModelPriorSpec model_prior;
    double lambda_lo = 1.0;  // signal floor for models smaller than the truth
    double lambda_hi = 1.0;  // signal floor for larger non-spurious models
    double alpha = 0.99;
    double alpha2 = 0.98;    // alpha' < alpha
    double gamma = 0.95;
    // Per-size replacement for the exponent lambda_lo^alpha' (p_t - l), indexed by l < p_t.
    std::vector<double> small_exponent_override;

    void validate() const;
};

struct BoundValue {
    double log_raw = 0;  // log of the unclamped sum
    double raw = 0;
    double value = 0;    // min(raw, 1)
    bool clamped = false;

    static BoundValue from_log(double log_raw);
};

// Small non-spurious sum in its standard form (tau/r factor C(p,l) tau^{alpha(l-p_t)/2} r^{-alpha}), or oriented as in
// the per-model assumption it is derived from: C(p,l) tau^{alpha(p_t-l)/2} r^alpha e^{...}.
enum class SmallForm { Display, Consistent };

BoundValue bound_spurious(const BoundScenario& sc);
BoundValue bound_nonspurious_small(const BoundScenario& sc, SmallForm form = SmallForm::Display);
BoundValue bound_nonspurious_large(const BoundScenario& sc);

struct L0Bounds {
    BoundValue spurious;
    BoundValue nonspurious_small;
    BoundValue nonspurious_large;
};

// Same sums with the prior/tau factors replaced by e^{-alpha (eta_l - eta_pt)}.
L0Bounds bound_l0(const BoundScenario& sc, const L0Spec& l0);

enum class BoundPart { Spurious, NonspuriousSmall, NonspuriousLarge };

// log of the per-model term of one sum (-inf when m does not belong to it); summing exp over
// all models of size <= pbar reproduces the sum. Pass l0 for the penalized analogues.
double log_term_model(const BoundScenario& sc, const ModelIndex& m, const ModelIndex& t, BoundPart part,
                      const L0Spec* l0 = nullptr, SmallForm form = SmallForm::Display);

struct RateEntry {
    std::string name;
    double value = 0;
    bool applicable = false;
    bool is_bound = true;  // false for asymptotic-order expressions
    std::string note;
};

struct RateReport {
    double exact_spurious = 0;  // raw spurious sum for comparison
    std::vector<RateEntry> rates;
};

RateReport simplified_rates(const BoundScenario& sc);

struct FloorRow {
    ModelIndex m;
    int rank = 0;
    double v = 0;        // smallest non-zero eigenvalue of X_t'(I - H_m)X_t
    double floor = 0;    // v q min_j theta_j^2 / phi
    double lambda = 0;   // theta_t' X_t'(I - H_m)X_t theta_t / phi
    bool holds = true;
};

struct FloorReport {
    std::vector<FloorRow> rows;
    double min_floor_per_size = 0;  // min_m v_tm min_j theta_j^2 / phi, usable as lambda_lo^alpha'
    int violations = 0;
    bool sampled = false;
};

// Scans models of size < p_t; exhaustive when at most max_models exist, otherwise a seeded sample.
FloorReport lambda_floor(const Dataset& data, const ModelIndex& t, std::size_t max_models = 20000,
                         std::uint64_t seed = 1);

enum class LambdaRule { ThetaSquaredN, QuarterN };
LambdaRule parse_lambda_rule(const std::string& s);

struct CurveRow {
    int n = 0;
    int p = 0;
    int pt = 0;
    double lambda = 0;
    BoundValue spurious;
    BoundValue nonspurious_small;
};

BoundScenario bound_curve_scenario(int case_id, int n, LambdaRule rule);
std::vector<CurveRow> bound_curves(int case_id, const std::vector<int>& n_grid, LambdaRule rule = LambdaRule::ThetaSquaredN,
                                     SmallForm form = SmallForm::Display, int threads = 0);
// First grid n at which the non-spurious curve lies below the spurious one.
std::optional<int> crossing_n(const std::vector<CurveRow>& rows);
void write_curves_csv(const std::vector<CurveRow>& rows, const std::string& path);

}  // namespace bvs
