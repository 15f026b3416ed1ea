#pragma once

#include <string>
#include <vector>

#include "bvs/linear.hpp"

namespace bvs {

enum class ModelPriorKind { Uniform, BetaBinomial, Complexity, CustomSizeWeights };

struct ModelPriorSpec {
    ModelPriorKind kind = ModelPriorKind::BetaBinomial;
    int p = 1;
    int pbar = 1;
    double c = 1.0;               // Complexity exponent
    std::vector<double> weights;  // CustomSizeWeights, sizes 0..pbar

    static ModelPriorSpec uniform(int p, int pbar);
    static ModelPriorSpec beta_binomial(int p, int pbar);
    static ModelPriorSpec complexity(int p, int pbar, double c);
    static ModelPriorSpec custom(int p, int pbar, std::vector<double> w);
    std::string name() const;
};

// Size-based model prior p(M) = P(p_k = l) / C(p, l), renormalized on sizes 0..pbar.
class ModelPrior {
public:
    explicit ModelPrior(ModelPriorSpec spec);

    const ModelPriorSpec& spec() const { return spec_; }
    int p() const { return spec_.p; }
    int pbar() const { return spec_.pbar; }
    bool in_support(int size) const { return size >= 0 && size <= spec_.pbar; }

    // log P(p_k = l); -inf outside the support.
    double log_size_mass(int size) const;
    // log p(M) for any model of the given size; -inf outside the support.
    double log_prior_size(int size) const;
    double log_prior(const ModelIndex& m) const { return log_prior_size(m.size()); }
    // log r_{p_m, p_t} = log p(M_m) - log p(M_t).
    double log_prior_odds(int pm, int pt) const { return log_prior_size(pm) - log_prior_size(pt); }
    double log_prior_odds(const ModelIndex& m, const ModelIndex& t) const { return log_prior_odds(m.size(), t.size()); }

private:
    ModelPriorSpec spec_;
    std::vector<double> log_size_;   // log P(p_k = l)
    std::vector<double> log_model_;  // log p(M), |M| = l
};

struct ConsistencyRow {
    int pm = 0;
    double log_r = 0;         // log r_{p_m,p_t}
    double c1 = 0;            // r / tau^{beta2 (p_m - p_t)/2}
    double c2 = 0;            // log r - lambda^beta3 - (p_m - p_t) log(1 + tau)
    double threshold = 0;     // sufficient-condition threshold (on tau if p_m >= p_t, on lambda^beta3 otherwise)
    double compared = 0;      // the quantity compared to the threshold
    bool threshold_met = false;
    bool has_threshold = false;
};

struct ConsistencyReport {
    int pt = 0;
    double tau = 0;
    double lambda = 0;
    std::vector<ConsistencyRow> rows;
};

ConsistencyReport consistency_diagnostics(const ModelPrior& prior, double tau, int pt, double lambda,
                                          double beta2, double beta3);

}  // namespace bvs
