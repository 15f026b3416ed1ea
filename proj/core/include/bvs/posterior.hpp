#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bvs/coef_priors.hpp"
#include "bvs/l0.hpp"
#include "bvs/linear.hpp"
#include "bvs/model_priors.hpp"

namespace bvs {

struct ModelProb {
    ModelIndex model;
    double log_evidence = 0.0;  // log h for L0 criteria
    double log_prior = 0.0;
    double prob = 0.0;
    double mc_se = 0.0;
    int visits = 0;  // Gibbs only
};

struct SubsetMasses {
    ModelIndex reference;
    double p_reference = 0.0;          // p(M_t | y)
    std::vector<double> sigma;         // index l: P(S_l | y), zero for l <= p_t
    std::vector<double> sigma_tilde;   // index l: P(S_l^c | y)
};

struct PosteriorSummary {
    std::string method;
    int p = 0;
    int pbar = 0;
    std::vector<ModelProb> models;     // enumeration: full table; Gibbs: visited models; DP: empty
    std::vector<double> pip;
    std::vector<double> pip_se;        // Gibbs only
    std::vector<double> size_prob;     // P(p_k = l | y), l = 0..pbar
    double log_norm = 0.0;             // log sum of evidence x prior (exact engines)
    ModelIndex map;
    double map_prob = 0.0;
    std::optional<SubsetMasses> masses;
    // Gibbs diagnostics
    double split_half_discrepancy = 0.0;
    int chains = 0;
    std::size_t precision_warnings = 0;
};

struct EngineOptions {
    std::optional<ModelIndex> reference;
    std::size_t cap = std::size_t{1} << 20;
    int threads = 0;  // 0: hardware concurrency
    bool model_table = false;  // ortho-dp: also list every model's probability (subject to cap)
};

struct GibbsConfig {
    int sweeps = 10000;
    int burn_in = 1000;
    std::uint64_t seed = 1;
    int chains = 1;
    bool rao_blackwell = true;
    bool random_scan = false;
    std::optional<ModelIndex> init;
    void validate() const;
};

// Default model-size cap min(n - 5, p), at least 0.
int default_pbar(int n, int p);

// Number of models of size <= pbar, saturating at SIZE_MAX.
std::size_t count_models(int p, int pbar);

PosteriorSummary enumerate_posterior(const LinearCache& stats, const CoefPriorSpec& coef, const ModelPrior& prior,
                                     const EngineOptions& opt = {});

// Normalized L0 criterion over the truncated model space.
PosteriorSummary enumerate_l0(const LinearCache& stats, const L0Spec& spec, int pbar, const EngineOptions& opt = {});

// Exact posterior for orthogonal designs by a dynamic program over model sizes.
PosteriorSummary orthogonal_dp_posterior(const LinearCache& stats, const CoefPriorSpec& coef, const ModelPrior& prior,
                                         const EngineOptions& opt = {});

PosteriorSummary gibbs_posterior(const LinearCache& stats, const CoefPriorSpec& coef, const ModelPrior& prior,
                                 const GibbsConfig& cfg, const EngineOptions& opt = {});

// Log unnormalized posterior log p(y|M) + log p(M).
double log_posterior_weight(const LinearCache& stats, const CoefPriorSpec& coef, const ModelPrior& prior,
                            const ModelIndex& model);

enum class SelectRule { Map, Median };

struct Selection {
    ModelIndex model;
    double prob = 0.0;  // posterior probability of the chosen model when known, else NaN
    std::optional<bool> equals_reference;
    std::optional<double> p_reference;
};

Selection select(const PosteriorSummary& s, SelectRule rule, double threshold = 0.5,
                 const std::optional<ModelIndex>& reference = std::nullopt);

SubsetMasses subset_masses(const PosteriorSummary& s, const ModelIndex& reference);

}  // namespace bvs
