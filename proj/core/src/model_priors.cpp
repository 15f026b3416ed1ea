#include "bvs/model_priors.hpp"

#include <cmath>

#include "bvs/error.hpp"
#include "bvs/numeric.hpp"

namespace bvs {

ModelPriorSpec ModelPriorSpec::uniform(int p, int pbar) { return {ModelPriorKind::Uniform, p, pbar, 1.0, {}}; }
ModelPriorSpec ModelPriorSpec::beta_binomial(int p, int pbar) { return {ModelPriorKind::BetaBinomial, p, pbar, 1.0, {}}; }
ModelPriorSpec ModelPriorSpec::complexity(int p, int pbar, double c) { return {ModelPriorKind::Complexity, p, pbar, c, {}}; }
ModelPriorSpec ModelPriorSpec::custom(int p, int pbar, std::vector<double> w) {
    return {ModelPriorKind::CustomSizeWeights, p, pbar, 1.0, std::move(w)};
}

std::string ModelPriorSpec::name() const {
    switch (kind) {
        case ModelPriorKind::Uniform: return "uniform";
        case ModelPriorKind::BetaBinomial: return "betabinomial";
        case ModelPriorKind::Complexity: return "complexity(" + std::to_string(c).substr(0, 4) + ")";
        case ModelPriorKind::CustomSizeWeights: return "custom";
    }
    return "?";
}

ModelPrior::ModelPrior(ModelPriorSpec spec) : spec_(std::move(spec)) {
    const int p = spec_.p, pbar = spec_.pbar;
    if (p < 1) throw ContractError("model prior: p must be >= 1");
    if (pbar < 0 || pbar > p) throw ContractError("model prior: need 0 <= pbar <= p");
    std::vector<double> lw(pbar + 1);
    for (int l = 0; l <= pbar; ++l) {
        switch (spec_.kind) {
            case ModelPriorKind::Uniform: lw[l] = log_binom(p, l); break;
            case ModelPriorKind::BetaBinomial: lw[l] = 0.0; break;
            case ModelPriorKind::Complexity:
                if (!(spec_.c > 0)) throw ContractError("complexity prior: c must be positive");
                lw[l] = -spec_.c * l * std::log(static_cast<double>(p));
                break;
            case ModelPriorKind::CustomSizeWeights:
                if (static_cast<int>(spec_.weights.size()) != pbar + 1)
                    throw ContractError("custom size weights: need pbar + 1 entries");
                if (!(spec_.weights[l] > 0)) throw ContractError("custom size weights must be positive");
                lw[l] = std::log(spec_.weights[l]);
                break;
        }
    }
    const double z = log_sum_exp(lw);
    log_size_.resize(pbar + 1);
    log_model_.resize(pbar + 1);
    for (int l = 0; l <= pbar; ++l) {
        log_size_[l] = lw[l] - z;
        log_model_[l] = log_size_[l] - log_binom(p, l);
    }
}

double ModelPrior::log_size_mass(int size) const { return in_support(size) ? log_size_[size] : kNegInf; }

double ModelPrior::log_prior_size(int size) const { return in_support(size) ? log_model_[size] : kNegInf; }

ConsistencyReport consistency_diagnostics(const ModelPrior& prior, double tau, int pt, double lambda,
                                          double beta2, double beta3) {
    if (!(tau > 0) || !(lambda >= 0)) throw ContractError("consistency diagnostics: tau > 0 and lambda >= 0 required");
    if (!(beta2 > 0 && beta2 < 1 && beta3 > 0 && beta3 < 1))
        throw ContractError("consistency diagnostics: beta2, beta3 must lie in (0,1)");
    if (!prior.in_support(pt)) throw ContractError("consistency diagnostics: p_t outside prior support");
    const int p = prior.p(), pbar = prior.pbar();
    const double c = prior.spec().c;
    ConsistencyReport rep;
    rep.pt = pt;
    rep.tau = tau;
    rep.lambda = lambda;
    const double lam_b = std::pow(lambda, beta3);
    for (int pm = 0; pm <= pbar; ++pm) {
        ConsistencyRow r;
        r.pm = pm;
        r.log_r = prior.log_prior_odds(pm, pt);
        r.c1 = std::exp(r.log_r - beta2 * (pm - pt) / 2.0 * std::log(tau));
        r.c2 = r.log_r - lam_b - (pm - pt) * std::log1p(tau);
        if (pm >= pt) {
            r.compared = tau;
            r.has_threshold = true;
            switch (prior.spec().kind) {
                case ModelPriorKind::Uniform:
                case ModelPriorKind::Complexity: r.threshold = 1.0; break;
                case ModelPriorKind::BetaBinomial:
                    r.threshold = std::pow(static_cast<double>(pbar) / (p - pt), 2.0 / beta2);
                    break;
                case ModelPriorKind::CustomSizeWeights: r.has_threshold = false; break;
            }
        } else {
            r.compared = lam_b;
            r.has_threshold = true;
            const double gap = pt - pm;
            switch (prior.spec().kind) {
                case ModelPriorKind::Uniform: r.threshold = gap * std::log(tau); break;
                case ModelPriorKind::BetaBinomial:
                    r.threshold = pm == 0 ? kInf : gap * std::log((p - pt) * tau / pm);
                    break;
                case ModelPriorKind::Complexity:
                    r.threshold = pm == 0 ? kInf : gap * std::log(std::pow(p, c) * (p - pt) * tau / pm);
                    break;
                case ModelPriorKind::CustomSizeWeights: r.has_threshold = false; break;
            }
        }
        r.threshold_met = r.has_threshold && r.compared > r.threshold;
        rep.rows.push_back(r);
    }
    return rep;
}

}  // namespace bvs
