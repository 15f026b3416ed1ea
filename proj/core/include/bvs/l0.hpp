#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bvs/linear.hpp"

namespace bvs {

enum class L0Kind { BIC, EBIC, RIC, Custom };

struct L0Spec {
    L0Kind kind = L0Kind::BIC;
    double xi = 1.0;  // EBIC only
    std::function<double(int pm, int n, int p)> eta;  // Custom only

    static L0Spec bic() { return {}; }
    static L0Spec ebic(double xi);
    static L0Spec ric() { return {L0Kind::RIC, 1.0, {}}; }
    static L0Spec custom(std::function<double(int, int, int)> eta);
    static L0Spec aic();  // custom eta = p_m
    // "bic", "ric", "ebic:<xi>"
    static L0Spec parse(const std::string& s);
    std::string name() const;
};

double penalty(int pm, int n, int p, const L0Spec& spec);

// Maximized Gaussian log-likelihood (phi_hat = s_m/n) minus the penalty.
double log_h(const LinearCache& stats, const ModelIndex& model, const L0Spec& spec);

std::vector<double> normalized_l0(const LinearCache& stats, const std::vector<ModelIndex>& models, const L0Spec& spec);

}  // namespace bvs
