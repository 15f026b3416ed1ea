#include "bvs/l0.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bvs/error.hpp"
#include "bvs/numeric.hpp"

namespace bvs {

L0Spec L0Spec::ebic(double xi) {
    if (!(xi > 0 && xi <= 1)) throw ConfigError("EBIC xi must lie in (0, 1]");
    return {L0Kind::EBIC, xi, {}};
}

L0Spec L0Spec::custom(std::function<double(int, int, int)> eta) {
    if (!eta) throw ConfigError("custom L0 penalty needs a function");
    return {L0Kind::Custom, 1.0, std::move(eta)};
}

L0Spec L0Spec::aic() {
    return custom([](int pm, int, int) { return static_cast<double>(pm); });
}

L0Spec L0Spec::parse(const std::string& s) {
    if (s == "bic") return bic();
    if (s == "ric") return ric();
    if (s == "aic") return aic();
    if (s == "ebic") return ebic(1.0);
    if (s.rfind("ebic:", 0) == 0) {
        const std::string v = s.substr(5);
        double xi = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), xi);
        if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError("bad EBIC parameter in '" + s + "'");
        return ebic(xi);
    }
    throw ConfigError("unknown criterion '" + s + "' (expected bic, ebic:<xi> or ric)");
}

std::string L0Spec::name() const {
    switch (kind) {
        case L0Kind::BIC: return "bic";
        case L0Kind::RIC: return "ric";
        case L0Kind::EBIC: {
            std::ostringstream os;
            os << "ebic:" << xi;
            return os.str();
        }
        case L0Kind::Custom: return "custom";
    }
    return "?";
}

double penalty(int pm, int n, int p, const L0Spec& spec) {
    if (n <= 1) throw ContractError("L0 penalty needs n > 1");
    if (pm < 0 || pm > p) throw ContractError("L0 penalty needs 0 <= p_m <= p");
    switch (spec.kind) {
        case L0Kind::BIC: return 0.5 * pm * std::log(static_cast<double>(n));
        case L0Kind::RIC: return 0.5 * pm * std::log(static_cast<double>(p) * p);
        case L0Kind::EBIC: return 0.5 * pm * std::log(static_cast<double>(n)) + spec.xi * log_binom(p, pm);
        case L0Kind::Custom: return spec.eta(pm, n, p);
    }
    throw ConfigError("unknown L0 variant");
}

double log_h(const LinearCache& stats, const ModelIndex& model, const L0Spec& spec) {
    const int n = stats.n();
    const double s = model.empty() ? stats.yty() : stats.rss(model);
    if (!(s > 0)) throw NumericError("model " + model.label() + " interpolates the data (zero residual sum of squares)");
    return -0.5 * n * (std::log(2.0 * std::numbers::pi * s / n) + 1.0) - penalty(model.size(), n, stats.p(), spec);
}

std::vector<double> normalized_l0(const LinearCache& stats, const std::vector<ModelIndex>& models, const L0Spec& spec) {
    if (models.empty()) throw ContractError("normalized_l0: empty model list");
    std::vector<double> lh;
    lh.reserve(models.size());
    for (const auto& m : models) lh.push_back(log_h(stats, m, spec));
    return softmax(lh);
}

}  // namespace bvs
