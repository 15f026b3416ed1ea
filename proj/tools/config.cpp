#include "config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "bvs/error.hpp"

namespace bvs::cli {

using nlohmann::json;

CoefPriorKind parse_coef_kind(const std::string& s) {
    if (s == "zellner-known") return CoefPriorKind::ZellnerKnownPhi;
    if (s == "zellner" || s == "zellner-unknown") return CoefPriorKind::ZellnerUnknownPhi;
    if (s == "normal" || s == "normal-diag") return CoefPriorKind::NormalV;
    if (s == "pmom") return CoefPriorKind::PMOM;
    throw ConfigError("unknown coefficient prior '" + s + "'");
}

ModelPriorKind parse_model_prior_kind(const std::string& s) {
    if (s == "uniform") return ModelPriorKind::Uniform;
    if (s == "betabinomial" || s == "beta-binomial") return ModelPriorKind::BetaBinomial;
    if (s == "complexity") return ModelPriorKind::Complexity;
    throw ConfigError("unknown model prior '" + s + "'");
}

double resolve_tau(const std::string& s, int n, int p) {
    std::size_t pos = 0;
    try {
        const double v = std::stod(s, &pos);
        if (pos == s.size()) {
            if (!(v > 0)) throw ConfigError("tau must be positive");
            return v;
        }
    } catch (const std::invalid_argument&) {
    }
    return tau_preset(parse_tau_preset(s), n, p);
}

namespace {

Bundle bundle_from_json(const json& j) {
    Bundle b;
    b.name = j.at("name").get<std::string>();
    if (j.contains("criterion")) {
        b.l0 = L0Spec::parse(j.at("criterion").get<std::string>());
        return b;
    }
    const auto kind = parse_coef_kind(j.value("coef", std::string("zellner")));
    const double a = j.value("a_phi", 0.01), l = j.value("l_phi", 0.01);
    switch (kind) {
        case CoefPriorKind::ZellnerKnownPhi: b.coef = CoefPriorSpec::zellner_known(1.0, j.value("phi", 1.0)); break;
        case CoefPriorKind::ZellnerUnknownPhi: b.coef = CoefPriorSpec::zellner_unknown(1.0, a, l); break;
        case CoefPriorKind::NormalV: b.coef = CoefPriorSpec::normal_v(1.0, VMode::DiagGramInverse, a, l); break;
        case CoefPriorKind::PMOM: b.coef = CoefPriorSpec::pmom(1.0, a, l, j.value("mc_draws", 2000)); break;
    }
    const json& tau = j.contains("tau") ? j.at("tau") : json(kind == CoefPriorKind::PMOM ? "pmom" : "n");
    if (tau.is_number()) {
        b.coef.tau = tau.get<double>();
    } else {
        b.tau_preset = parse_tau_preset(tau.get<std::string>());
    }
    b.model_prior = parse_model_prior_kind(j.value("model_prior", std::string("betabinomial")));
    b.complexity_c = j.value("c", 1.0);
    return b;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
    Scenario sc;
    if (j.contains("preset")) {
        const auto pr = j.at("preset").get<std::string>();
        if (pr.rfind("orthogonal-", 0) == 0) sc = orthogonal_study(std::stoi(pr.substr(11)));
        else if (pr.rfind("correlated-", 0) == 0) sc = correlated_study(std::stoi(pr.substr(11)));
        else throw ConfigError("unknown preset '" + pr + "'");
    }
    try {
        if (j.contains("name")) sc.name = j.at("name").get<std::string>();
        if (j.contains("design")) sc.design = parse_design(j.at("design").get<std::string>());
        sc.rho = j.value("rho", sc.rho);
        sc.misspec_coef = j.value("misspec_coef", sc.misspec_coef);
        sc.hetero_strength = j.value("hetero_strength", sc.hetero_strength);
        sc.n = j.value("n", sc.n);
        sc.p = j.value("p", sc.p);
        if (j.contains("coefficients")) {
            sc.coefficients = j.at("coefficients").get<std::vector<double>>();
            sc.pt = static_cast<int>(sc.coefficients.size());
        }
        sc.phi = j.value("phi", sc.phi);
        sc.replicates = j.value("replicates", sc.replicates);
        if (j.contains("engine")) sc.engine = parse_engine(j.at("engine").get<std::string>());
        if (j.contains("pbar")) sc.pbar = j.at("pbar").get<int>();
        sc.pip_threshold = j.value("pip_threshold", sc.pip_threshold);
        sc.threads = j.value("threads", sc.threads);
        if (j.contains("n_grid")) sc.n_grid = j.at("n_grid").get<std::vector<int>>();
        sc.p_equals_n = j.value("p_equals_n", sc.p_equals_n);
        if (j.contains("gibbs")) {
            const auto& g = j.at("gibbs");
            sc.gibbs.sweeps = g.value("sweeps", sc.gibbs.sweeps);
            sc.gibbs.burn_in = g.value("burn_in", sc.gibbs.burn_in);
            sc.gibbs.chains = g.value("chains", sc.gibbs.chains);
            sc.gibbs.random_scan = g.value("random_scan", sc.gibbs.random_scan);
            sc.gibbs.rao_blackwell = g.value("rao_blackwell", sc.gibbs.rao_blackwell);
        }
        if (j.contains("bundles")) {
            sc.bundles.clear();
            for (const auto& b : j.at("bundles")) sc.bundles.push_back(bundle_from_json(b));
        }
        if (j.contains("custom_x")) {
            sc.custom_x = read_matrix_csv(j.at("custom_x").get<std::string>());
            sc.design = DesignKind::CustomMatrix;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario config: ") + e.what());
    }
    if (sc.n_grid.size() > 0 && sc.p_equals_n) {
        sc.n = sc.n_grid.front();
        sc.p = sc.n;
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return scenario_from_json(j);
}

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> r;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                r.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError(path + ": non-numeric cell '" + cell + "'");
            }
        }
        if (!rows.empty() && r.size() != rows.front().size()) throw IoError(path + ": ragged row");
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw IoError(path + ": no data rows");
    Matrix X(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows[i].size(); ++k) X(i, k) = rows[i][k];
    return X;
}

json to_json(const PosteriorSummary& s, int top) {
    json j;
    j["method"] = s.method;
    j["p"] = s.p;
    j["pbar"] = s.pbar;
    j["map"] = s.map.label();
    j["map_prob"] = s.map_prob;
    j["pip"] = s.pip;
    if (!s.pip_se.empty()) j["pip_se"] = s.pip_se;
    j["size_prob"] = s.size_prob;
    j["log_norm"] = s.log_norm;
    json models = json::array();
    for (int i = 0; i < static_cast<int>(s.models.size()) && i < top; ++i) {
        const auto& m = s.models[i];
        models.push_back({{"model", m.model.label()}, {"mask", m.model.mask_hex()}, {"prob", m.prob},
                          {"log_evidence", m.log_evidence}, {"log_prior", m.log_prior}});
    }
    j["top_models"] = models;
    if (s.masses) {
        const auto& m = *s.masses;
        j["reference"] = {{"model", m.reference.label()}, {"p_reference", m.p_reference}, {"sigma", m.sigma},
                          {"sigma_tilde", m.sigma_tilde}};
    }
    if (s.chains > 0) {
        j["chains"] = s.chains;
        j["split_half_discrepancy"] = s.split_half_discrepancy;
    }
    j["precision_warnings"] = s.precision_warnings;
    return j;
}

void write_models_csv(const PosteriorSummary& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << std::setprecision(17) << "model_bitmask,size,log_evidence,log_prior,probability\n";
    for (const auto& m : s.models)
        out << m.model.mask_hex() << ',' << m.model.size() << ',' << m.log_evidence << ',' << m.log_prior << ',' << m.prob
            << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void write_pips_csv(const PosteriorSummary& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    const bool se = !s.pip_se.empty();
    out << std::setprecision(17) << (se ? "variable,pip,se\n" : "variable,pip\n");
    for (std::size_t j = 0; j < s.pip.size(); ++j) {
        out << j + 1 << ',' << s.pip[j];
        if (se) out << ',' << s.pip_se[j];
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

json to_json(const TailResult& r) {
    return {{"value", r.value}, {"raw", r.raw}, {"applicable", r.applicable}, {"param", r.param},
            {"param2", r.param2}, {"reason", r.reason}};
}

json to_json(const RunResult& r) {
    json j;
    j["scenario"] = r.scenario;
    j["bundles"] = r.bundles;
    j["attempted"] = r.attempted;
    j["failures"] = r.failures;
    j["warnings"] = r.warnings;
    int violated = 0;
    for (const auto& c : r.checks) violated += c.holds ? 0 : 1;
    j["checks_violated"] = violated;
    return j;
}

}  // namespace bvs::cli
