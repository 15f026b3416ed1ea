#pragma once

#include <string>

#include "json.hpp"

#include "bvs/coef_priors.hpp"
#include "bvs/global_bounds.hpp"
#include "bvs/model_priors.hpp"
#include "bvs/posterior.hpp"
#include "bvs/simulation.hpp"
#include "bvs/tail_bounds.hpp"

namespace bvs::cli {

// "zellner-known", "zellner" / "zellner-unknown", "normal-diag", "pmom".
CoefPriorKind parse_coef_kind(const std::string& s);
ModelPriorKind parse_model_prior_kind(const std::string& s);

// tau given as a number or a preset name ("n", "ric", "benchmark", "pmom").
double resolve_tau(const std::string& s, int n, int p);

// Scenario from a JSON document. "preset" ("orthogonal-1".."orthogonal-4", "correlated-1", "correlated-2")
// seeds the defaults; remaining keys override.
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

Matrix read_matrix_csv(const std::string& path);

nlohmann::json to_json(const PosteriorSummary& s, int top);
void write_models_csv(const PosteriorSummary& s, const std::string& path);
void write_pips_csv(const PosteriorSummary& s, const std::string& path);
nlohmann::json to_json(const TailResult& r);
nlohmann::json to_json(const RunResult& r);

}  // namespace bvs::cli
