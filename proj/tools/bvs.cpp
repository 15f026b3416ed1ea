#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"

#include "bvs/dataset_io.hpp"
#include "bvs/error.hpp"

using namespace bvs;
using nlohmann::json;

namespace {

struct PosteriorArgs {
    std::string data;
    std::string prior = "zellner";
    std::string tau = "n";
    double phi = 1.0;
    double a_phi = 0.01;
    double l_phi = 0.01;
    int mc_draws = 2000;
    std::string model_prior = "betabinomial";
    double c = 1.0;
    int pbar = -1;
    std::string reference;
    std::string criterion;
    int threads = 0;
    int top = 10;
    std::uint64_t seed = 1;
    // gibbs
    int sweeps = 10000;
    int burn_in = 1000;
    int chains = 1;
    bool random_scan = false;
    std::string models_csv;
    std::string pips_csv;
};

void add_posterior_options(CLI::App* sub, PosteriorArgs& a, bool with_criterion) {
    sub->add_option("--data", a.data, "CSV with header; first column y")->required()->check(CLI::ExistingFile);
    sub->add_option("--prior", a.prior, "zellner-known | zellner | normal-diag | pmom");
    sub->add_option("--tau", a.tau, "number or preset (n, ric, benchmark, pmom)");
    sub->add_option("--phi", a.phi, "known residual variance (zellner-known)");
    sub->add_option("--a-phi", a.a_phi);
    sub->add_option("--l-phi", a.l_phi);
    sub->add_option("--mc-draws", a.mc_draws, "pMOM Monte Carlo draws");
    sub->add_option("--model-prior", a.model_prior, "uniform | betabinomial | complexity");
    sub->add_option("--c", a.c, "complexity exponent");
    sub->add_option("--pbar", a.pbar, "maximum model size (default min(n-5, p))");
    sub->add_option("--reference", a.reference, "1-based comma list of the reference model, e.g. 1,3");
    sub->add_option("--threads", a.threads);
    sub->add_option("--top", a.top, "number of models listed");
    sub->add_option("--seed", a.seed);
    sub->add_option("--models-csv", a.models_csv, "write model_bitmask,size,log_evidence,log_prior,probability");
    sub->add_option("--pips-csv", a.pips_csv, "write variable,pip[,se]");
    if (with_criterion) sub->add_option("--criterion", a.criterion, "L0 criterion instead of a prior: bic, ric, aic, ebic:<xi>");
}

ModelIndex parse_reference(const std::string& s, int p) {
    std::vector<int> idx;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const int j = std::stoi(tok);
        if (j < 1 || j > p) throw ConfigError("reference index " + tok + " outside 1.." + std::to_string(p));
        idx.push_back(j - 1);
    }
    return ModelIndex(idx);
}

CoefPriorSpec coef_spec(const PosteriorArgs& a, int n, int p) {
    const double tau = cli::resolve_tau(a.tau, n, p);
    switch (cli::parse_coef_kind(a.prior)) {
        case CoefPriorKind::ZellnerKnownPhi: return CoefPriorSpec::zellner_known(tau, a.phi);
        case CoefPriorKind::ZellnerUnknownPhi: return CoefPriorSpec::zellner_unknown(tau, a.a_phi, a.l_phi);
        case CoefPriorKind::NormalV: return CoefPriorSpec::normal_v(tau, VMode::DiagGramInverse, a.a_phi, a.l_phi);
        case CoefPriorKind::PMOM: return CoefPriorSpec::pmom(tau, a.a_phi, a.l_phi, a.mc_draws, a.seed);
    }
    throw ConfigError("unknown prior");
}

ModelPriorSpec model_prior_spec(const PosteriorArgs& a, int p, int pbar) {
    switch (cli::parse_model_prior_kind(a.model_prior)) {
        case ModelPriorKind::Uniform: return ModelPriorSpec::uniform(p, pbar);
        case ModelPriorKind::BetaBinomial: return ModelPriorSpec::beta_binomial(p, pbar);
        case ModelPriorKind::Complexity: return ModelPriorSpec::complexity(p, pbar, a.c);
        default: break;
    }
    throw ConfigError("unsupported model prior");
}

int run_posterior(const PosteriorArgs& a, const std::string& engine) {
    LinearCache stats(read_dataset_csv(a.data));
    const int n = stats.n(), p = stats.p();
    const int pbar = a.pbar >= 0 ? a.pbar : default_pbar(n, p);
    EngineOptions opt;
    opt.threads = a.threads;
    if (!a.reference.empty()) opt.reference = parse_reference(a.reference, p);
    PosteriorSummary s;
    if (!a.criterion.empty()) {
        if (engine != "enumerate") throw ConfigError("--criterion is only available with enumerate");
        s = enumerate_l0(stats, L0Spec::parse(a.criterion), pbar, opt);
    } else {
        const auto coef = coef_spec(a, n, p);
        const ModelPrior prior(model_prior_spec(a, p, pbar));
        if (engine == "enumerate") {
            s = enumerate_posterior(stats, coef, prior, opt);
        } else if (engine == "ortho-dp") {
            s = orthogonal_dp_posterior(stats, coef, prior, opt);
        } else {
            GibbsConfig g;
            g.sweeps = a.sweeps;
            g.burn_in = a.burn_in;
            g.chains = a.chains;
            g.seed = a.seed;
            g.random_scan = a.random_scan;
            s = gibbs_posterior(stats, coef, prior, g, opt);
        }
    }
    if (!a.models_csv.empty()) cli::write_models_csv(s, a.models_csv);
    if (!a.pips_csv.empty()) cli::write_pips_csv(s, a.pips_csv);
    std::cout << cli::to_json(s, a.top).dump(2) << '\n';
    return 0;
}

struct TailArgs {
    std::string family;
    double nu = 1, nu2 = 10, lambda = 0, w = 1, d = 1, g = 10;
    std::optional<double> s, t;
    std::string variant = "nu";
};

int run_tail(const TailArgs& a) {
    TailResult r;
    const auto& f = a.family;
    if (f == "chisq-right") r = chisq_right(a.nu, a.w);
    else if (f == "chisq-left") r = chisq_left(a.nu, a.w);
    else if (f == "ncchisq-left") r = ncchisq_left(a.nu, a.lambda, a.w, a.s);
    else if (f == "ncchisq-right") {
        const auto v = a.variant == "sqrt" ? NcRightVariant::SqrtChoice
                       : a.variant == "optimal" ? NcRightVariant::Optimal
                                                : NcRightVariant::NuChoice;
        r = ncchisq_right(a.nu, a.lambda, a.w, v);
    } else if (f == "f-right") {
        const auto mode = a.s ? FRightMode::GivenS : a.variant == "optimal" ? FRightMode::Optimal : FRightMode::Closed;
        r = f_right(a.nu, a.nu2, a.lambda, a.w, mode, a.s);
    } else if (f == "f-left") r = f_left(a.nu, a.nu2, a.lambda, a.w, a.s, a.t);
    else if (f == "f-moment")
        r = f_moment(a.nu, a.nu2, a.w, a.s, a.variant == "simplified" ? FMomentForm::Simplified : FMomentForm::General);
    else if (f == "chisq-integral") r = chisq_tail_integral(a.nu, a.d, a.g);
    else if (f == "f-integral") r = f_tail_integral(a.nu, a.nu2, a.d, a.g);
    else throw ConfigError("unknown tail family '" + f + "'");
    std::cout << cli::to_json(r).dump(2) << '\n';
    return 0;
}

struct GlobalArgs {
    int case_id = 1;
    int n_from = 200, n_to = 2000, n_step = 50;
    std::string lambda_rule = "theta-squared-n";
    std::string form = "display";
    std::string out;
    int threads = 0;
};

int run_global(const GlobalArgs& a) {
    if (a.n_step < 1 || a.n_to < a.n_from) throw ConfigError("bad n grid");
    std::vector<int> grid;
    for (int n = a.n_from; n <= a.n_to; n += a.n_step) grid.push_back(n);
    SmallForm form;
    if (a.form == "display") form = SmallForm::Display;
    else if (a.form == "consistent") form = SmallForm::Consistent;
    else throw ConfigError("--form must be display or consistent");
    const auto rows = bound_curves(a.case_id, grid, parse_lambda_rule(a.lambda_rule), form, a.threads);
    if (!a.out.empty()) {
        write_curves_csv(rows, a.out);
    }
    const auto cross = crossing_n(rows);
    json j{{"case", a.case_id}, {"points", rows.size()}, {"crossing_n", cross ? json(*cross) : json(nullptr)}};
    if (!a.out.empty()) j["out"] = a.out;
    std::cout << j.dump(2) << '\n';
    return 0;
}

struct SimArgs {
    std::string config;
    std::string preset;
    std::string out;
    std::uint64_t seed = 0;
    int replicates = 0;
    int threads = 0;
};

int run_simulate(const SimArgs& a) {
    Scenario sc;
    if (!a.config.empty()) sc = cli::load_scenario(a.config);
    else if (!a.preset.empty()) sc = cli::scenario_from_json(json{{"preset", a.preset}});
    else throw ConfigError("simulate needs --config or --preset");
    sc.seed = a.seed;
    if (a.replicates > 0) sc.replicates = a.replicates;
    if (a.threads > 0) sc.threads = a.threads;
    const auto res = run(sc);
    auto files = emit(res, EmitFormat::Csv, a.out);
    for (auto& f : emit(res, EmitFormat::PlotData, a.out)) files.push_back(f);
    json j = cli::to_json(res);
    j["files"] = files;
    std::cout << j.dump(2) << '\n';
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian variable selection: posterior engines, tail and global bounds, simulation"};
    app.require_subcommand(1);

    PosteriorArgs pa;
    auto* en = app.add_subcommand("enumerate", "exact posterior by full enumeration");
    add_posterior_options(en, pa, true);
    auto* od = app.add_subcommand("ortho-dp", "exact posterior for orthogonal designs");
    add_posterior_options(od, pa, false);
    auto* gb = app.add_subcommand("gibbs", "Gibbs sampling over inclusion indicators");
    add_posterior_options(gb, pa, false);
    gb->add_option("--sweeps", pa.sweeps);
    gb->add_option("--burn-in", pa.burn_in);
    gb->add_option("--chains", pa.chains);
    gb->add_flag("--random-scan", pa.random_scan);

    auto* bounds = app.add_subcommand("bounds", "tail inequalities and global posterior-mass bounds");
    bounds->require_subcommand(1);
    TailArgs ta;
    auto* tail = bounds->add_subcommand("tail", "evaluate one tail bound");
    tail->add_option("--family", ta.family,
                     "chisq-right | chisq-left | ncchisq-right | ncchisq-left | f-right | f-left | f-moment | "
                     "chisq-integral | f-integral")
        ->required();
    tail->add_option("--nu", ta.nu, "degrees of freedom (nu1 for F)");
    tail->add_option("--nu2", ta.nu2);
    tail->add_option("--lambda", ta.lambda, "non-centrality");
    tail->add_option("--w", ta.w, "threshold");
    tail->add_option("--d", ta.d);
    tail->add_option("--g", ta.g);
    tail->add_option("--s", ta.s);
    tail->add_option("--t", ta.t);
    tail->add_option("--variant", ta.variant, "sqrt | nu | optimal | simplified");

    GlobalArgs ga;
    auto* glob = bounds->add_subcommand("global", "spurious and non-spurious bound curves over an n grid");
    glob->add_option("--case", ga.case_id)->check(CLI::Range(1, 4));
    glob->add_option("--n-from", ga.n_from);
    glob->add_option("--n-to", ga.n_to);
    glob->add_option("--n-step", ga.n_step);
    glob->add_option("--lambda-rule", ga.lambda_rule, "theta-squared-n | quarter-n");
    glob->add_option("--form", ga.form, "display | consistent");
    glob->add_option("--out", ga.out, "CSV path");
    glob->add_option("--threads", ga.threads);

    SimArgs sa;
    auto* sim = app.add_subcommand("simulate", "run a simulation scenario");
    sim->add_option("--config", sa.config, "JSON scenario file");
    sim->add_option("--preset", sa.preset, "orthogonal-1..4 | correlated-1..2");
    sim->add_option("--out", sa.out, "output directory")->required();
    sim->add_option("--seed", sa.seed)->required();
    sim->add_option("--replicates", sa.replicates);
    sim->add_option("--threads", sa.threads);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*en) return run_posterior(pa, "enumerate");
        if (*od) return run_posterior(pa, "ortho-dp");
        if (*gb) return run_posterior(pa, "gibbs");
        if (*tail) return run_tail(ta);
        if (*glob) return run_global(ga);
        if (*sim) return run_simulate(sa);
    } catch (const bvs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
