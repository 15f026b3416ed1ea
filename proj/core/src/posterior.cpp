#include "bvs/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <thread>
#include <unordered_map>

#include <boost/math/quadrature/gauss.hpp>

#include "bvs/error.hpp"
#include "bvs/numeric.hpp"

namespace bvs {

namespace {

inline double lae(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == kNegInf) return a;
    return a + std::log1p(std::exp(b - a));
}

int resolve_threads(int requested, std::size_t work) {
    int t = requested > 0 ? requested : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(t), std::max<std::size_t>(1, work)));
}

// Runs body(i) for i in [0, count) over a fixed partition; results must be written by index.
template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
    const int T = resolve_threads(threads, count);
    if (T <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(T);
    std::vector<std::thread> pool;
    pool.reserve(T);
    for (int t = 0; t < T; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += T) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<ModelIndex> list_models(int p, int pbar) {
    std::vector<ModelIndex> out;
    for (int l = 0; l <= pbar; ++l) {
        std::vector<int> c(l);
        for (int i = 0; i < l; ++i) c[i] = i;
        while (true) {
            out.emplace_back(c);
            int i = l - 1;
            while (i >= 0 && c[i] == p - l + i) --i;
            if (i < 0) break;
            ++c[i];
            for (int k = i + 1; k < l; ++k) c[k] = c[k - 1] + 1;
        }
    }
    return out;
}

bool better(const ModelProb& a, const ModelProb& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    if (a.model.size() != b.model.size()) return a.model.size() < b.model.size();
    return a.model < b.model;
}

void finish_table(PosteriorSummary& s, std::vector<ModelProb>& table, const EngineOptions& opt) {
    std::vector<double> lw(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) lw[i] = table[i].log_evidence + table[i].log_prior;
    double z = 0;
    const auto probs = softmax(lw, &z);
    s.log_norm = z;
    s.pip.assign(s.p, 0.0);
    s.size_prob.assign(s.pbar + 1, 0.0);
    std::size_t best = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        table[i].prob = probs[i];
        for (int j : table[i].model.indices()) s.pip[j] += probs[i];
        s.size_prob[table[i].model.size()] += probs[i];
        if (better(table[i], table[best])) best = i;
    }
    s.map = table[best].model;
    s.map_prob = table[best].prob;
    s.models = std::move(table);
    if (opt.reference) s.masses = subset_masses(s, *opt.reference);
}

void check_enumeration_size(int p, int pbar, std::size_t cap) {
    const std::size_t count = count_models(p, pbar);
    if (count > cap)
        throw SizeError("model space has " + std::to_string(count) + " models above the enumeration cap of " +
                        std::to_string(cap) + "; use ortho-dp for orthogonal designs or gibbs");
}

}  // namespace

void GibbsConfig::validate() const {
    if (burn_in < 0 || sweeps <= burn_in) throw ConfigError("gibbs: need sweeps > burn_in >= 0");
    if (chains < 1) throw ConfigError("gibbs: need at least one chain");
}

int default_pbar(int n, int p) { return std::max(0, std::min(n - 5, p)); }

std::size_t count_models(int p, int pbar) {
    double total = 0;
    for (int l = 0; l <= std::min(p, pbar); ++l) total += std::exp(log_binom(p, l));
    if (total >= static_cast<double>(std::numeric_limits<std::size_t>::max())) return std::numeric_limits<std::size_t>::max();
    return static_cast<std::size_t>(std::llround(total));
}

double log_posterior_weight(const LinearCache& stats, const CoefPriorSpec& coef, const ModelPrior& prior,
                            const ModelIndex& model) {
    const double lp = prior.log_prior(model);
    if (lp == kNegInf) return kNegInf;
    return log_evidence(stats, model, coef).log_value + lp;
}

PosteriorSummary enumerate_posterior(const LinearCache& stats, const CoefPriorSpec& coef, const ModelPrior& prior,
                                     const EngineOptions& opt) {
    coef.validate();
    if (prior.p() != stats.p()) throw ConfigError("model prior dimension differs from the number of covariates");
    if (coef.kind == CoefPriorKind::PMOM) require_standardized(stats.data().X);
    const int pbar = std::min(prior.pbar(), stats.p());
    check_enumeration_size(stats.p(), pbar, opt.cap);
    const auto models = list_models(stats.p(), pbar);
    std::vector<ModelProb> table(models.size());
    parallel_for(models.size(), opt.threads, [&](std::size_t i) {
        const Evidence ev = log_evidence(stats, models[i], coef);
        table[i] = {models[i], ev.log_value, prior.log_prior(models[i]), 0.0, ev.mc_se, 0};
    });
    PosteriorSummary s;
    s.method = "enumerate";
    s.p = stats.p();
    s.pbar = pbar;
    for (const auto& r : table) s.precision_warnings += r.mc_se > 0.5;
    finish_table(s, table, opt);
    return s;
}

PosteriorSummary enumerate_l0(const LinearCache& stats, const L0Spec& spec, int pbar, const EngineOptions& opt) {
    pbar = std::min(pbar, stats.p());
    check_enumeration_size(stats.p(), pbar, opt.cap);
    const auto models = list_models(stats.p(), pbar);
    std::vector<ModelProb> table(models.size());
    parallel_for(models.size(), opt.threads, [&](std::size_t i) {
        table[i] = {models[i], log_h(stats, models[i], spec), 0.0, 0.0, 0.0, 0};
    });
    PosteriorSummary s;
    s.method = "l0:" + spec.name();
    s.p = stats.p();
    s.pbar = pbar;
    finish_table(s, table, opt);
    return s;
}

// ---------------------------------------------------------------------------------------------
// Orthogonal designs

namespace {

struct OrthoSetup {
    int n = 0, p = 0, pbar = 0;
    bool known_phi = false;
    bool pmom = false;
    double tau = 1, phi = 1;
    double alpha = 0;     // (a + n)/2
    double A = 0;         // l + y'y
    double log_const = 0;
    std::vector<double> log_a, g, theta2, vt, d;
    std::vector<double> log_c;  // log prior per model of size l
};

OrthoSetup ortho_setup(const LinearCache& stats, const CoefPriorSpec& coef, const ModelPrior& prior) {
    const Matrix& G = stats.gram();
    const int p = stats.p(), n = stats.n();
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (std::abs(G(i, j)) > 1e-8 * std::sqrt(G(i, i) * G(j, j)))
                throw ContractError("ortho-dp needs an orthogonal design; columns " + std::to_string(i + 1) + " and " +
                                    std::to_string(j + 1) + " are correlated");
    OrthoSetup o;
    o.n = n;
    o.p = p;
    o.pbar = std::min(prior.pbar(), p);
    o.tau = coef.tau;
    o.known_phi = coef.kind == CoefPriorKind::ZellnerKnownPhi;
    o.pmom = coef.kind == CoefPriorKind::PMOM;
    o.phi = coef.phi;
    for (int j = 0; j < p; ++j) {
        const double dj = G(j, j);
        if (!(dj > 0)) throw SingularError("zero column " + std::to_string(j + 1));
        double vjj = 1.0 / dj;
        if (coef.kind == CoefPriorKind::NormalV && coef.vmode == VMode::Explicit) {
            const Matrix& V = *coef.explicit_v;
            for (int k = 0; k < p; ++k)
                if (k != j && V(j, k) != 0.0) throw ContractError("ortho-dp needs a diagonal prior covariance");
            vjj = V(j, j);
            if (!(vjj > 0)) throw ContractError("ortho-dp: prior variance must be positive");
        }
        const double denom = dj + 1.0 / (coef.tau * vjj);
        const double xy = stats.xty()(j);
        o.d.push_back(dj);
        o.log_a.push_back(-0.5 * std::log1p(coef.tau * vjj * dj));
        o.g.push_back(xy * xy / denom);
        o.theta2.push_back((xy / denom) * (xy / denom));
        o.vt.push_back(1.0 / denom);
    }
    for (int l = 0; l <= o.pbar; ++l) o.log_c.push_back(prior.log_prior_size(l));
    const double yty = stats.yty();
    if (o.known_phi) {
        o.log_const = -0.5 * n * std::log(2.0 * std::numbers::pi * o.phi) - yty / (2.0 * o.phi);
    } else {
        o.alpha = 0.5 * (coef.a_phi + n);
        o.A = coef.l_phi + yty;
        o.log_const = -0.5 * n * std::log(2.0 * std::numbers::pi) + 0.5 * coef.a_phi * std::log(0.5 * coef.l_phi) -
                      std::lgamma(0.5 * coef.a_phi) + o.alpha * std::log(2.0);
    }
    return o;
}

// Per-variable log weights and the variable-free part of the integrand at s = log(1/(2 phi)).
void node_weights(const OrthoSetup& o, double s, std::vector<double>& w, double& base) {
    w.resize(o.p);
    if (o.known_phi) {
        for (int j = 0; j < o.p; ++j) w[j] = o.log_a[j] + o.g[j] / (2.0 * o.phi);
        base = o.log_const;
        return;
    }
    const double t = std::exp(s);
    for (int j = 0; j < o.p; ++j) {
        w[j] = o.log_a[j] + o.g[j] * t;
        if (o.pmom) w[j] += std::log((2.0 * t * o.theta2[j] + o.vt[j]) * o.d[j] / o.tau);
    }
    base = o.log_const + o.alpha * s - o.A * t;
}

// Forward elementary symmetric sums in log space, truncated at pbar.
void esp_forward(const std::vector<double>& w, int pbar, const std::vector<char>* skip, std::vector<double>& E,
                 std::vector<double>* history) {
    E.assign(pbar + 1, kNegInf);
    E[0] = 0.0;
    int seen = 0;
    const int p = static_cast<int>(w.size());
    if (history) history->assign(static_cast<std::size_t>(p) * (pbar + 1), kNegInf);
    for (int j = 0; j < p; ++j) {
        if (history) std::copy(E.begin(), E.end(), history->begin() + static_cast<std::size_t>(j) * (pbar + 1));
        if (skip && (*skip)[j]) continue;
        ++seen;
        for (int l = std::min(seen, pbar); l >= 1; --l) E[l] = lae(E[l], E[l - 1] + w[j]);
    }
}

struct NodeResult {
    double total = kNegInf;
    std::vector<double> size;   // per size
    std::vector<double> pip;    // per variable
    double ref = kNegInf;
    std::vector<double> sigma;  // supersets of the reference per size
};

NodeResult eval_node(const OrthoSetup& o, double s, const std::optional<ModelIndex>& ref, bool full) {
    std::vector<double> w, E, hist;
    double base = 0;
    node_weights(o, s, w, base);
    esp_forward(w, o.pbar, nullptr, E, full ? &hist : nullptr);
    NodeResult r;
    r.size.resize(o.pbar + 1);
    LogAccumulator tot;
    for (int l = 0; l <= o.pbar; ++l) {
        r.size[l] = base + o.log_c[l] + E[l];
        tot.add(r.size[l]);
    }
    r.total = tot.value();
    if (!full) return r;

    // reverse-mode sweep: adjoint of the size sums with respect to each variable's weight
    const int P = o.pbar + 1;
    std::vector<double> adj(o.log_c.begin(), o.log_c.end());
    r.pip.assign(o.p, kNegInf);
    for (int j = o.p - 1; j >= 0; --j) {
        const double* prev = hist.data() + static_cast<std::size_t>(j) * P;
        LogAccumulator gj;
        for (int l = 1; l < P; ++l) gj.add(adj[l] + prev[l - 1]);
        r.pip[j] = base + w[j] + gj.value();
        for (int l = 0; l + 1 < P; ++l) adj[l] = lae(adj[l], w[j] + adj[l + 1]);
    }
    if (ref) {
        const int pt = ref->size();
        double wt = 0;
        std::vector<char> skip(o.p, 0);
        for (int j : ref->indices()) {
            wt += w[j];
            skip[j] = 1;
        }
        r.sigma.assign(P, kNegInf);
        if (pt <= o.pbar) {
            r.ref = base + o.log_c[pt] + wt;
            std::vector<double> Er;
            esp_forward(w, o.pbar - pt, &skip, Er, nullptr);
            for (int l = pt + 1; l <= o.pbar; ++l) r.sigma[l] = base + o.log_c[l] + wt + Er[l - pt];
        }
    }
    return r;
}

struct Rule {
    std::vector<double> nodes, weights;
};

Rule integration_rule(const OrthoSetup& o, const std::optional<ModelIndex>& ref) {
    Rule rule;
    if (o.known_phi) {
        rule.nodes = {0.0};
        rule.weights = {1.0};
        return rule;
    }
    std::vector<double> gs(o.g);
    std::sort(gs.begin(), gs.end(), std::greater<>());
    double gmax = 0;
    for (int l = 0; l < o.pbar; ++l) gmax += gs[l];
    const double aeff = o.alpha + (o.pmom ? o.pbar : 0);
    const double width = 1.0 / std::sqrt(o.alpha);
    double lo = std::log(o.alpha / o.A) - 12.0 * width - 0.5;
    double hi = std::log(aeff / std::max(o.A - gmax, 1e-300 * o.A)) + 6.0 * width + 0.5;
    // widen until the integrand is negligible at both ends
    for (int it = 0; it < 60; ++it) {
        const double flo = eval_node(o, lo, ref, false).total;
        const double fhi = eval_node(o, hi, ref, false).total;
        const double fmid = eval_node(o, 0.5 * (lo + hi), ref, false).total;
        const double peak = std::max({flo, fhi, fmid});
        bool ok = true;
        if (flo > peak - 50.0) {
            lo -= 1.0;
            ok = false;
        }
        if (fhi > peak - 50.0) {
            hi += 1.0;
            ok = false;
        }
        if (ok) break;
    }
    using GL = boost::math::quadrature::gauss<double, 20>;
    const auto& x = GL::abscissa();
    const auto& wt = GL::weights();
    const double panel = 3.0 * width;
    const int panels = std::max(8, static_cast<int>(std::ceil((hi - lo) / panel)));
    const double h = (hi - lo) / panels;
    for (int k = 0; k < panels; ++k) {
        const double mid = lo + (k + 0.5) * h;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double xi = x[i];
            if (xi == 0.0) {
                rule.nodes.push_back(mid);
                rule.weights.push_back(0.5 * h * wt[i]);
            } else {
                rule.nodes.push_back(mid - 0.5 * h * xi);
                rule.weights.push_back(0.5 * h * wt[i]);
                rule.nodes.push_back(mid + 0.5 * h * xi);
                rule.weights.push_back(0.5 * h * wt[i]);
            }
        }
    }
    return rule;
}

double ortho_model_log_weight(const OrthoSetup& o, const Rule& rule, const ModelIndex& m) {
    if (m.size() > o.pbar) return kNegInf;
    LogAccumulator acc;
    std::vector<double> w;
    double base = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        node_weights(o, rule.nodes[i], w, base);
        double v = base + o.log_c[m.size()] + std::log(rule.weights[i]);
        for (int j : m.indices()) v += w[j];
        acc.add(v);
    }
    return acc.value();
}

}  // namespace

PosteriorSummary orthogonal_dp_posterior(const LinearCache& stats, const CoefPriorSpec& coef, const ModelPrior& prior,
                                         const EngineOptions& opt) {
    coef.validate();
    if (prior.p() != stats.p()) throw ConfigError("model prior dimension differs from the number of covariates");
    if (coef.kind == CoefPriorKind::PMOM) require_standardized(stats.data().X);
    const OrthoSetup o = ortho_setup(stats, coef, prior);
    const Rule rule = integration_rule(o, opt.reference);
    const std::size_t N = rule.nodes.size();
    std::vector<NodeResult> res(N);
    parallel_for(N, opt.threads, [&](std::size_t i) { res[i] = eval_node(o, rule.nodes[i], opt.reference, true); });

    // fixed-order reduction
    const int P = o.pbar + 1;
    LogAccumulator total, ref;
    std::vector<LogAccumulator> size(P), pip(o.p), sigma(P);
    for (std::size_t i = 0; i < N; ++i) {
        const double lw = std::log(rule.weights[i]);
        total.add(res[i].total + lw);
        for (int l = 0; l < P; ++l) size[l].add(res[i].size[l] + lw);
        for (int j = 0; j < o.p; ++j) pip[j].add(res[i].pip[j] + lw);
        if (opt.reference) {
            ref.add(res[i].ref + lw);
            for (int l = 0; l < P; ++l) sigma[l].add(res[i].sigma[l] + lw);
        }
    }
    PosteriorSummary s;
    s.method = "ortho-dp";
    s.p = o.p;
    s.pbar = o.pbar;
    s.log_norm = total.value();
    if (!std::isfinite(s.log_norm)) throw NumericError("ortho-dp: normalizing constant is not finite");
    s.size_prob.resize(P);
    for (int l = 0; l < P; ++l) s.size_prob[l] = std::exp(size[l].value() - s.log_norm);
    s.pip.resize(o.p);
    for (int j = 0; j < o.p; ++j) s.pip[j] = std::min(1.0, std::exp(pip[j].value() - s.log_norm));
    if (opt.reference) {
        SubsetMasses m;
        m.reference = *opt.reference;
        m.p_reference = std::exp(ref.value() - s.log_norm);
        m.sigma.resize(P);
        m.sigma_tilde.resize(P);
        for (int l = 0; l < P; ++l) {
            m.sigma[l] = std::exp(sigma[l].value() - s.log_norm);
            const double rest = s.size_prob[l] - m.sigma[l] - (l == opt.reference->size() ? m.p_reference : 0.0);
            m.sigma_tilde[l] = std::max(0.0, rest);
        }
        s.masses = m;
    }

    // MAP among nested candidates ordered by inclusion probability and by signal size
    std::vector<int> by_pip(o.p), by_g(o.p);
    for (int j = 0; j < o.p; ++j) by_pip[j] = by_g[j] = j;
    std::stable_sort(by_pip.begin(), by_pip.end(), [&](int a, int b) { return s.pip[a] > s.pip[b]; });
    std::stable_sort(by_g.begin(), by_g.end(), [&](int a, int b) {
        return o.g[a] + 2.0 * o.log_a[a] > o.g[b] + 2.0 * o.log_a[b];
    });
    double best = kNegInf;
    for (const auto* order : {&by_pip, &by_g}) {
        for (int l = 0; l <= o.pbar; ++l) {
            std::vector<int> idx(order->begin(), order->begin() + l);
            std::sort(idx.begin(), idx.end());
            ModelIndex m(idx);
            const double v = ortho_model_log_weight(o, rule, m);
            const bool tie = std::abs(v - best) <= 1e-12 * std::max(1.0, std::abs(v));
            if ((v > best && !tie) || (tie && (m.size() < s.map.size() || (m.size() == s.map.size() && m < s.map)))) {
                best = v;
                s.map = m;
            }
        }
    }
    s.map_prob = std::exp(best - s.log_norm);

    if (opt.model_table) {
        check_enumeration_size(o.p, o.pbar, opt.cap);
        const auto models = list_models(o.p, o.pbar);
        s.models.resize(models.size());
        parallel_for(models.size(), opt.threads, [&](std::size_t i) {
            auto& r = s.models[i];
            r.model = models[i];
            r.log_prior = o.log_c[r.model.size()];
            r.log_evidence = ortho_model_log_weight(o, rule, r.model) - r.log_prior;
            r.prob = std::exp(r.log_evidence + r.log_prior - s.log_norm);
        });
        std::stable_sort(s.models.begin(), s.models.end(), better);
    }
    return s;
}

// ---------------------------------------------------------------------------------------------
// Gibbs sampling

namespace {

struct ChainOut {
    std::vector<double> pip_sum;
    std::vector<std::vector<double>> batch_pip;  // per batch, per variable
    std::vector<double> first_half, second_half;
    std::map<ModelIndex, int> visits;
    std::unordered_map<ModelIndex, std::pair<double, Evidence>, ModelIndexHash> memo;
    int kept = 0;
};

ChainOut run_chain(const LinearCache& stats, const CoefPriorSpec& coef, const ModelPrior& prior,
                   const GibbsConfig& cfg, int chain) {
    const int p = stats.p();
    ChainOut out;
    std::mt19937_64 rng(substream_seed(cfg.seed, 0x61bb5, static_cast<std::uint64_t>(chain)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, p - 1);

    auto weight = [&](const ModelIndex& m) -> double {
        const double lp = prior.log_prior(m);
        if (lp == kNegInf) return kNegInf;
        auto it = out.memo.find(m);
        if (it != out.memo.end()) return it->second.first;
        if (out.memo.size() >= (std::size_t{1} << 20)) out.memo.clear();
        const Evidence ev = log_evidence(stats, m, coef);
        out.memo.emplace(m, std::make_pair(ev.log_value + lp, ev));
        return ev.log_value + lp;
    };

    std::vector<char> gamma(p, 0);
    if (cfg.init) {
        if (cfg.init->size() > prior.pbar()) throw ConfigError("gibbs: initial model exceeds the size cap");
        for (int j : cfg.init->indices()) gamma[j] = 1;
    }
    const int kept_total = cfg.sweeps - cfg.burn_in;
    const int nbatch = std::min(20, kept_total);
    out.pip_sum.assign(p, 0.0);
    out.first_half.assign(p, 0.0);
    out.second_half.assign(p, 0.0);
    out.batch_pip.assign(nbatch, std::vector<double>(p, 0.0));
    std::vector<int> batch_count(nbatch, 0);
    std::vector<double> sweep_pip(p);

    for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
        std::fill(sweep_pip.begin(), sweep_pip.end(), 0.0);
        std::vector<int> hits(p, 0);
        for (int step = 0; step < p; ++step) {
            const int j = cfg.random_scan ? pick(rng) : step;
            gamma[j] = 1;
            const double w1 = weight(ModelIndex::from_flags(gamma));
            gamma[j] = 0;
            const double w0 = weight(ModelIndex::from_flags(gamma));
            double prob1;
            if (w1 == kNegInf) prob1 = 0.0;
            else if (w0 == kNegInf) prob1 = 1.0;
            else prob1 = 1.0 / (1.0 + std::exp(w0 - w1));
            gamma[j] = unif(rng) < prob1 ? 1 : 0;
            if (cfg.rao_blackwell) {
                sweep_pip[j] += prob1;
                ++hits[j];
            }
        }
        if (sweep < cfg.burn_in) continue;
        for (int j = 0; j < p; ++j) {
            if (!cfg.rao_blackwell) sweep_pip[j] = gamma[j];
            else if (hits[j] > 0) sweep_pip[j] /= hits[j];
            else sweep_pip[j] = gamma[j];
        }
        const int k = sweep - cfg.burn_in;
        const int b = static_cast<int>(static_cast<long long>(k) * nbatch / kept_total);
        ++batch_count[b];
        auto& half = 2 * k < kept_total ? out.first_half : out.second_half;
        for (int j = 0; j < p; ++j) {
            out.pip_sum[j] += sweep_pip[j];
            out.batch_pip[b][j] += sweep_pip[j];
            half[j] += sweep_pip[j];
        }
        ++out.visits[ModelIndex::from_flags(gamma)];
        ++out.kept;
    }
    for (int b = 0; b < nbatch; ++b)
        for (int j = 0; j < p; ++j) out.batch_pip[b][j] /= std::max(1, batch_count[b]);
    const int h1 = (kept_total + 1) / 2, h2 = kept_total - h1;
    for (int j = 0; j < p; ++j) {
        out.first_half[j] /= std::max(1, h1);
        out.second_half[j] /= std::max(1, h2);
    }
    return out;
}

}  // namespace

PosteriorSummary gibbs_posterior(const LinearCache& stats, const CoefPriorSpec& coef, const ModelPrior& prior,
                                 const GibbsConfig& cfg, const EngineOptions& opt) {
    coef.validate();
    cfg.validate();
    if (prior.p() != stats.p()) throw ConfigError("model prior dimension differs from the number of covariates");
    if (coef.kind == CoefPriorKind::PMOM) require_standardized(stats.data().X);
    const int p = stats.p();
    std::vector<ChainOut> chains(cfg.chains);
    parallel_for(cfg.chains, opt.threads, [&](std::size_t c) {
        chains[c] = run_chain(stats, coef, prior, cfg, static_cast<int>(c));
    });

    PosteriorSummary s;
    s.method = "gibbs";
    s.p = p;
    s.pbar = std::min(prior.pbar(), p);
    s.chains = cfg.chains;
    s.pip.assign(p, 0.0);
    s.pip_se.assign(p, 0.0);
    std::vector<std::vector<double>> batches;
    int kept = 0;
    for (const auto& c : chains) {
        for (int j = 0; j < p; ++j) s.pip[j] += c.pip_sum[j];
        kept += c.kept;
        for (const auto& b : c.batch_pip) batches.push_back(b);
        for (int j = 0; j < p; ++j)
            s.split_half_discrepancy = std::max(s.split_half_discrepancy, std::abs(c.first_half[j] - c.second_half[j]));
    }
    for (int j = 0; j < p; ++j) s.pip[j] /= kept;
    const double B = static_cast<double>(batches.size());
    if (B > 1) {
        for (int j = 0; j < p; ++j) {
            double mean = 0, ss = 0;
            for (const auto& b : batches) mean += b[j];
            mean /= B;
            for (const auto& b : batches) ss += (b[j] - mean) * (b[j] - mean);
            s.pip_se[j] = std::sqrt(ss / (B - 1) / B);
        }
    }

    std::map<ModelIndex, int> visits;
    for (const auto& c : chains)
        for (const auto& [m, v] : c.visits) visits[m] += v;
    s.size_prob.assign(s.pbar + 1, 0.0);
    for (const auto& [m, v] : visits) {
        ModelProb r;
        r.model = m;
        r.visits = v;
        r.prob = static_cast<double>(v) / kept;
        r.log_prior = prior.log_prior(m);
        r.log_evidence = std::numeric_limits<double>::quiet_NaN();
        for (const auto& c : chains) {
            auto it = c.memo.find(m);
            if (it != c.memo.end()) {
                r.log_evidence = it->second.second.log_value;
                r.mc_se = it->second.second.mc_se;
                break;
            }
        }
        if (std::isnan(r.log_evidence)) {
            const Evidence ev = log_evidence(stats, m, coef);
            r.log_evidence = ev.log_value;
            r.mc_se = ev.mc_se;
        }
        s.size_prob[m.size()] += r.prob;
        s.models.push_back(r);
    }
    for (const auto& c : chains)
        for (const auto& [m, e] : c.memo) s.precision_warnings += e.second.precision_warning;
    std::sort(s.models.begin(), s.models.end(), better);
    s.map = s.models.front().model;
    s.map_prob = s.models.front().prob;
    s.log_norm = std::numeric_limits<double>::quiet_NaN();
    if (opt.reference) s.masses = subset_masses(s, *opt.reference);
    return s;
}

// ---------------------------------------------------------------------------------------------

Selection select(const PosteriorSummary& s, SelectRule rule, double threshold,
                 const std::optional<ModelIndex>& reference) {
    Selection out;
    if (rule == SelectRule::Map) {
        out.model = s.map;
        out.prob = s.map_prob;
    } else {
        if (!(threshold > 0 && threshold < 1)) throw ContractError("median rule needs a threshold in (0, 1)");
        std::vector<int> idx;
        for (int j = 0; j < s.p; ++j)
            if (s.pip[j] > threshold) idx.push_back(j);
        out.model = ModelIndex(idx);
        out.prob = std::numeric_limits<double>::quiet_NaN();
        for (const auto& r : s.models)
            if (r.model == out.model) out.prob = r.prob;
        if (std::isnan(out.prob) && !s.models.empty() && s.method != "gibbs") out.prob = 0.0;
    }
    if (reference) {
        out.equals_reference = out.model == *reference;
        if (s.masses && s.masses->reference == *reference) out.p_reference = s.masses->p_reference;
        else if (!s.models.empty()) out.p_reference = subset_masses(s, *reference).p_reference;
    }
    return out;
}

SubsetMasses subset_masses(const PosteriorSummary& s, const ModelIndex& reference) {
    if (s.models.empty()) {
        if (s.masses && s.masses->reference == reference) return *s.masses;
        throw ContractError("subset masses for this summary need the reference model at computation time");
    }
    SubsetMasses m;
    m.reference = reference;
    m.sigma.assign(s.pbar + 1, 0.0);
    m.sigma_tilde.assign(s.pbar + 1, 0.0);
    for (const auto& r : s.models) {
        if (r.model == reference) m.p_reference += r.prob;
        else if (reference.is_subset_of(r.model)) m.sigma[r.model.size()] += r.prob;
        else m.sigma_tilde[r.model.size()] += r.prob;
    }
    return m;
}

}  // namespace bvs
