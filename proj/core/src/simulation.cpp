#include "bvs/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include "bvs/error.hpp"
#include "bvs/numeric.hpp"

namespace bvs {

namespace {

// Substream purposes; data draws never depend on the bundle list.
constexpr std::uint64_t kDataStream = 0xda7a;
constexpr std::uint64_t kBundleStream = 0xb0d1e;

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

Matrix gaussian(int n, int p, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    Matrix X(n, p);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < n; ++i) X(i, j) = z(rng);
    return X;
}

// Center and scale columns to variance 1 (divisor n).
void standardize(Matrix& X) {
    const double n = static_cast<double>(X.rows());
    for (int j = 0; j < X.cols(); ++j) {
        X.col(j).array() -= X.col(j).mean();
        const double sd = std::sqrt(X.col(j).squaredNorm() / n);
        if (sd > 0) X.col(j) /= sd;
    }
}

struct Moments {
    double mean = 0;
    double se = 0;
};

Moments moments(const std::vector<double>& v) {
    Moments m;
    if (v.empty()) return m;
    double s = 0;
    for (double x : v) s += x;
    m.mean = s / v.size();
    if (v.size() > 1) {
        double ss = 0;
        for (double x : v) ss += (x - m.mean) * (x - m.mean);
        m.se = std::sqrt(ss / (v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
    }
    return m;
}

ModelIndex first_k(int k) {
    std::vector<int> v(k);
    for (int j = 0; j < k; ++j) v[j] = j;
    return ModelIndex(std::move(v));
}

}  // namespace

DesignKind parse_design(const std::string& s) {
    const auto t = lower(s);
    if (t == "orthogonal") return DesignKind::Orthogonal;
    if (t == "equicorrelated") return DesignKind::Equicorrelated;
    if (t == "custom" || t == "custom-matrix") return DesignKind::CustomMatrix;
    if (t == "misspecified" || t == "misspecified-mean") return DesignKind::Misspecified;
    if (t == "heteroskedastic") return DesignKind::Heteroskedastic;
    throw ConfigError("unknown design '" + s + "'");
}

EngineKind parse_engine(const std::string& s) {
    const auto t = lower(s);
    if (t == "enumerate") return EngineKind::Enumerate;
    if (t == "ortho-dp" || t == "orthodp") return EngineKind::OrthoDP;
    if (t == "gibbs") return EngineKind::Gibbs;
    throw ConfigError("unknown engine '" + s + "'");
}

std::string design_name(DesignKind d) {
    switch (d) {
        case DesignKind::Orthogonal: return "orthogonal";
        case DesignKind::Equicorrelated: return "equicorrelated";
        case DesignKind::CustomMatrix: return "custom";
        case DesignKind::Misspecified: return "misspecified";
        case DesignKind::Heteroskedastic: return "heteroskedastic";
    }
    return "?";
}

std::string engine_name(EngineKind e) {
    switch (e) {
        case EngineKind::Enumerate: return "enumerate";
        case EngineKind::OrthoDP: return "ortho-dp";
        case EngineKind::Gibbs: return "gibbs";
    }
    return "?";
}

Bundle Bundle::zellner_complexity(double c) {
    Bundle b;
    b.name = "zellner-complexity";
    b.coef = CoefPriorSpec::zellner_unknown(1.0);
    b.tau_preset = TauPreset::UnitInformation;
    b.model_prior = ModelPriorKind::Complexity;
    b.complexity_c = c;
    return b;
}

Bundle Bundle::zellner_betabinomial() {
    Bundle b;
    b.name = "zellner-betabinomial";
    b.coef = CoefPriorSpec::zellner_unknown(1.0);
    b.tau_preset = TauPreset::UnitInformation;
    return b;
}

Bundle Bundle::pmom_betabinomial() {
    Bundle b;
    b.name = "pmom-betabinomial";
    b.coef = CoefPriorSpec::pmom(1.0);
    b.tau_preset = TauPreset::Pmom;
    return b;
}

CoefPriorSpec Bundle::coef_at(int n, int p) const {
    CoefPriorSpec c = coef;
    if (tau_preset) c.tau = bvs::tau_preset(*tau_preset, n, p);
    return c;
}

ModelPriorSpec Bundle::model_prior_at(int p, int pbar) const {
    switch (model_prior) {
        case ModelPriorKind::Uniform: return ModelPriorSpec::uniform(p, pbar);
        case ModelPriorKind::BetaBinomial: return ModelPriorSpec::beta_binomial(p, pbar);
        case ModelPriorKind::Complexity: return ModelPriorSpec::complexity(p, pbar, complexity_c);
        case ModelPriorKind::CustomSizeWeights: break;
    }
    throw ConfigError("bundle '" + name + "': custom size weights are not supported in simulations");
}

void Scenario::validate() const {
    if (replicates < 1) throw ConfigError("scenario: replicates must be >= 1");
    if (n < 2 || p < 1) throw ConfigError("scenario: need n >= 2, p >= 1");
    if (pt < 0 || pt > p) throw ConfigError("scenario: need 0 <= p_t <= p");
    if (static_cast<int>(coefficients.size()) != pt) throw ConfigError("scenario: coefficient pattern length must equal p_t");
    if (!(phi >= 0)) throw ConfigError("scenario: phi* must be >= 0");
    if (design == DesignKind::Equicorrelated && !(rho > -1.0 / std::max(1, p - 1) && rho < 1))
        throw ConfigError("scenario: rho outside the positive-definite range");
    if (design == DesignKind::CustomMatrix) {
        if (!custom_x) throw ConfigError("scenario: custom design needs a matrix");
        if (custom_x->rows() != n || custom_x->cols() != p) throw ConfigError("scenario: custom matrix must be n x p");
    }
    if (bundles.empty()) throw ConfigError("scenario: at least one bundle required");
    if (!(pip_threshold > 0 && pip_threshold < 1)) throw ConfigError("scenario: PIP threshold must lie in (0,1)");
    for (int m : n_grid)
        if (m < 2) throw ConfigError("scenario: n grid entries must be >= 2");
    if (engine == EngineKind::Gibbs) gibbs.validate();
    for (const auto& b : bundles) {
        if (b.name.empty()) throw ConfigError("scenario: bundle without a name");
        if (!b.l0) b.coef_at(n, p).validate();
    }
}

int Scenario::effective_pbar() const { return pbar ? std::min(*pbar, p) : default_pbar(n, p); }

Dataset generate(const Scenario& sc, int replicate, std::vector<std::string>* warnings) {
    sc.validate();
    const int n = sc.n, p = sc.p;
    std::mt19937_64 rng(substream_seed(sc.seed, kDataStream, static_cast<std::uint64_t>(replicate)));
    Matrix X;
    switch (sc.design) {
        case DesignKind::Orthogonal:
        case DesignKind::Misspecified:
        case DesignKind::Heteroskedastic: {
            X = gaussian(n, p, rng);
            standardize(X);
            if (sc.design != DesignKind::Orthogonal) break;
            if (p <= n - 1) {
                Eigen::HouseholderQR<Matrix> qr(X);
                Matrix Q = qr.householderQ() * Matrix::Identity(n, p);
                X = Q * std::sqrt(static_cast<double>(n));
            } else if (warnings) {
                warnings->push_back("orthogonal design infeasible for p >= n; using independent standardized columns");
            }
            break;
        }
        case DesignKind::Equicorrelated: {
            Matrix C = Matrix::Constant(p, p, sc.rho);
            C.diagonal().setOnes();
            Eigen::LLT<Matrix> llt(C);
            X = gaussian(n, p, rng) * Matrix(llt.matrixU());
            standardize(X);
            break;
        }
        case DesignKind::CustomMatrix: X = *sc.custom_x; break;
    }

    Truth truth;
    truth.model = first_k(sc.pt);
    truth.theta = Vector::Zero(p);
    for (int j = 0; j < sc.pt; ++j) truth.theta[j] = sc.coefficients[j];
    truth.phi = sc.phi;
    Vector mean = X * truth.theta;

    if (sc.design == DesignKind::Misspecified) {
        Matrix W(n, p + 1);
        W.leftCols(p) = X;
        Vector z = X.col(0).array().square().matrix();
        z.array() -= z.mean();
        const double sd = std::sqrt(z.squaredNorm() / n);
        if (sd > 0) z /= sd;
        W.col(p) = z;
        Vector beta(p + 1);
        beta.head(p) = truth.theta;
        beta[p] = sc.misspec_coef;
        mean = W * beta;
        truth.W = std::move(W);
        truth.beta = std::move(beta);
    }

    Vector sd_e = Vector::Ones(n);
    if (sc.design == DesignKind::Heteroskedastic) {
        Vector v = (sc.hetero_strength * X.col(0)).array().exp().matrix();
        v *= n / v.sum();  // trace n
        sd_e = v.array().sqrt().matrix();
        truth.sigma = Matrix(v.asDiagonal());
    }

    std::normal_distribution<double> z;
    Vector y = mean;
    const double s = std::sqrt(sc.phi);
    for (int i = 0; i < n; ++i) y[i] += s * sd_e[i] * z(rng);

    Dataset d;
    d.y = std::move(y);
    d.X = std::move(X);
    d.truth = std::move(truth);
    d.names.resize(p);
    for (int j = 0; j < p; ++j) d.names[j] = "x" + std::to_string(j + 1);
    return d;
}

namespace {

ReplicateDigest digest_one(const Scenario& sc, const Bundle& b, int bi, const Dataset& data, int replicate) {
    ReplicateDigest dg;
    const int n = data.n(), p = data.p();
    const int pbar = sc.effective_pbar();
    LinearCache stats(data);
    const ModelIndex t = data.require_truth().model;
    EngineOptions opt;
    opt.reference = t;
    opt.threads = 1;
    const std::uint64_t bseed = substream_seed(sc.seed, kBundleStream + bi, static_cast<std::uint64_t>(replicate));

    PosteriorSummary s;
    if (b.l0) {
        s = enumerate_l0(stats, *b.l0, pbar, opt);
    } else {
        CoefPriorSpec coef = b.coef_at(n, p);
        coef.seed = bseed;
        const ModelPrior prior(b.model_prior_at(p, pbar));
        switch (sc.engine) {
            case EngineKind::Enumerate: s = enumerate_posterior(stats, coef, prior, opt); break;
            case EngineKind::OrthoDP: s = orthogonal_dp_posterior(stats, coef, prior, opt); break;
            case EngineKind::Gibbs: {
                GibbsConfig g = sc.gibbs;
                g.seed = substream_seed(bseed, 0x9b);
                s = gibbs_posterior(stats, coef, prior, g, opt);
                break;
            }
        }
    }
    const SubsetMasses m = s.masses ? *s.masses : subset_masses(s, t);
    dg.p_true = m.p_reference;
    for (int l = 0; l < static_cast<int>(m.sigma.size()); ++l) dg.p_spurious += m.sigma[l];
    for (int l = 0; l < static_cast<int>(m.sigma_tilde.size()); ++l)
        (l < t.size() ? dg.p_nonspur_small : dg.p_nonspur_large) += m.sigma_tilde[l];
    dg.identity_error = std::abs(dg.p_true + dg.p_spurious + dg.p_nonspur_small + dg.p_nonspur_large - 1.0);
    dg.pip = s.pip;
    dg.map_correct = s.map == t;
    dg.median_correct = select(s, SelectRule::Median, 0.5).model == t;
    dg.p_true_le_half = dg.p_true <= 0.5;
    dg.selected.resize(p);
    for (int j = 0; j < p; ++j) dg.selected[j] = s.pip[j] > sc.pip_threshold;
    dg.ok = true;
    return dg;
}

struct SweepOut {
    std::vector<std::vector<ReplicateDigest>> digests;
    std::vector<std::string> warnings;
    int failures = 0;
};

SweepOut run_at(const Scenario& sc) {
    const int R = sc.replicates, B = static_cast<int>(sc.bundles.size());
    SweepOut out;
    out.digests.assign(B, std::vector<ReplicateDigest>(R));
    std::vector<std::vector<std::string>> warn(R);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int r = next++; r < R; r = next++) {
            Dataset data;
            try {
                data = generate(sc, r, &warn[r]);
            } catch (const std::exception& e) {
                for (int b = 0; b < B; ++b) out.digests[b][r].error = e.what();
                continue;
            }
            for (int b = 0; b < B; ++b) {
                try {
                    out.digests[b][r] = digest_one(sc, sc.bundles[b], b, data, r);
                } catch (const std::exception& e) {
                    out.digests[b][r].ok = false;
                    out.digests[b][r].error = e.what();
                }
            }
        }
    };
    const int nt = std::max(1, std::min(R, sc.threads > 0 ? sc.threads : static_cast<int>(std::thread::hardware_concurrency())));
    std::vector<std::thread> pool;
    for (int w = 0; w < nt; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (int r = 0; r < R; ++r)
        for (auto& w : warn[r]) out.warnings.push_back("replicate " + std::to_string(r) + ": " + w);
    for (int b = 0; b < B; ++b)
        for (int r = 0; r < R; ++r) out.failures += out.digests[b][r].ok ? 0 : 1;
    return out;
}

std::vector<double> collect(const std::vector<ReplicateDigest>& ds, double ReplicateDigest::*field) {
    std::vector<double> v;
    for (const auto& d : ds)
        if (d.ok) v.push_back(d.*field);
    return v;
}

std::vector<double> collect_bool(const std::vector<ReplicateDigest>& ds, bool ReplicateDigest::*field) {
    std::vector<double> v;
    for (const auto& d : ds)
        if (d.ok) v.push_back(d.*field ? 1.0 : 0.0);
    return v;
}

void aggregate(const Scenario& sc, const SweepOut& sw, RunResult& res) {
    for (std::size_t b = 0; b < sc.bundles.size(); ++b) {
        const auto& name = sc.bundles[b].name;
        const auto& ds = sw.digests[b];
        auto add = [&](const std::string& metric, const std::vector<double>& v) {
            const auto m = moments(v);
            res.summary.push_back({name, metric, m.mean, m.se});
        };
        const auto p_true = collect(ds, &ReplicateDigest::p_true);
        const auto map_wrong = [&] {
            auto v = collect_bool(ds, &ReplicateDigest::map_correct);
            for (auto& x : v) x = 1 - x;
            return v;
        }();
        const auto med_wrong = [&] {
            auto v = collect_bool(ds, &ReplicateDigest::median_correct);
            for (auto& x : v) x = 1 - x;
            return v;
        }();
        const auto le_half = collect_bool(ds, &ReplicateDigest::p_true_le_half);
        add("p_true", p_true);
        add("p_spurious", collect(ds, &ReplicateDigest::p_spurious));
        add("p_nonspurious_small", collect(ds, &ReplicateDigest::p_nonspur_small));
        add("p_nonspurious_large", collect(ds, &ReplicateDigest::p_nonspur_large));
        add("map_wrong", map_wrong);
        add("median_wrong", med_wrong);
        add("p_true_le_half", le_half);
        add("identity_error", collect(ds, &ReplicateDigest::identity_error));

        std::vector<double> one_minus(p_true.size());
        for (std::size_t i = 0; i < p_true.size(); ++i) one_minus[i] = 2 * (1 - p_true[i]);
        const auto rhs = moments(one_minus);
        auto check = [&](const std::string& nm, const std::vector<double>& lhs_v, const Moments& r) {
            const auto l = moments(lhs_v);
            const double se = std::hypot(l.se, r.se);
            res.checks.push_back({name, nm, l.mean, r.mean, se, l.mean <= r.mean + 3 * se + 1e-12});
        };
        check("map_error", map_wrong, rhs);
        check("median_error", med_wrong, rhs);
        check("le_half_error", le_half, rhs);

        // Per-variable false-positive and power bounds from PIPs.
        const int p = sc.p;
        const double thr = sc.pip_threshold;
        std::vector<double> err_all;
        for (int j = 0; j < p; ++j) {
            const bool active = j < sc.pt && sc.coefficients[j] != 0;
            std::vector<double> pip_j, sel_j, miss_j, bound_j;
            for (const auto& d : ds)
                if (d.ok) {
                    pip_j.push_back(d.pip[j]);
                    sel_j.push_back(d.selected[j] ? 1.0 : 0.0);
                    miss_j.push_back(d.selected[j] ? 0.0 : 1.0);
                    bound_j.push_back(active ? (1 - d.pip[j]) / (1 - thr) : d.pip[j] / thr);
                }
            const auto mp = moments(pip_j);
            res.pips.push_back({name, j + 1, j < sc.pt ? sc.coefficients[j] : 0.0, mp.mean, mp.se});
            check(active ? "miss_x" + std::to_string(j + 1) : "false_positive_x" + std::to_string(j + 1),
                  active ? miss_j : sel_j, moments(bound_j));
        }
        std::vector<double> inactive;
        for (const auto& d : ds)
            if (d.ok) {
                double si = 0;
                int ni = 0;
                for (int j = 0; j < p; ++j)
                    if (!(j < sc.pt && sc.coefficients[j] != 0)) si += d.pip[j], ++ni;
                inactive.push_back(ni ? si / ni : 0.0);
            }
        add("mean_pip_inactive", inactive);
        int fails = 0;
        for (const auto& d : ds) fails += d.ok ? 0 : 1;
        res.summary.push_back({name, "failures", static_cast<double>(fails), 0.0});
    }
}

}  // namespace

const Metric* RunResult::find(const std::string& bundle, const std::string& metric) const {
    for (const auto& m : summary)
        if (m.bundle == bundle && m.name == metric) return &m;
    return nullptr;
}

RunResult run(const Scenario& sc) {
    sc.validate();
    RunResult res;
    res.scenario = sc.name;
    for (const auto& b : sc.bundles) res.bundles.push_back(b.name);

    std::vector<int> grid = sc.n_grid;
    if (grid.empty()) grid.push_back(sc.n);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        Scenario at = sc;
        at.n = grid[gi];
        if (sc.p_equals_n && !sc.n_grid.empty()) at.p = grid[gi];
        if (sc.pbar) at.pbar = std::min(*sc.pbar, at.p);
        at.validate();
        SweepOut sw = run_at(at);
        const int tasks = at.replicates * static_cast<int>(at.bundles.size());
        res.attempted += tasks;
        res.failures += sw.failures;
        for (auto& w : sw.warnings) res.warnings.push_back("n=" + std::to_string(at.n) + " " + w);
        if (sw.failures * 10 > tasks) {
            std::string first;
            for (const auto& v : sw.digests)
                for (const auto& d : v)
                    if (!d.ok && first.empty()) first = d.error;
            throw Error("simulation aborted: " + std::to_string(sw.failures) + " of " + std::to_string(tasks) +
                        " replicate tasks failed at n=" + std::to_string(at.n) + " (first error: " + first + ")");
        }
        if (!sc.n_grid.empty()) {
            RunResult part;
            aggregate(at, sw, part);
            for (const auto& m : part.summary) res.curves.push_back({at.n, m.bundle, m.name, m.mean, m.se});
        }
        if (gi + 1 == grid.size()) {
            aggregate(at, sw, res);
            res.digests = std::move(sw.digests);
        }
    }
    return res;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) {
        if (c == '"') o += '"';
        o += c;
    }
    return o + "\"";
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << std::setprecision(17);
    return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

std::vector<std::string> emit(const RunResult& result, EmitFormat format, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
    std::vector<std::string> written;
    if (format == EmitFormat::Csv) {
        {
            const fs::path path = fs::path(dir) / "summary.csv";
            auto out = open_out(path);
            out << "bundle,metric,mean,se\n";
            for (const auto& m : result.summary) out << csv_field(m.bundle) << ',' << m.name << ',' << m.mean << ',' << m.se << '\n';
            close_out(out, path);
            written.push_back(path.string());
        }
        {
            const fs::path path = fs::path(dir) / "pips.csv";
            auto out = open_out(path);
            out << "bundle,variable,theta_star,mean_pip,se\n";
            for (const auto& r : result.pips)
                out << csv_field(r.bundle) << ',' << r.variable << ',' << r.theta_star << ',' << r.mean_pip << ',' << r.se << '\n';
            close_out(out, path);
            written.push_back(path.string());
        }
        {
            const fs::path path = fs::path(dir) / "checks.csv";
            auto out = open_out(path);
            out << "bundle,check,lhs,rhs,se,holds\n";
            for (const auto& c : result.checks)
                out << csv_field(c.bundle) << ',' << c.name << ',' << c.lhs << ',' << c.rhs << ',' << c.se << ','
                    << (c.holds ? 1 : 0) << '\n';
            close_out(out, path);
            written.push_back(path.string());
        }
        if (!result.curves.empty()) {
            const fs::path path = fs::path(dir) / "curves.csv";
            auto out = open_out(path);
            out << "n,bundle,metric,mean,se\n";
            for (const auto& c : result.curves)
                out << c.n << ',' << csv_field(c.bundle) << ',' << c.metric << ',' << c.mean << ',' << c.se << '\n';
            close_out(out, path);
            written.push_back(path.string());
        }
    } else {
        const fs::path path = fs::path(dir) / "plotdata.csv";
        auto out = open_out(path);
        out << "x,series,value\n";
        for (const auto& r : result.pips)
            out << r.theta_star << ',' << csv_field("pip/" + r.bundle) << ',' << r.mean_pip << '\n';
        for (const auto& c : result.curves)
            if (c.metric == "p_true" || c.metric == "p_spurious" || c.metric == "p_nonspurious_small")
                out << c.n << ',' << csv_field(c.metric + "/" + c.bundle) << ',' << c.mean << '\n';
        close_out(out, path);
        written.push_back(path.string());
    }
    return written;
}

std::vector<Metric> read_summary_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "bundle,metric,mean,se") throw IoError(path + ": unexpected header");
    std::vector<Metric> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
                else if (c == '"') quoted = false;
                else cur += c;
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                f.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        f.push_back(cur);
        if (f.size() != 4) throw IoError(path + ": malformed row '" + line + "'");
        out.push_back({f[0], f[1], std::stod(f[2]), std::stod(f[3])});
    }
    return out;
}

Scenario orthogonal_study(int scenario_id, int replicates, std::uint64_t seed) {
    if (scenario_id < 1 || scenario_id > 4) throw ConfigError("orthogonal study: scenario must be 1..4");
    Scenario sc;
    sc.name = "orthogonal-" + std::to_string(scenario_id);
    sc.design = DesignKind::Orthogonal;
    const bool large = scenario_id >= 3;
    sc.p = large ? 500 : 100;
    sc.n = large ? 510 : 110;
    const std::vector<double> base{0.25, 0.5, 0.75, 1.0, 1.5};
    if (scenario_id % 2 == 1) {
        sc.coefficients = base;
    } else {
        for (double b : base)
            for (int k = 0; k < 4; ++k) sc.coefficients.push_back(b);
    }
    sc.pt = static_cast<int>(sc.coefficients.size());
    sc.phi = 1.0;
    sc.bundles = {Bundle::zellner_complexity(1.0), Bundle::zellner_betabinomial(), Bundle::pmom_betabinomial()};
    sc.replicates = replicates;
    sc.seed = seed;
    sc.engine = EngineKind::OrthoDP;
    return sc;
}

Scenario correlated_study(int scenario_id, int replicates, std::uint64_t seed) {
    if (scenario_id < 1 || scenario_id > 2) throw ConfigError("correlated study: scenario must be 1 or 2");
    Scenario sc;
    sc.name = "correlated-" + std::to_string(scenario_id);
    sc.design = DesignKind::Equicorrelated;
    sc.rho = 0.5;
    sc.n_grid = {100, 250, 500, 1000};
    sc.p_equals_n = true;
    sc.n = sc.n_grid.front();
    sc.p = sc.n;
    sc.pt = 10;
    sc.coefficients.assign(10, scenario_id == 1 ? 0.5 : 0.25);
    sc.bundles = {Bundle::zellner_complexity(1.0), Bundle::zellner_betabinomial(), Bundle::pmom_betabinomial()};
    sc.replicates = replicates;
    sc.seed = seed;
    sc.engine = EngineKind::Gibbs;
    sc.gibbs.sweeps = 10000;
    sc.gibbs.burn_in = 1000;
    return sc;
}

}  // namespace bvs
