#include "bvs/linear.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "bvs/error.hpp"
#include "bvs/numeric.hpp"

namespace bvs {

ModelIndex::ModelIndex(std::vector<int> indices) : idx_(std::move(indices)) {
    for (std::size_t i = 0; i < idx_.size(); ++i) {
        if (idx_[i] < 0) throw ContractError("model index: negative covariate position");
        if (i > 0 && idx_[i] <= idx_[i - 1])
            throw ContractError("model index: positions must be strictly increasing");
    }
}

ModelIndex ModelIndex::from_mask(std::uint64_t mask) {
    std::vector<int> v;
    for (int j = 0; j < 64; ++j)
        if (mask >> j & 1ULL) v.push_back(j);
    return ModelIndex(std::move(v));
}

ModelIndex ModelIndex::from_flags(const std::vector<char>& gamma) {
    std::vector<int> v;
    for (std::size_t j = 0; j < gamma.size(); ++j)
        if (gamma[j]) v.push_back(static_cast<int>(j));
    return ModelIndex(std::move(v));
}

bool ModelIndex::contains(int j) const { return std::binary_search(idx_.begin(), idx_.end(), j); }

bool ModelIndex::is_subset_of(const ModelIndex& other) const {
    return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end());
}

bool ModelIndex::is_strict_subset_of(const ModelIndex& other) const {
    return size() < other.size() && is_subset_of(other);
}

ModelIndex ModelIndex::with(int j) const {
    if (contains(j)) return *this;
    ModelIndex r;
    r.idx_ = idx_;
    r.idx_.insert(std::upper_bound(r.idx_.begin(), r.idx_.end(), j), j);
    return r;
}

ModelIndex ModelIndex::without(int j) const {
    ModelIndex r;
    r.idx_.reserve(idx_.size());
    for (int i : idx_)
        if (i != j) r.idx_.push_back(i);
    return r;
}

ModelIndex ModelIndex::minus(const ModelIndex& other) const {
    ModelIndex r;
    std::set_difference(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end(),
                        std::back_inserter(r.idx_));
    return r;
}

std::string ModelIndex::mask_hex() const {
    if (idx_.empty()) return "0x0";
    const int top = idx_.back();
    std::string digits((top / 4) + 1, '0');
    for (int j : idx_) {
        const int pos = static_cast<int>(digits.size()) - 1 - j / 4;
        int d = digits[pos] <= '9' ? digits[pos] - '0' : digits[pos] - 'a' + 10;
        d |= 1 << (j % 4);
        digits[pos] = static_cast<char>(d < 10 ? '0' + d : 'a' + d - 10);
    }
    return "0x" + digits;
}

std::string ModelIndex::label() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < idx_.size(); ++i) os << (i ? "," : "") << idx_[i] + 1;
    os << '}';
    return os.str();
}

std::size_t ModelIndexHash::operator()(const ModelIndex& m) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int j : m.indices()) {
        h ^= static_cast<std::size_t>(j) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h ^ static_cast<std::size_t>(m.size());
}

void Dataset::validate() const {
    if (y.size() < 1) throw ContractError("dataset: n must be >= 1");
    if (X.cols() < 1) throw ContractError("dataset: p must be >= 1");
    if (X.rows() != y.size()) throw ContractError("dataset: X rows differ from length of y");
    if (!y.allFinite() || !X.allFinite()) throw ContractError("dataset: non-finite values");
    if (truth) {
        if (truth->theta.size() != X.cols()) throw ContractError("dataset: theta* must have length p");
        if (!(truth->phi >= 0)) throw ContractError("dataset: phi* must be non-negative");
        if (truth->sigma) {
            const Matrix& S = *truth->sigma;
            if (S.rows() != y.size() || S.cols() != y.size())
                throw ContractError("dataset: Sigma* must be n x n");
            if (std::abs(S.trace() - y.size()) > 1e-6 * y.size())
                throw ContractError("dataset: Sigma* must have trace n");
            Eigen::LLT<Matrix> llt(S);
            if (llt.info() != Eigen::Success) throw ContractError("dataset: Sigma* is not positive definite");
        }
    }
}

Vector Dataset::true_mean() const {
    const Truth& t = require_truth();
    if (t.misspecified()) return (*t.W) * (*t.beta);
    return X * t.theta;
}

const Truth& Dataset::require_truth() const {
    if (!truth) throw ConfigError("operation requires simulation ground truth in the dataset");
    return *truth;
}

Eigen::LLT<Matrix> robust_cholesky(const Matrix& gram, const std::string& what, double* jitter_used) {
    const Eigen::Index k = gram.rows();
    if (jitter_used) *jitter_used = 0.0;
    if (k == 0) return Eigen::LLT<Matrix>(gram);
    const double scale = gram.trace() / static_cast<double>(k);
    if (!(scale > 0)) throw SingularError("singular Gram matrix for model " + what);
    auto min_pivot = [&](const Eigen::LLT<Matrix>& llt) {
        return llt.matrixLLT().diagonal().array().square().minCoeff();
    };
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() == Eigen::Success && min_pivot(llt) > 1e-12 * scale) return llt;
    const double jitter = 1e-10 * scale;
    Matrix g = gram;
    g.diagonal().array() += jitter;
    llt.compute(g);
    if (llt.info() == Eigen::Success && min_pivot(llt) > 100.0 * jitter) {
        if (jitter_used) *jitter_used = jitter;
        return llt;
    }
    throw SingularError("rank-deficient design for model " + what);
}

namespace {

Matrix columns(const Matrix& X, const ModelIndex& m) {
    Matrix out(X.rows(), m.size());
    for (int i = 0; i < m.size(); ++i) out.col(i) = X.col(m[i]);
    return out;
}

void check_columns(const ModelIndex& m, int p) {
    if (!m.empty() && m.indices().back() >= p)
        throw ContractError("model " + m.label() + " references a covariate beyond p");
}

ModelFit make_fit(const Dataset& data, const ModelIndex& model, Matrix gram, Vector xty) {
    ModelFit f;
    f.model = model;
    f.gram = std::move(gram);
    f.xty = std::move(xty);
    if (model.empty()) {
        f.theta_hat = Vector();
        f.rss = data.y.squaredNorm();
        return f;
    }
    f.chol = robust_cholesky(f.gram, model.label(), &f.jitter);
    f.theta_hat = f.chol.solve(f.xty);
    Vector r = data.y;
    for (int i = 0; i < model.size(); ++i) r -= f.theta_hat(i) * data.X.col(model[i]);
    f.rss = std::max(0.0, r.squaredNorm());
    return f;
}

// (I - H_m) v using the fit of m.
Vector residualize(const Dataset& data, const ModelIndex& m, const Vector& v) {
    if (m.empty()) return v;
    Matrix Xm = columns(data.X, m);
    Matrix G = Xm.transpose() * Xm;
    auto llt = robust_cholesky(G, m.label());
    return v - Xm * llt.solve(Xm.transpose() * v);
}

Matrix residualize(const Dataset& data, const ModelIndex& m, const Matrix& V) {
    if (m.empty()) return V;
    Matrix Xm = columns(data.X, m);
    Matrix G = Xm.transpose() * Xm;
    auto llt = robust_cholesky(G, m.label());
    return V - Xm * llt.solve(Xm.transpose() * V);
}

}  // namespace

ModelFit fit_least_squares(const Dataset& data, const ModelIndex& model) {
    check_columns(model, data.p());
    Matrix Xm = columns(data.X, model);
    return make_fit(data, model, Xm.transpose() * Xm, Xm.transpose() * data.y);
}

LinearCache::LinearCache(Dataset data, std::size_t capacity) : data_(std::move(data)), capacity_(capacity) {
    data_.validate();
    gram_ = data_.X.transpose() * data_.X;
    xty_ = data_.X.transpose() * data_.y;
    yty_ = data_.y.squaredNorm();
}

std::shared_ptr<const ModelFit> LinearCache::fit(const ModelIndex& model) const {
    {
        std::shared_lock lock(mutex_);
        auto it = memo_.find(model);
        if (it != memo_.end()) return it->second;
    }
    check_columns(model, p());
    const int k = model.size();
    Matrix g(k, k);
    Vector xy(k);
    for (int a = 0; a < k; ++a) {
        xy(a) = xty_(model[a]);
        for (int b = 0; b < k; ++b) g(a, b) = gram_(model[a], model[b]);
    }
    auto f = std::make_shared<const ModelFit>(make_fit(data_, model, std::move(g), std::move(xy)));
    std::unique_lock lock(mutex_);
    if (memo_.size() >= capacity_) memo_.clear();
    auto [it, inserted] = memo_.emplace(model, f);
    return it->second;
}

std::size_t LinearCache::cached() const {
    std::shared_lock lock(mutex_);
    return memo_.size();
}

void LinearCache::clear() const {
    std::unique_lock lock(mutex_);
    memo_.clear();
}

double f_statistic(const LinearCache& stats, const ModelIndex& m, const ModelIndex& t) {
    if (!t.is_strict_subset_of(m))
        throw ContractError("f_statistic: " + t.label() + " is not strictly nested in " + m.label());
    const int n = stats.n();
    if (m.size() >= n) throw ContractError("f_statistic: p_m >= n leaves no residual degrees of freedom");
    const double st = stats.rss(t), sm = stats.rss(m);
    if (sm <= 0) throw NumericError("f_statistic: zero residual sum of squares under " + m.label());
    const double num = std::max(0.0, st - sm) / (m.size() - t.size());
    return num / (sm / (n - m.size()));
}

Vector kl_optimal_coefficients(const Dataset& data, const ModelIndex& q) {
    check_columns(q, data.p());
    if (q.empty()) return Vector();
    Matrix Xq = columns(data.X, q);
    Matrix G = Xq.transpose() * Xq;
    auto llt = robust_cholesky(G, q.label());
    return llt.solve(Xq.transpose() * data.true_mean());
}

double noncentrality_nested(const Dataset& data, const ModelIndex& m, const ModelIndex& q) {
    if (!m.is_subset_of(q)) throw ContractError("noncentrality: " + m.label() + " is not nested in " + q.label());
    const Truth& t = data.require_truth();
    if (!(t.phi > 0)) throw ConfigError("noncentrality: phi* must be positive");
    Vector mu_q = Vector::Zero(data.n());
    if (!q.empty()) mu_q = columns(data.X, q) * kl_optimal_coefficients(data, q);
    const Vector r = residualize(data, m, mu_q);
    return r.squaredNorm() / t.phi;
}

SandwichEigs sandwich_eigs(const Dataset& data, const ModelIndex& m, const ModelIndex& q) {
    if (!m.is_strict_subset_of(q)) throw ContractError("sandwich_eigs: " + m.label() + " must be strictly nested in " + q.label());
    const Truth& t = data.require_truth();
    const ModelIndex s = m.minus(q);
    const Matrix Xs_t = residualize(data, m, columns(data.X, s));
    const Matrix G = Xs_t.transpose() * Xs_t;
    Matrix S = Matrix::Identity(data.n(), data.n());
    if (t.sigma) {
        Eigen::LLT<Matrix> chk(*t.sigma);
        if (chk.info() != Eigen::Success) throw ContractError("sandwich_eigs: Sigma* is not positive definite");
        S = *t.sigma;
    }
    const Matrix A = Xs_t.transpose() * S * Xs_t;
    // Eigenvalues of A G^{-1} equal those of the symmetric L^{-1} A L^{-T}, G = L L'.
    auto llt = robust_cholesky(G, s.label());
    const Matrix Linv_A = llt.matrixL().solve(A);
    const Matrix M = llt.matrixL().solve(Linv_A.transpose()).transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
    SandwichEigs out;
    out.omega_lo = es.eigenvalues().minCoeff();
    out.omega_hi = es.eigenvalues().maxCoeff();
    Vector theta_s(s.size());
    const Vector theta_q = kl_optimal_coefficients(data, q);
    for (int i = 0; i < s.size(); ++i) {
        const auto pos = std::lower_bound(q.indices().begin(), q.indices().end(), s[i]) - q.indices().begin();
        theta_s(i) = theta_q(pos);
    }
    out.lambda = theta_s.dot(G * theta_s) / t.phi;
    // W^{-1} = G A^{-1} G
    auto llt_a = robust_cholesky(A, s.label());
    const Vector Gt = G * theta_s;
    out.lambda_tilde = Gt.dot(llt_a.solve(Gt)) / t.phi;
    const double tol = 1e-10 * std::max(1.0, out.lambda);
    out.bracket_holds = out.lambda / out.omega_hi <= out.lambda_tilde + tol &&
                        out.lambda_tilde <= out.lambda / out.omega_lo + tol;
    return out;
}

std::pair<double, double> complement_eigs(const Dataset& data, const ModelIndex& q) {
    const Truth& t = data.require_truth();
    const int n = data.n();
    if (q.size() >= n) throw ContractError("complement_eigs: model leaves no residual space");
    Matrix T;
    if (q.empty()) {
        T = Matrix::Identity(n, n);
    } else {
        Eigen::HouseholderQR<Matrix> qr(columns(data.X, q));
        const Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
        T = Q.rightCols(n - q.size());
    }
    const Matrix S = t.sigma ? *t.sigma : Matrix::Identity(n, n);
    Eigen::SelfAdjointEigenSolver<Matrix> es(T.transpose() * S * T, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

Matrix prior_covariance(const Matrix& gram_k, VMode mode, const Matrix* explicit_v, const ModelIndex& model) {
    const Eigen::Index k = gram_k.rows();
    switch (mode) {
        case VMode::Zellner: {
            auto llt = robust_cholesky(gram_k, model.label());
            return llt.solve(Matrix::Identity(k, k));
        }
        case VMode::DiagGramInverse: {
            Matrix V = Matrix::Zero(k, k);
            for (Eigen::Index i = 0; i < k; ++i) {
                if (!(gram_k(i, i) > 0)) throw SingularError("zero column in model " + model.label());
                V(i, i) = 1.0 / gram_k(i, i);
            }
            return V;
        }
        case VMode::Explicit: {
            if (!explicit_v) throw ConfigError("explicit prior covariance requested but not supplied");
            Matrix V(k, k);
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) V(a, b) = (*explicit_v)(model[a], model[b]);
            return V;
        }
    }
    throw ConfigError("unknown prior covariance mode");
}

ShrinkageMoments shrinkage_moments(const Dataset& data, const ModelIndex& q, double tau, VMode mode,
                                   const Matrix* explicit_v) {
    if (!(tau > 0)) throw ContractError("shrinkage_moments: tau must be positive");
    if (q.empty()) throw ContractError("shrinkage_moments: empty model");
    const Truth& tr = data.require_truth();
    const Matrix Xq = columns(data.X, q);
    const Matrix G = Xq.transpose() * Xq;
    const Matrix V = prior_covariance(G, mode, explicit_v, q);
    const int k = q.size();
    Vector theta = kl_optimal_coefficients(data, q);

    auto lltV = robust_cholesky(V, q.label());
    const Matrix Vinv = lltV.solve(Matrix::Identity(k, k));
    const Matrix B = robust_cholesky(G + Vinv / tau, q.label()).solve(Matrix::Identity(k, k));
    ShrinkageMoments r;
    r.mu = B * G * theta;
    r.sigma = B * G * B;
    r.sigma_ii = r.sigma.diagonal();
    r.sigma_tilde_ii = robust_cholesky(G, q.label()).solve(Matrix::Identity(k, k)).diagonal();

    // Eigenvalues of V G via the symmetric form L' G L with V = L L'.
    const Matrix L = lltV.matrixL();
    Eigen::SelfAdjointEigenSolver<Matrix> es(L.transpose() * G * L, Eigen::EigenvaluesOnly);
    r.rho = es.eigenvalues().reverse();
    const double rho1 = r.rho(0), rhop = r.rho(k - 1);
    const double tn = theta.norm();
    const Matrix D = B * G - Matrix::Identity(k, k);
    Eigen::JacobiSVD<Matrix> svd(D);
    const double dnorm = svd.singularValues()(0);

    r.lambda_i.resize(k);
    r.delta_stated.resize(k);
    r.delta.resize(k);
    const double slack = 1e-10;
    const double t1 = tau * rho1, tp = tau * rhop;
    const double stated_var_lo = tp * tp / (tp * tp + 1);
    const double stated_var_hi = t1 * t1 / (t1 * t1 + 1);
    const double var_lo = std::pow(tp / (tp + 1), 2), var_hi = std::pow(t1 / (t1 + 1), 2);
    for (int i = 0; i < k; ++i) {
        const double th = theta(i);
        const double ratio = r.sigma_ii(i) / r.sigma_tilde_ii(i);
        r.lambda_i(i) = th * th / (r.sigma_tilde_ii(i) * tr.phi);
        const double ncp = r.mu(i) * r.mu(i) / (tr.phi * r.sigma_ii(i));
        r.stated_variance_ok &= ratio >= stated_var_lo * (1 - slack) && ratio <= stated_var_hi * (1 + slack);
        r.variance_ok &= ratio >= var_lo * (1 - slack) && ratio <= var_hi * (1 + slack);
        if (th == 0.0) {
            r.delta_stated(i) = kInf;
            r.delta(i) = kInf;
            continue;
        }
        const double mu_ratio = r.mu(i) * r.mu(i) / (th * th);
        const double ds = tn / ((t1 + 1) * std::abs(th));
        const double d = dnorm * tn / std::abs(th);
        r.delta_stated(i) = ds;
        r.delta(i) = d;
        r.stated_mean_ok &= mu_ratio >= (1 - 2 * ds) - slack && mu_ratio <= (1 + 2 * ds + ds * ds) + slack;
        r.mean_ok &= mu_ratio >= (1 - 2 * d) - slack && mu_ratio <= (1 + 2 * d + d * d) + slack;
        const double s_lo = r.lambda_i(i) * (1 - 2 * ds) * (1 + 1 / (t1 * t1));
        const double s_hi = r.lambda_i(i) * (1 + 2 * ds + ds * ds) * (1 + 1 / (tp * tp));
        r.stated_ncp_ok &= ncp >= s_lo * (1 + slack) - slack && ncp <= s_hi * (1 + slack);
        const double c_lo = r.lambda_i(i) * (1 - 2 * d) / var_hi;
        const double c_hi = r.lambda_i(i) * (1 + 2 * d + d * d) / var_lo;
        r.ncp_ok &= ncp >= c_lo - slack * std::abs(c_lo) - slack && ncp <= c_hi * (1 + slack);
    }
    return r;
}

}  // namespace bvs
