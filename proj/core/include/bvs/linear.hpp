#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace bvs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Subset of covariates. Positions are 0-based in the C++ API.
class ModelIndex {
public:
    ModelIndex() = default;
    explicit ModelIndex(std::vector<int> indices);
    static ModelIndex from_mask(std::uint64_t mask);
    static ModelIndex from_flags(const std::vector<char>& gamma);

    const std::vector<int>& indices() const { return idx_; }
    int size() const { return static_cast<int>(idx_.size()); }
    bool empty() const { return idx_.empty(); }
    int operator[](int i) const { return idx_[i]; }

    bool contains(int j) const;
    bool is_subset_of(const ModelIndex& other) const;
    bool is_strict_subset_of(const ModelIndex& other) const;
    ModelIndex with(int j) const;
    ModelIndex without(int j) const;
    // Columns of other that are not in this model.
    ModelIndex minus(const ModelIndex& other) const;

    // Hex bitmask string ("0x..."), valid for any p.
    std::string mask_hex() const;
    // Human-readable 1-based listing, e.g. "{1,3}".
    std::string label() const;

    friend bool operator==(const ModelIndex&, const ModelIndex&) = default;
    friend auto operator<=>(const ModelIndex& a, const ModelIndex& b) = default;

private:
    std::vector<int> idx_;
};

struct ModelIndexHash {
    std::size_t operator()(const ModelIndex& m) const noexcept;
};

// Simulation ground truth. theta has length p (zeros outside the true model).
struct Truth {
    ModelIndex model;
    Vector theta;
    double phi = 1.0;
    std::optional<Matrix> sigma;  // n x n error covariance, trace n; identity when absent
    std::optional<Matrix> W;      // misspecified mean W * beta
    std::optional<Vector> beta;

    bool misspecified() const { return W.has_value() && beta.has_value(); }
};

struct Dataset {
    Vector y;
    Matrix X;
    std::optional<Truth> truth;
    std::vector<std::string> names;

    int n() const { return static_cast<int>(y.size()); }
    int p() const { return static_cast<int>(X.cols()); }
    void validate() const;
    // E(y) under the truth: W beta when misspecified, X theta otherwise.
    Vector true_mean() const;
    const Truth& require_truth() const;
};

struct ModelFit {
    ModelIndex model;
    Matrix gram;  // X_k'X_k
    Vector xty;   // X_k'y
    Vector theta_hat;
    double rss = 0.0;  // s_k
    double jitter = 0.0;
    Eigen::LLT<Matrix> chol;
};

// Cholesky of a Gram matrix with the near-singularity policy shared by all solves.
Eigen::LLT<Matrix> robust_cholesky(const Matrix& gram, const std::string& what, double* jitter_used = nullptr);

ModelFit fit_least_squares(const Dataset& data, const ModelIndex& model);

// Per-dataset sufficient statistics with a synchronized per-model memo.
class LinearCache {
public:
    explicit LinearCache(Dataset data, std::size_t capacity = 1u << 20);

    const Dataset& data() const { return data_; }
    int n() const { return data_.n(); }
    int p() const { return data_.p(); }
    double yty() const { return yty_; }
    const Matrix& gram() const { return gram_; }
    const Vector& xty() const { return xty_; }

    std::shared_ptr<const ModelFit> fit(const ModelIndex& model) const;
    double rss(const ModelIndex& model) const { return fit(model)->rss; }
    std::size_t cached() const;
    void clear() const;

private:
    Dataset data_;
    Matrix gram_;
    Vector xty_;
    double yty_ = 0.0;
    std::size_t capacity_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<ModelIndex, std::shared_ptr<const ModelFit>, ModelIndexHash> memo_;
};

// F_mt = [(s_t - s_m)/(p_m - p_t)] / [s_m/(n - p_m)] for t strictly nested in m.
double f_statistic(const LinearCache& stats, const ModelIndex& m, const ModelIndex& t);

// Non-centrality of the nested comparison m within q: mu_q'(I - H_m) mu_q / phi*,
// mu_q the projection of the true mean onto the columns of q.
double noncentrality_nested(const Dataset& data, const ModelIndex& m, const ModelIndex& q);

// Projection of the true mean onto span(X_q) expressed as coefficients (KL-optimal theta_q*).
Vector kl_optimal_coefficients(const Dataset& data, const ModelIndex& q);

struct SandwichEigs {
    double omega_lo = 1.0;
    double omega_hi = 1.0;
    double lambda = 0.0;        // lambda_qm
    double lambda_tilde = 0.0;  // theta_s' W^{-1} theta_s / phi
    bool bracket_holds = true;  // lambda/omega_hi <= lambda_tilde <= lambda/omega_lo
};

// Eigenvalues of Xs~' Sigma Xs~ (Xs~'Xs~)^{-1} with Xs~ = (I - H_m) X_s.
SandwichEigs sandwich_eigs(const Dataset& data, const ModelIndex& m, const ModelIndex& q);

// Same eigenvalue pair for the residual space of q, using the orthonormal complement of X_q
// as the single representative completion matrix.
std::pair<double, double> complement_eigs(const Dataset& data, const ModelIndex& q);

enum class VMode { Zellner, DiagGramInverse, Explicit };

// Prior covariance V_k for the given mode; explicit V is a p x p matrix restricted to the model.
Matrix prior_covariance(const Matrix& gram_k, VMode mode, const Matrix* explicit_v, const ModelIndex& model);

struct ShrinkageMoments {
    Vector mu;                // (G + V^{-1}/tau)^{-1} G theta*
    Matrix sigma;             // (G + V^{-1}/tau)^{-1} G (G + V^{-1}/tau)^{-1}
    Vector sigma_ii;
    Vector sigma_tilde_ii;    // diag of G^{-1}
    Vector rho;               // eigenvalues of V G, descending
    Vector lambda_i;          // theta_i*^2 / (sigma_tilde_ii phi*)
    // Brackets in their original form.
    Vector delta_stated;      // ||theta*|| / ((tau rho_1 + 1)|theta_i|)
    bool stated_variance_ok = true;
    bool stated_mean_ok = true;
    bool stated_ncp_ok = true;
    // Brackets re-derived with the squared eigenvalue ratio and the operator norm of the bias map.
    Vector delta;             // ||D||_2 ||theta*|| / |theta_i|
    bool variance_ok = true;
    bool mean_ok = true;
    bool ncp_ok = true;
};

ShrinkageMoments shrinkage_moments(const Dataset& data, const ModelIndex& q, double tau, VMode mode,
                                   const Matrix* explicit_v = nullptr);

}  // namespace bvs
