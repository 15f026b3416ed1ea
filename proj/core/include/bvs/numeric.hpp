#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace bvs {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b);
double log_sum_exp(std::span<const double> v);

// Streaming log-sum-exp accumulator; order of add() calls fixes the result bit pattern.
class LogAccumulator {
public:
    void add(double x);
    double value() const;

private:
    double max_ = kNegInf;
    double sum_ = 0.0;
};

// log C(n, k) via log-gamma; -inf outside 0 <= k <= n.
double log_binom(double n, double k);
double log_gamma(double x);

// Softmax of log weights; returns probabilities and writes the log normalizer.
std::vector<double> softmax(std::span<const double> logw, double* log_norm = nullptr);

struct Minimum {
    double x;
    double f;
};

// One-dimensional minimization on [lo, hi] (Brent's golden-section/parabolic search).
Minimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi, double rel_tol = 1e-8);

// Counter-based seed derivation: independent substreams for (seed, a, b).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace bvs
