#include "bvs/numeric.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

namespace bvs {

double log_add_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::span<const double> v) {
    double m = kNegInf;
    for (double x : v) m = std::max(m, x);
    if (m == kNegInf || !std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

void LogAccumulator::add(double x) {
    if (x == kNegInf) return;
    if (x <= max_) {
        sum_ += std::exp(x - max_);
    } else {
        sum_ = sum_ * std::exp(max_ - x) + 1.0;
        max_ = x;
    }
}

double LogAccumulator::value() const {
    if (max_ == kNegInf) return kNegInf;
    return max_ + std::log(sum_);
}

double log_gamma(double x) { return boost::math::lgamma(x); }

double log_binom(double n, double k) {
    if (k < 0 || k > n || n < 0) return kNegInf;
    if (k == 0 || k == n) return 0.0;
    return log_gamma(n + 1) - log_gamma(k + 1) - log_gamma(n - k + 1);
}

std::vector<double> softmax(std::span<const double> logw, double* log_norm) {
    const double z = log_sum_exp(logw);
    std::vector<double> out(logw.size());
    for (std::size_t i = 0; i < logw.size(); ++i) out[i] = std::exp(logw[i] - z);
    if (log_norm) *log_norm = z;
    return out;
}

Minimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
    const int bits = std::max(8, static_cast<int>(std::ceil(-std::log2(rel_tol))));
    std::uintmax_t iters = 500;
    auto r = boost::math::tools::brent_find_minima(f, lo, hi, bits, iters);
    return {r.first, r.second};
}

namespace {
std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix(splitmix(splitmix(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

}  // namespace bvs
