#pragma once

#include <functional>
#include <optional>
#include <string>

namespace bvs {

struct TailResult {
    double value = 1.0;  // clamped to [0, 1]; 1 when not applicable
    double raw = 1.0;    // unclamped expression (1 when not applicable)
    bool applicable = false;
    double param = 0.0;  // free parameter used (s or t)
    double param2 = 0.0; // second free parameter (t in two-parameter bounds)
    std::string reason;
};

// Chernoff bounds; w is the threshold for W ~ chi^2_nu.
TailResult chisq_right(double nu, double w);
TailResult chisq_left(double nu, double w);

// MGF bound exp{lambda s/(1-2s) - s w}/(1-2s)^{nu/2} and its minimizing s.
double ncchisq_mgf_log_bound(double nu, double lambda, double w, double s);
double ncchisq_optimal_s(double nu, double lambda, double w);

// Left tail of chi^2_nu(lambda); default s = 1/2 - sqrt(lambda/w)/2.
TailResult ncchisq_left(double nu, double lambda, double w, std::optional<double> s = std::nullopt);

enum class NcRightVariant { SqrtChoice, NuChoice, Optimal };
TailResult ncchisq_right(double nu, double lambda, double w, NcRightVariant variant = NcRightVariant::NuChoice);

// Bounds on P(nu1 W > w) for W = U1 nu2/(U2 nu1), U1 ~ chi^2_{nu1}(lambda), U2 ~ chi^2_{nu2}.
enum class FRightMode { Closed, GivenS, Optimal };
TailResult f_right(double nu1, double nu2, double lambda, double w, FRightMode mode = FRightMode::Closed,
                   std::optional<double> s = std::nullopt);

// Bound on P(nu1 W < w); s >= 1, t < 0. Without s the bound is minimized over s.
TailResult f_left(double nu1, double nu2, double lambda, double w, std::optional<double> s = std::nullopt,
                  std::optional<double> t = std::nullopt);

// Moment bound on P(W > w) for W ~ F(nu1, nu2).
enum class FMomentForm { General, Simplified };
double f_moment_constant(double nu1);
TailResult f_moment(double nu1, double nu2, double w, std::optional<double> s = std::nullopt,
                    FMomentForm form = FMomentForm::General);

// Integral over (lo, hi) of P(W > d log(g/(1/u - 1))) when P(W > w) <= b w^c e^{-l w}.
double int_exp_tails(double b, double c, double l, double d, double g, double u_lo, double u_hi);
// Same for polynomial tails P(W > w) <= b / w^c; the smaller of the two valid bounds.
double int_poly_tails(double b, double c, double d, double g, double u_lo, double u_hi);

// Bounds on int_0^1 P(W > d log(g/(1/u-1))) du for W ~ chi^2_nu.
TailResult chisq_tail_integral(double nu, double d, double g);

// Same for nu1 F with F ~ F(nu1, nu2). omega_exp: exponential-regime parameter (default: smallest valid),
// gamma: polynomial-regime parameter.
TailResult f_tail_integral(double nu1, double nu2, double d, double g, std::optional<double> omega_exp = std::nullopt,
                           double gamma = 0.95);
TailResult f_tail_integral_exponential(double nu1, double nu2, double d, double g,
                                       std::optional<double> omega = std::nullopt);
TailResult f_tail_integral_polynomial(double nu1, double nu2, double d, double g, double gamma = 0.95);

// u_lo + (1 - u_hi) + int_{u_lo}^{u_hi} tail(u) du, clamped to [0, 1].
double expected_pp_bound(const std::function<double(double)>& tail, double u_lo, double u_hi, double tol = 1e-9);

}  // namespace bvs
