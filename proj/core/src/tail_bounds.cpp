#include "bvs/tail_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bvs/error.hpp"
#include "bvs/numeric.hpp"

namespace bvs {

namespace {

const double kTwoMinusSqrt3 = 2.0 - std::numbers::sqrt3;

TailResult from_log(double logv, double param = 0.0, double param2 = 0.0) {
    TailResult r;
    r.applicable = true;
    r.raw = std::exp(std::min(logv, 700.0));
    r.value = std::clamp(r.raw, 0.0, 1.0);
    r.param = param;
    r.param2 = param2;
    return r;
}

TailResult from_raw(double raw, double param = 0.0, double param2 = 0.0) {
    TailResult r;
    r.applicable = true;
    r.raw = raw;
    r.value = std::isnan(raw) ? 1.0 : std::clamp(raw, 0.0, 1.0);
    r.param = param;
    r.param2 = param2;
    return r;
}

TailResult vacuous(std::string reason) {
    TailResult r;
    r.reason = std::move(reason);
    return r;
}

bool positive(double x) { return x > 0 && std::isfinite(x); }

}  // namespace

TailResult chisq_right(double nu, double w) {
    if (!positive(nu) || !(w >= nu) || !std::isfinite(w)) return vacuous("needs w > nu");
    return from_log(0.5 * nu * (1.0 + std::log(w / nu)) - 0.5 * w);
}

TailResult chisq_left(double nu, double w) {
    if (!positive(nu) || !(w > 0) || !(w <= nu)) return vacuous("needs 0 < w < nu");
    return from_log(0.5 * nu * (1.0 + std::log(w / nu)) - 0.5 * w);
}

double ncchisq_mgf_log_bound(double nu, double lambda, double w, double s) {
    const double v = 1.0 - 2.0 * s;
    return lambda * s / v - s * w - 0.5 * nu * std::log(v);
}

double ncchisq_optimal_s(double nu, double lambda, double w) {
    // stationary point of the log bound: w v^2 - nu v - lambda = 0 with v = 1 - 2s
    const double v = (nu + std::sqrt(nu * nu + 4.0 * w * lambda)) / (2.0 * w);
    return 0.5 - 0.5 * v;
}

TailResult ncchisq_left(double nu, double lambda, double w, std::optional<double> s) {
    if (!positive(nu) || !(lambda >= 0) || !(w > 0) || !(w < lambda)) return vacuous("needs 0 < w < lambda");
    if (s) {
        if (!(*s < 0)) return vacuous("needs s < 0");
        return from_log(ncchisq_mgf_log_bound(nu, lambda, w, *s), *s);
    }
    const double sl = std::sqrt(lambda), sw = std::sqrt(w);
    const double log_b = -0.5 * (sl - sw) * (sl - sw) - 0.25 * nu * std::log(lambda / w);
    return from_log(log_b, 0.5 - 0.5 * std::sqrt(lambda / w));
}

TailResult ncchisq_right(double nu, double lambda, double w, NcRightVariant variant) {
    if (!positive(nu) || !(lambda >= 0) || !(w > lambda + nu) || !std::isfinite(w))
        return vacuous("needs w > lambda + nu");
    switch (variant) {
        case NcRightVariant::SqrtChoice: {
            if (!(lambda > 0)) return vacuous("square-root choice needs lambda > 0");
            const double r = 1.0 - std::sqrt(lambda / w);
            return from_log(-0.5 * w * r * r + 0.25 * nu * std::log(w / lambda), 0.5 - 0.5 * std::sqrt(lambda / w));
        }
        case NcRightVariant::NuChoice:
            return from_log(0.5 * nu * (1.0 + std::log(w / nu)) - 0.5 * lambda - 0.5 * w * (1.0 - lambda / nu),
                            0.5 - nu / (2.0 * w));
        case NcRightVariant::Optimal: {
            const double s = ncchisq_optimal_s(nu, lambda, w);
            return from_log(ncchisq_mgf_log_bound(nu, lambda, w, s), s);
        }
    }
    return vacuous("unknown variant");
}

namespace {

// Two-term right F bound at a given s; the non-central term uses its minimizing t.
TailResult f_right_at(double nu1, double nu2, double lambda, double w, double s) {
    if (!(s > (lambda + nu1) / w && s < 1.0)) return vacuous("needs (lambda + nu1)/w < s < 1");
    const double second = 0.5 * nu2 * (1.0 + std::log(s) - s);
    double first, t = 0.0;
    if (lambda == 0.0) {
        first = 0.5 * nu1 * (1.0 + std::log(w * s / nu1)) - 0.5 * w * s;
    } else {
        t = ncchisq_optimal_s(nu1, lambda, w * s);
        first = ncchisq_mgf_log_bound(nu1, lambda, w * s, t);
    }
    TailResult r = from_raw(std::exp(std::min(first, 700.0)) + std::exp(std::min(second, 700.0)), s, t);
    return r;
}

}  // namespace

TailResult f_right(double nu1, double nu2, double lambda, double w, FRightMode mode, std::optional<double> s) {
    if (!(nu1 >= 1) || !(nu2 >= 1) || !(lambda >= 0) || !(w > 0) || !std::isfinite(w))
        return vacuous("invalid parameters");
    if (!(w > lambda + nu1)) return vacuous("needs w > lambda + nu1");
    switch (mode) {
        case FRightMode::GivenS: {
            if (!s) throw ContractError("f_right: s required in given-s mode");
            return f_right_at(nu1, nu2, lambda, w, *s);
        }
        case FRightMode::Optimal: {
            const double lo = (lambda + nu1) / w, hi = 1.0;
            const double eps = 1e-12 * (hi - lo);
            auto f = [&](double x) {
                const TailResult r = f_right_at(nu1, nu2, lambda, w, x);
                return r.applicable ? std::log(r.raw) : kInf;
            };
            const Minimum m = minimize_scalar(f, lo + eps, hi - eps, 1e-8);
            return f_right_at(nu1, nu2, lambda, w, m.x);
        }
        case FRightMode::Closed: break;
    }
    if (!(nu2 > nu1 / kTwoMinusSqrt3)) return vacuous("closed form needs nu2 > nu1/(2 - sqrt 3)");
    if (!(w > (nu1 + lambda) / kTwoMinusSqrt3 && w < nu2)) return vacuous("closed form needs w in ((nu1+lambda)/(2-sqrt 3), nu2)");
    const double sc = 1.0 + (w / nu2) * (1.0 - std::sqrt(1.0 + 2.0 * nu2 / w));
    const double shrink = 1.0 - std::sqrt(2.0 * w / nu2);
    if (lambda == 0.0) {
        const double first = 0.5 * nu1 * (1.0 + std::log(w / nu1)) - 0.5 * w * shrink;
        return from_raw(std::exp(std::min(first, 700.0)) + std::exp(-0.5 * w), sc);
    }
    const double ws = w * shrink;
    if (ws > lambda) {
        const double r = 1.0 - std::sqrt(lambda / ws);
        const double first = 0.25 * nu1 * std::log(w / lambda) - 0.5 * ws * r * r;
        return from_raw(std::exp(std::min(first, 700.0)) + std::exp(-0.5 * w), sc);
    }
    // closed form undefined here: general bound at the same s with the square-root t
    const double wsc = w * sc;
    const double r = 1.0 - std::sqrt(lambda / wsc);
    const double first = 0.25 * nu1 * std::log(wsc / lambda) - 0.5 * wsc * r * r;
    TailResult out = from_raw(std::exp(std::min(first, 700.0)) + std::exp(0.5 * nu2 * (1.0 + std::log(sc) - sc)), sc,
                              0.5 - 0.5 * std::sqrt(lambda / wsc));
    out.reason = "closed form undefined; general bound at the closed-form s";
    return out;
}

namespace {

TailResult f_left_at(double nu1, double nu2, double lambda, double w, double s, std::optional<double> t) {
    if (!(s >= 1.0)) return vacuous("needs s >= 1");
    const double ws = w * s;
    double tt;
    if (t) tt = *t;
    else if (ws < lambda) tt = 0.5 - 0.5 * std::sqrt(lambda / ws);
    else tt = ncchisq_optimal_s(nu1, lambda, ws);
    if (!(tt < 0)) return vacuous("no admissible t < 0");
    const double first = ncchisq_mgf_log_bound(nu1, lambda, ws, tt);
    const double second = -0.5 * nu2 * (s - 1.0 - std::log(s));
    return from_raw(std::exp(std::min(first, 700.0)) + std::exp(second), s, tt);
}

}  // namespace

TailResult f_left(double nu1, double nu2, double lambda, double w, std::optional<double> s, std::optional<double> t) {
    if (!(nu1 >= 1) || !(nu2 >= 1) || !(lambda >= 0) || !(w > 0) || !std::isfinite(w))
        return vacuous("invalid parameters");
    if (s) return f_left_at(nu1, nu2, lambda, w, *s, t);
    const double hi = std::min(1e6, std::max(4.0, 4.0 * lambda / w));
    auto f = [&](double x) {
        const TailResult r = f_left_at(nu1, nu2, lambda, w, x, t);
        return r.applicable ? r.raw : 2.0;
    };
    const Minimum m = minimize_scalar(f, 1.0, hi, 1e-8);
    TailResult best = f_left_at(nu1, nu2, lambda, w, m.x, t);
    const TailResult at_one = f_left_at(nu1, nu2, lambda, w, 1.0, t);
    if (at_one.applicable && (!best.applicable || at_one.raw < best.raw)) best = at_one;
    return best;
}

double f_moment_constant(double nu1) {
    if (nu1 == 1.0) return std::exp(2.5) / (std::numbers::pi * std::numbers::sqrt2);
    if (nu1 == 2.0) return std::exp(2.0) / std::sqrt(2.0 * std::numbers::pi);
    if (nu1 > 2.0) return std::exp(2.0) / (2.0 * std::numbers::pi);
    throw ContractError("moment bound constant defined for nu1 = 1, 2 or > 2");
}

namespace {

double log_den(double nu1) { return nu1 > 2.0 ? 0.5 * (nu1 - 1.0) * std::log(0.5 * nu1 - 1.0) : 0.0; }

double f_moment_general_log(double nu1, double nu2, double w, double s) {
    const double h = 0.5 * nu2;
    return std::log(f_moment_constant(nu1)) + s * std::log(nu2 * (s + 0.5 * nu1 - 1.0) / (nu1 * w * (h - s - 1.0))) +
           0.5 * (nu1 - 1.0) * std::log(s + 0.5 * nu1 - 1.0) - log_den(nu1) +
           0.5 * (nu2 - 1.0) * std::log1p(-s / (h - 1.0));
}

}  // namespace

TailResult f_moment(double nu1, double nu2, double w, std::optional<double> s, FMomentForm form) {
    if (!(nu1 >= 1) || !(nu1 == 1.0 || nu1 == 2.0 || nu1 > 2.0)) return vacuous("needs nu1 = 1, 2 or > 2");
    if (!(nu2 > 4)) return vacuous("needs nu2 > 4");
    if (!(w > nu2 / (nu2 - 2.0)) || !std::isfinite(w)) return vacuous("needs w > nu2/(nu2 - 2)");
    const double smax = 0.5 * nu2 - 2.0;
    if (!(smax >= 1.0)) return vacuous("needs nu2 >= 6 for a non-empty s range");
    if (s) {
        if (!(*s >= 1.0 && *s <= smax)) return vacuous("needs s in [1, nu2/2 - 2]");
        return from_log(f_moment_general_log(nu1, nu2, w, *s), *s);
    }
    const double m = nu1 + nu2 - 6.0;
    const double sd = std::min((w - 1.0) * nu1 / 2.0 + 1.0, smax);
    if (form == FMomentForm::General) return from_log(f_moment_general_log(nu1, nu2, w, sd), sd);
    const double la = std::log(f_moment_constant(nu1));
    if (w <= m / nu1) {
        const double x = nu1 * (w - 1.0);
        // (1+X)^{x/2} <= exp{x(x+4)/(2(nu2-x-4))} and the e^{-w nu1/2} bound on the last factor
        const double log_b = la + x * (x + 4.0) / (2.0 * (nu2 - x - 4.0)) + std::log(nu2 / (nu2 - x - 4.0)) +
                             0.5 * (nu1 - 1.0) * std::log(0.5 * nu1 * w) - log_den(nu1) - 0.5 * w * nu1 +
                             0.5 * (nu1 - 1.0) + 1.5;
        return from_log(log_b, sd);
    }
    const double log_b = la + 1.0 + (0.5 * nu2 - 2.0) * std::log(m / (nu1 * w)) + 0.5 * (nu1 - 1.0) * std::log(0.5 * m) -
                         log_den(nu1) - 1.5 * std::log(0.5 * nu2 - 1.0);
    return from_log(log_b, sd);
}

double int_exp_tails(double b, double c, double l, double d, double g, double u_lo, double u_hi) {
    if (!(u_lo > 0 && u_lo < u_hi && u_hi < 1)) throw ContractError("int_exp_tails: needs 0 < u_lo < u_hi < 1");
    if (!(g >= 1.0 / u_lo - 1.0)) throw ContractError("int_exp_tails: needs g >= 1/u_lo - 1");
    if (!(b > 0 && c >= 0 && l > 0 && d > 0)) throw ContractError("int_exp_tails: needs b, l, d > 0 and c >= 0");
    const double ld = l * d;
    const double L = std::log(g / (1.0 / u_hi - 1.0));
    double log_v = std::log(b) - ld * std::log(g) + (c > 0 ? c * std::log(d * L) : 0.0);
    if (std::abs(ld - 1.0) <= 1e-12) {
        log_v += std::log(std::log(1.0 / u_lo));
    } else if (ld < 1.0) {
        log_v += (1.0 - ld) * std::log(u_hi / (1.0 - u_hi)) - std::log(1.0 - ld);
    } else {
        log_v += (ld - 1.0) * std::log(1.0 / u_lo - 1.0) - std::log(ld - 1.0);
    }
    return std::exp(log_v);
}

double int_poly_tails(double b, double c, double d, double g, double u_lo, double u_hi) {
    if (!(u_lo > 0 && u_lo < u_hi && u_hi < 1)) throw ContractError("int_poly_tails: needs 0 < u_lo < u_hi < 1");
    if (!(g >= 1.0 / u_lo - 1.0)) throw ContractError("int_poly_tails: needs g >= 1/u_lo - 1");
    if (!(b > 0 && c > 1 && d > 0)) throw ContractError("int_poly_tails: needs b, d > 0 and c > 1");
    const double L = std::log(g / (1.0 / u_lo - 1.0));
    if (!(L > 0)) return kInf;
    const double first = std::log(b) - c * std::log(d * L);
    const double second = std::log(b) - c * std::log(d) - std::log(c - 1.0) - (c - 1.0) * std::log(L);
    return std::exp(std::min(first, second));
}

TailResult chisq_tail_integral(double nu, double d, double g) {
    if (!positive(nu) || !positive(g)) return vacuous("invalid parameters");
    if (!(d > 1)) return vacuous("needs d > 1");
    const double lg = std::log(g);
    if (!(lg > nu / d)) return vacuous("needs g > e^{nu/d}");
    // 2 u_lo with u_lo = 1/(1 + g e^{-nu/d})
    const double first = 2.0 / (1.0 + std::exp(lg - nu / d));
    double second;
    if (std::abs(d - 2.0) <= 1e-12) {
        second = std::exp(-lg + std::log(std::log1p(std::exp(lg - nu / 2.0))) +
                          0.5 * nu * std::log(4.0 * std::numbers::e / nu * (lg - nu / 4.0)));
    } else if (d > 2.0) {
        const double inner = 2.0 * d * std::exp(2.0 / d) / nu * (lg - nu / (2.0 * d));
        second = std::exp(-lg + 0.5 * nu * std::log(inner) - std::log(d / 2.0 - 1.0));
    } else {
        // constant e^{2 - 1/(2d)}; a tighter e^{2 - 2/d} also holds
        const double inner = 2.0 * d * std::exp(2.0 - 1.0 / (2.0 * d)) / nu * (lg - nu / (2.0 * d));
        second = std::exp(-(d - 1.0) * lg + 0.5 * nu * std::log(inner) - std::log(1.0 - d / 2.0));
    }
    return from_raw(first + second, d);
}

TailResult f_tail_integral_exponential(double nu1, double nu2, double d, double g, std::optional<double> omega) {
    if (!(nu1 >= 1) || !(nu2 >= 1) || !positive(g)) return vacuous("invalid parameters");
    if (!(d > 1)) return vacuous("needs d > 1");
    if (!(nu2 > nu1 / kTwoMinusSqrt3)) return vacuous("needs nu2 > nu1/(2 - sqrt 3)");
    const double K = nu1 / (d * kTwoMinusSqrt3);
    const double lg = std::log(g);
    if (!(lg > K)) return vacuous("needs g > e^{nu1/(d(2-sqrt 3))}");
    const double u_lo = 1.0 / (1.0 + std::exp(lg - K));
    const double u_hi = 1.0 - u_lo;
    const double w_hi = d * (2.0 * lg - K);  // threshold at u_hi
    const double omega_min = std::sqrt(2.0 * w_hi / nu2);
    if (!(omega_min < 1.0)) return vacuous("needs 2 d log(g/(1/u_hi - 1)) < nu2");
    const double om = omega.value_or(omega_min);
    if (!(om >= omega_min && om < 1.0)) return vacuous("omega must lie in [omega_min, 1)");
    // integrand bound from the closed form keeping its polynomial factor: b e^{-(1-omega) w/2}
    const double b = std::exp(0.5 * nu1 * std::log(std::numbers::e * w_hi / nu1)) + 1.0;
    const double v = 2.0 * u_lo + int_exp_tails(b, 0.0, 0.5 * (1.0 - om), d, g, u_lo, u_hi);
    TailResult r = from_raw(v, om);
    r.reason = "exponential regime";
    return r;
}

TailResult f_tail_integral_polynomial(double nu1, double nu2, double d, double g, double gamma) {
    if (!(nu1 >= 1) || !(nu1 == 1.0 || nu1 == 2.0 || nu1 > 2.0) || !positive(g)) return vacuous("invalid parameters");
    if (!(d > 1)) return vacuous("needs d > 1");
    if (!(nu2 > 6)) return vacuous("needs nu2 > 6");
    if (!(gamma > 0 && gamma < 1)) return vacuous("needs gamma in (0, 1)");
    const double m = nu1 + nu2 - 6.0;
    const double lg = std::log(g);
    if (!(lg > m)) return vacuous("needs log g > nu1 + nu2 - 6");
    const double u_lo = 1.0 / (1.0 + std::exp(gamma * (lg - m)));
    const double u_hi = 1.0 - u_lo;
    // moment bound for x = nu1 F > m: b / x^c with c = nu2/2 - 2, keeping the nu1 in (2,4) factor
    const double c = 0.5 * nu2 - 2.0;
    const double log_b = std::log(f_moment_constant(nu1)) + 1.0 + c * std::log(m) + 0.5 * (nu1 - 1.0) * std::log(0.5 * m) -
                         log_den(nu1) - 1.5 * std::log(0.5 * nu2 - 1.0);
    const double v = 2.0 * u_lo + int_poly_tails(std::exp(log_b), c, d, g, u_lo, u_hi);
    TailResult r = from_raw(v, gamma);
    r.reason = "polynomial regime";
    return r;
}

TailResult f_tail_integral(double nu1, double nu2, double d, double g, std::optional<double> omega_exp, double gamma) {
    const TailResult e = f_tail_integral_exponential(nu1, nu2, d, g, omega_exp);
    const TailResult p = f_tail_integral_polynomial(nu1, nu2, d, g, gamma);
    if (e.applicable && p.applicable) {
        TailResult r = e.raw >= p.raw ? e : p;
        r.reason += " (both regimes apply; larger value kept)";
        return r;
    }
    if (e.applicable) return e;
    if (p.applicable) return p;
    return vacuous("no regime applies: " + e.reason + "; " + p.reason);
}

double expected_pp_bound(const std::function<double(double)>& tail, double u_lo, double u_hi, double tol) {
    if (!(u_lo >= 0 && u_lo <= u_hi && u_hi <= 1)) throw ContractError("expected_pp_bound: needs 0 <= u_lo <= u_hi <= 1");
    double integral = 0.0;
    if (u_hi > u_lo) {
        double err = 0.0;
        auto f = [&](double u) { return std::clamp(tail(u), 0.0, 1.0); };
        integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, u_lo, u_hi, 15, tol, &err);
        if (!(err <= std::max(1e-6, 1e3 * tol) * (1.0 + std::abs(integral))))
            throw QuadratureError("expected_pp_bound: quadrature did not converge", integral, err);
    }
    return std::clamp(u_lo + (1.0 - u_hi) + integral, 0.0, 1.0);
}

}  // namespace bvs
