#include "subou/cir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "subou/errors.hpp"
#include "subou/special_fn.hpp"

namespace subou {

CirActivity CirActivity::constant_activity(double kappa, double theta, double sigma, double z0, double a) {
    CirActivity act;
    act.kappa = kappa;
    act.theta = theta;
    act.sigma = sigma;
    act.z0 = z0;
    if (a != 0.0) {
        act.a_breaks = {0.0};
        act.a_levels = {a};
    }
    return act;
}

double CirActivity::a_at(double t) const noexcept {
    if (a_levels.empty()) return 0.0;
    const auto it = std::upper_bound(a_breaks.begin(), a_breaks.end(), t);
    const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - a_breaks.begin() - 1));
    return a_levels[idx];
}

void CirActivity::validate() const {
    if (!(kappa > 0.0) || !(theta > 0.0) || !(sigma > 0.0) || !(z0 > 0.0))
        throw DomainError("CIR parameters kappa, theta, sigma, z0 must be > 0");
    if (feller_d() < 1.0 - 1e-12)
        throw DomainError("CIR parameters violate the Feller condition 2 theta kappa / sigma^2 >= 1 (d = " +
                          std::to_string(feller_d()) + ")");
    if (a_breaks.size() != a_levels.size()) throw DomainError("activity breakpoints and levels differ in length");
    if (!a_breaks.empty() && a_breaks.front() != 0.0) throw DomainError("first activity breakpoint must be 0");
    for (std::size_t i = 1; i < a_breaks.size(); ++i)
        if (!(a_breaks[i] > a_breaks[i - 1])) throw DomainError("activity breakpoints must be increasing");
    for (double a : a_levels)
        if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("activity levels must be >= 0");
}

double activity_integral(const CirActivity& act, double s, double t) {
    if (s > t) throw DomainError("activity_integral: s must be <= t");
    if (act.a_levels.empty() || s == t) return 0.0;
    double total = 0.0;
    const std::size_t n = act.a_levels.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = std::max(s, act.a_breaks[i]);
        const double hi = std::min(t, i + 1 < n ? act.a_breaks[i + 1] : std::numeric_limits<double>::infinity());
        if (hi > lo) total += act.a_levels[i] * (hi - lo);
    }
    return total;
}

double cir_mean(const CirActivity& act, double t, double z0) noexcept {
    return act.theta + (z0 - act.theta) * std::exp(-act.kappa * t);
}

double log_cir_density(const CirActivity& act, double t, double z0, double z) {
    if (!(t > 0.0) || !(z0 > 0.0) || !(z > 0.0)) throw DomainError("cir_density: t, z0, z must be > 0");
    const double one_m = -std::expm1(-act.kappa * t);
    const double c = 2.0 * act.kappa / (act.sigma * act.sigma * one_m);
    const double u = z0 * std::exp(-act.kappa * t);
    const double q = act.feller_d() - 1.0;
    const double x = 2.0 * c * std::sqrt(u * z);
    const double ds = std::sqrt(z) - std::sqrt(u);
    // exp(-c(u+z)) I_q(x) = exp(-c (sqrt z - sqrt u)^2) e^{-x} I_q(x)
    return std::log(c) - c * ds * ds + 0.5 * q * std::log(z / u) + (log_bessel_i(q, x) - x);
}

double cir_density(const CirActivity& act, double t, double z0, double z) {
    return std::exp(log_cir_density(act, t, z0, z));
}

CirLaplaceCoeffs cir_laplace_coeffs(const CirActivity& act, double t, double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("cir_laplace: lambda must be >= 0");
    if (!(t >= 0.0)) throw DomainError("cir_laplace: t must be >= 0");
    if (t == 0.0 || lambda == 0.0) return {};
    const double k = act.kappa;
    const double s2 = act.sigma * act.sigma;
    const double g = std::sqrt(k * k + 2.0 * s2 * lambda);
    const double g_minus_k = 2.0 * s2 * lambda / (g + k);
    const double one_m = -std::expm1(-g * t);
    const double den = (g + k) * one_m + 2.0 * g * std::exp(-g * t);
    CirLaplaceCoeffs out;
    out.log_c = act.feller_d() * (std::log(2.0 * g) - 0.5 * g_minus_k * t - std::log(den));
    out.b = 2.0 * lambda * one_m / den;
    return out;
}

double cir_laplace(const CirActivity& act, double t, double lambda, double z0) {
    const auto c = cir_laplace_coeffs(act, t, lambda);
    return std::exp(c.log_c - c.b * z0);
}

namespace {

// 2 a r / (sigma^2 sinh(a t / 2)) in log form, stable for large a t.
double log_bessel_arg(double a, double t, double r, double s2) {
    const double h = 0.5 * a * t;
    const double log_sinh = h + std::log(-std::expm1(-2.0 * h)) - std::numbers::ln2;
    return std::log(2.0 * a * r / s2) - log_sinh;
}

}  // namespace

CirBridgeTransform::CirBridgeTransform(const CirActivity& act, double t, double z0, double zt)
    : kappa_(act.kappa), s2_(act.sigma * act.sigma), t_(t), q_(act.feller_d() - 1.0), r_(std::sqrt(z0 * zt)),
      zsum_(z0 + zt), d_(act.feller_d()) {
    if (!(t > 0.0) || !(z0 > 0.0) || !(zt > 0.0)) throw DomainError("cir_laplace_conditional: t, z0, zt must be > 0");
    log_k_ = std::log(kappa_);
    log_one_m_k_ = std::log(-std::expm1(-kappa_ * t));
    coth_k_ = kappa_ / std::tanh(0.5 * kappa_ * t);
    log_ik_ = log_bessel_i(q_, std::exp(log_bessel_arg(kappa_, t, r_, s2_)));
}

double CirBridgeTransform::log_value(double lambda) const {
    if (!(lambda >= 0.0)) throw DomainError("cir_laplace_conditional: lambda must be >= 0");
    if (lambda == 0.0) return 0.0;
    const double g = std::sqrt(kappa_ * kappa_ + 2.0 * s2_ * lambda);
    const double g_minus_k = 2.0 * s2_ * lambda / (g + kappa_);
    const double lxg = log_bessel_arg(g, t_, r_, s2_);
    // Underflowed Bessel argument: I_q(x) ~ (x/2)^q / Gamma(q+1).
    const double log_ig = (lxg < -700.0 && q_ > 0.0) ? q_ * (lxg - std::numbers::ln2) - std::lgamma(q_ + 1.0)
                                                     : log_bessel_i(q_, std::exp(lxg));
    const double v = std::log(g) - log_k_ - 0.5 * g_minus_k * t_ + log_one_m_k_ - std::log(-std::expm1(-g * t_)) +
                     zsum_ / s2_ * (coth_k_ - g / std::tanh(0.5 * g * t_)) + log_ig - log_ik_;
    if (std::isnan(v))
        throw OverflowError("conditional CIR Laplace transform unscalable at t=" + std::to_string(t_) +
                            " lambda=" + std::to_string(lambda));
    return v;
}

double log_cir_laplace_conditional(const CirActivity& act, double t, double lambda, double z0, double zt) {
    if (!(lambda >= 0.0)) throw DomainError("cir_laplace_conditional: lambda must be >= 0");
    return CirBridgeTransform(act, t, z0, zt).log_value(lambda);
}

double cir_laplace_conditional(const CirActivity& act, double t, double lambda, double z0, double zt) {
    return std::exp(log_cir_laplace_conditional(act, t, lambda, z0, zt));
}

namespace {

// log E[e^{s X}] for X ~ noncentral chi-square(k, nc), s < 1/2.
double ncx2_log_mgf(double k, double nc, double s) {
    return nc * s / (1.0 - 2.0 * s) - 0.5 * k * std::log1p(-2.0 * s);
}

// Minimize a unimodal function on (lo, hi) by golden-section search.
template <class F>
double golden_min(F f, double lo, double hi) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 200 && (b - a) > 1e-12 * (1.0 + std::abs(a)); ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return std::min(fc, fd);
}

}  // namespace

CirWindow cir_window(const CirActivity& act, double t, double z0, double tail) {
    if (!(t > 0.0) || !(tail > 0.0) || !(tail < 1.0)) throw DomainError("cir_window: need t > 0 and 0 < tail < 1");
    // Z_t = X / (2c), X ~ chi'^2(2d, 2 c u).
    const double one_m = -std::expm1(-act.kappa * t);
    const double c = 2.0 * act.kappa / (act.sigma * act.sigma * one_m);
    const double k = 2.0 * act.feller_d();
    const double nc = 2.0 * c * z0 * std::exp(-act.kappa * t);
    const double log_tail = std::log(tail);
    const double mean = k + nc;
    // log P(X >= a) <= min_{0<s<1/2} [-s a + log M(s)]
    auto log_upper = [&](double a) {
        return golden_min([&](double s) { return -s * a + ncx2_log_mgf(k, nc, s); }, 0.0, 0.5 - 1e-12);
    };
    // log P(X <= a) <= min_{s>0} [s a + log M(-s)]
    auto log_lower = [&](double a) {
        return golden_min([&](double s) { return s * a + ncx2_log_mgf(k, nc, -s); }, 0.0, 1e6);
    };
    double hi = 2.0 * mean + 10.0;
    while (log_upper(hi) > log_tail) hi *= 2.0;
    double lo_b = mean;
    for (int i = 0; i < 200 && hi - lo_b > 1e-10 * hi; ++i) {
        const double mid = 0.5 * (lo_b + hi);
        (log_upper(mid) > log_tail ? lo_b : hi) = mid;
    }
    double lo = 0.0;
    double up = mean;
    if (log_lower(0.0) <= log_tail) {
        for (int i = 0; i < 200 && up - lo > 1e-10 * up; ++i) {
            const double mid = 0.5 * (lo + up);
            (log_lower(mid) > log_tail ? up : lo) = mid;
        }
    }
    return {lo / (2.0 * c), hi / (2.0 * c)};
}

double sample_cir_transition(const CirActivity& act, double dt, double z, Rng& rng) {
    if (dt <= 0.0) return z;
    const double one_m = -std::expm1(-act.kappa * dt);
    const double c = 2.0 * act.kappa / (act.sigma * act.sigma * one_m);
    const double nc = 2.0 * c * z * std::exp(-act.kappa * dt);
    std::poisson_distribution<long long> pois(0.5 * nc);
    const long long n = nc > 0.0 ? pois(rng) : 0;
    std::gamma_distribution<double> chi(act.feller_d() + static_cast<double>(n), 2.0);
    return chi(rng) / (2.0 * c);
}

std::vector<double> sample_cir_path(const CirActivity& act, std::span<const double> grid, Rng& rng) {
    std::vector<double> out(grid.size());
    double t = 0.0;
    double z = act.z0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < t) throw DomainError("sample_cir_path: grid must be nondecreasing and start at >= 0");
        z = sample_cir_transition(act, grid[i] - t, z, rng);
        t = grid[i];
        out[i] = z;
    }
    return out;
}

}  // namespace subou
