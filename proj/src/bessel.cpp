#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "subou/errors.hpp"
#include "subou/numeric.hpp"
#include "subou/special_fn.hpp"

namespace subou {
namespace {

constexpr double kDebyeOrder = 40.0;

// Debye polynomials u_k(p), k = 0..5.
double debye_series(double nu, double p) {
    const double p2 = p * p;
    const double u1 = p * (3.0 - 5.0 * p2) / 24.0;
    const double u2 = p2 * (81.0 + p2 * (-462.0 + p2 * 385.0)) / 1152.0;
    const double u3 =
        p * p2 * (30375.0 + p2 * (-369603.0 + p2 * (765765.0 - p2 * 425425.0))) / 414720.0;
    const double u4 =
        p2 * p2 *
        (4465125.0 + p2 * (-94121676.0 + p2 * (349922430.0 + p2 * (-446185740.0 + p2 * 185910725.0)))) /
        39813120.0;
    const double u5 =
        p * p2 * p2 *
        (1519035525.0 +
         p2 * (-49286948607.0 +
               p2 * (284499769554.0 + p2 * (-614135872350.0 + p2 * (566098157625.0 - p2 * 188699385875.0))))) /
        6688604160.0;
    const double inv = 1.0 / nu;
    return 1.0 + inv * (u1 + inv * (u2 + inv * (u3 + inv * (u4 + inv * u5))));
}

// log I_nu(x) - x by the uniform asymptotic expansion for large order.
double log_scaled_debye(double nu, double x) {
    const double z = x / nu;
    const double s = std::hypot(1.0, z);
    const double p = 1.0 / s;
    // nu*eta - x with eta = s + log(z / (1 + s)); s - z = 1 / (s + z) avoids cancellation.
    const double expo = nu * (1.0 / (s + z) + std::log(z / (1.0 + s)));
    return expo - 0.5 * std::log(2.0 * std::numbers::pi * nu) - 0.25 * std::log1p(z * z) +
           std::log(debye_series(nu, p));
}

// Large-argument expansion; returns false when the asymptotic series does not
// reach double precision before its terms start growing.
bool log_scaled_hankel(double nu, double x, double& out) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    CompensatedSum sum(1.0);
    double prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * k * x);
        const double a = std::abs(term);
        if (a > prev) return false;
        sum += term;
        if (a < 1e-17) {
            out = std::log(sum.value()) - 0.5 * std::log(2.0 * std::numbers::pi * x);
            return true;
        }
        prev = a;
    }
    return false;
}

// Power series summed outward from its largest term, in log space.
double log_series(double nu, double x) {
    const double h = 0.5 * x;
    const double h2 = h * h;
    const double kstar = std::floor(0.5 * (-nu + std::sqrt(nu * nu + x * x)));
    const double k0 = std::max(0.0, kstar);
    const double log_peak = (2.0 * k0 + nu) * std::log(h) - std::lgamma(k0 + 1.0) - std::lgamma(k0 + nu + 1.0);
    CompensatedSum sum(1.0);
    double t = 1.0;
    for (double k = k0; ; k += 1.0) {
        t *= h2 / ((k + 1.0) * (k + 1.0 + nu));
        sum += t;
        if (t < 1e-18 * sum.value()) break;
    }
    t = 1.0;
    for (double k = k0; k > 0.0; k -= 1.0) {
        t *= k * (k + nu) / h2;
        sum += t;
        if (t < 1e-18 * sum.value()) break;
    }
    return log_peak + std::log(sum.value());
}

}  // namespace

double log_bessel_i(double nu, double x) {
    if (!(x >= 0.0) || !(nu >= 0.0)) throw DomainError("bessel_i: requires nu >= 0 and x >= 0");
    if (x == 0.0) return nu == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (std::isinf(x)) return x;
    if (nu >= kDebyeOrder) return log_scaled_debye(nu, x) + x;
    if (x >= 50.0 && x >= 3.0 * nu * nu) {
        double out = 0.0;
        if (log_scaled_hankel(nu, x, out)) return out + x;
    }
    return log_series(nu, x);
}

double bessel_i_scaled(double nu, double x) {
    if (!(x >= 0.0) || !(nu >= 0.0)) throw DomainError("bessel_i: requires nu >= 0 and x >= 0");
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (std::isinf(x)) return 0.0;
    if (nu >= kDebyeOrder) return std::exp(log_scaled_debye(nu, x));
    if (x >= 50.0 && x >= 3.0 * nu * nu) {
        double out = 0.0;
        if (log_scaled_hankel(nu, x, out)) return std::exp(out);
    }
    return std::exp(log_series(nu, x) - x);
}

double bessel_i(double nu, double x) {
    return std::exp(log_bessel_i(nu, x));
}

}  // namespace subou
