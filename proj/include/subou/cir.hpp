#pragma once

#include <span>
#include <vector>

#include "subou/subordinator.hpp"

namespace subou {

// CIR activity rate Z plus a deterministic piecewise-constant activity a(t);
// the clock is T_t = int_0^t (a(u) + Z_u) du.
struct CirActivity {
    double kappa = 1.0;
    double theta = 1.0;
    double sigma = 0.5;
    double z0 = 1.0;
    // a(t) = a_levels[i] on [a_breaks[i], a_breaks[i+1]), last level extends to infinity.
    // a_breaks[0] must be 0. Empty means a == 0.
    std::vector<double> a_breaks;
    std::vector<double> a_levels;

    // Feller index d = 2 theta kappa / sigma^2.
    [[nodiscard]] double feller_d() const noexcept { return 2.0 * theta * kappa / (sigma * sigma); }
    [[nodiscard]] double a_at(double t) const noexcept;
    // Throws DomainError (Feller violation, negative levels, bad breakpoints).
    void validate() const;

    static CirActivity constant_activity(double kappa, double theta, double sigma, double z0, double a = 0.0);
};

double activity_integral(const CirActivity& act, double s, double t);

double cir_density(const CirActivity& act, double t, double z0, double z);
double log_cir_density(const CirActivity& act, double t, double z0, double z);
double cir_mean(const CirActivity& act, double t, double z0) noexcept;

// L(t, lambda | z0) = C(t, lambda) exp(-B(t, lambda) z0).
struct CirLaplaceCoeffs {
    double log_c = 0.0;
    double b = 0.0;
};
CirLaplaceCoeffs cir_laplace_coeffs(const CirActivity& act, double t, double lambda);
double cir_laplace(const CirActivity& act, double t, double lambda, double z0);
inline double log_cir_laplace(const CirActivity& act, double t, double lambda, double z0) {
    const auto c = cir_laplace_coeffs(act, t, lambda);
    return c.log_c - c.b * z0;
}
inline double cir_laplace(const CirActivity& act, double t, double lambda) { return cir_laplace(act, t, lambda, act.z0); }

// E[exp(-lambda int_0^t Z du) | Z_0 = z0, Z_t = zt] for many lambda at one
// (t, z0, zt); the lambda-free Bessel factor is computed once.
class CirBridgeTransform {
public:
    CirBridgeTransform(const CirActivity& act, double t, double z0, double zt);
    [[nodiscard]] double log_value(double lambda) const;

private:
    double kappa_, s2_, t_, q_, r_, zsum_, d_;
    double log_k_, log_one_m_k_, coth_k_, log_ik_;
};

// E[exp(-lambda int_0^t Z du) | Z_0 = z0, Z_t = zt], in log form and plain.
double log_cir_laplace_conditional(const CirActivity& act, double t, double lambda, double z0, double zt);
double cir_laplace_conditional(const CirActivity& act, double t, double lambda, double z0, double zt);

// Levels zlo < zhi with P(Z_t < zlo) <= tail and P(Z_t > zhi) <= tail, from
// Chernoff bounds on the noncentral chi-square law of Z_t.
struct CirWindow {
    double lo = 0.0;
    double hi = 0.0;
};
CirWindow cir_window(const CirActivity& act, double t, double z0, double tail);

// Exact draw of Z_{t+dt} given Z_t = z.
double sample_cir_transition(const CirActivity& act, double dt, double z, Rng& rng);
// Z at each grid point, Z_0 = act.z0 at time 0; grid nondecreasing, grid[0] >= 0.
std::vector<double> sample_cir_path(const CirActivity& act, std::span<const double> grid, Rng& rng);

}  // namespace subou
