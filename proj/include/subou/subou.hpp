#pragma once

#include <functional>
#include <span>
#include <vector>

#include "subou/quadrature.hpp"
#include "subou/subordinator.hpp"

namespace subou {

struct GeneratingTuple {
    double kappa = 1.0;
    double theta = 0.0;
    double sigma = 0.5;
    SubordinatorSpec sub;

    void validate() const;
    // Standardized coordinate sqrt(kappa)/sigma (x - theta).
    [[nodiscard]] double z(double x) const noexcept;
    // phi(kappa n), the n-th eigenvalue of the subordinate generator.
    [[nodiscard]] double eigenvalue(int n) const;
};

struct ExpansionConfig {
    int n_max = 50000;   // hard cap on the outer truncation order
    double tol = 1e-10;  // absolute tolerance certified by the truncation bound
    bool adaptive = true;  // false: exactly n_max outer terms, no convergence check
    QuadratureSettings quad;
    // Stochastic-volatility z-integral.
    int sv_nodes = 51;
    int sv_max_nodes = 3201;
    double sv_rel_tol = 1e-7;
    double sv_tail_prob = 1e-9;
    // Shortest option expiry accepted by the pricers (years).
    double min_expiry = 10.0 / 365.0;

    void validate() const;
};

double stationary_density(const GeneratingTuple& tuple, double x);
double eigenfunction(double x, int n, const GeneratingTuple& tuple);
double ou_density(const GeneratingTuple& tuple, double t, double x, double y);

// State-dependent Levy density pi(x, y) of the subordinate process.
double subou_levy_density(const GeneratingTuple& tuple, double x, double y, const QuadratureSettings& quad = {});
// Small-jump asymptote of pi(x, y); tempered-stable view with p > 0 only.
double levy_asymptote(const GeneratingTuple& tuple, double y);
// Tail masses Pi(x, (y, inf)) and Pi(x, (-inf, -y)) for y > 0.
double levy_tail_up(const GeneratingTuple& tuple, double x, double y, const QuadratureSettings& quad = {});
double levy_tail_down(const GeneratingTuple& tuple, double x, double y, const QuadratureSettings& quad = {});

// Decreasing weight sequence w_0, w_1, ... truncated so that
// scale * sum_{n >= order} w_n <= tol.
struct WeightTable {
    std::vector<double> w;  // w_0 .. w_{order-1}
    double tail = 0.0;      // upper bound on sum_{n >= order} w_n
    bool certified = true;  // false when the cap was reached before the bound met tol
    [[nodiscard]] int order() const noexcept { return static_cast<int>(w.size()); }
};

// Upper bound on sum_{n >= from} w(n) for nonincreasing w. `geometric_rate` r > 0
// asserts w(n) <= exp(-r n) and enables the closed form exp(-r from)/(1 - exp(-r)).
// Throws ConvergenceError when the tail sum does not decay.
double weight_tail_bound(const std::function<double(int)>& w, int from, double geometric_rate = 0.0);

WeightTable truncate_weights(const std::function<double(int)>& w, double scale, const ExpansionConfig& cfg,
                             double geometric_rate = 0.0);

// exp(-phi(kappa n) t) truncated for a series whose |coefficient x eigenfunction|
// products are bounded by `scale`.
WeightTable eigen_weights(const GeneratingTuple& tuple, double t, double scale, const ExpansionConfig& cfg);

// Pointwise truncation bound 1.0864 ||f|| e^{z^2/2} sum_{n >= M} exp(-phi(kappa n) t).
double truncation_bound(const GeneratingTuple& tuple, double t, double f_norm, double x, int m);

// sum_n exp(-phi(kappa n) t) f_n phi_n(x) for the given coefficients.
double semigroup_apply(const GeneratingTuple& tuple, double t, std::span<const double> coeffs, double x,
                       const ExpansionConfig& cfg);

// Transition density of the subordinate process.
double subou_density(const GeneratingTuple& tuple, double t, double x, double y, const ExpansionConfig& cfg);
// Same density at many y for one starting point (vectorized series).
void subou_density_batch(const GeneratingTuple& tuple, double t, double x, std::span<const double> ys,
                         std::span<double> out, const ExpansionConfig& cfg);

// Coefficients of e^x in the eigenbasis: f_n = exp(theta + sigma^2/(4 kappa)) c_n.
// exp_coeffs returns c_n = (sigma / sqrt(2 kappa))^n / sqrt(n!) for n < count.
std::vector<double> exp_coeffs(const GeneratingTuple& tuple, int count);
double exp_prefactor(const GeneratingTuple& tuple) noexcept;
// Upper bound on sum_{n >= m} c_n.
double exp_coeff_tail(const GeneratingTuple& tuple, int m);

}  // namespace subou
