#pragma once

#include <functional>
#include <span>
#include <vector>

#include "subou/pricing.hpp"

namespace subou::detail {

// Smallest M with exp_coeff_tail(M) <= bound.
int exp_order(const GeneratingTuple& tuple, double bound);

// sum_m weight(m) c_m h_m(z) for weights in [0, 1], with the coefficient tail
// below rel * |sum| after the Cramer bound.
struct WeightedExpSum {
    double value = 0.0;
    std::vector<double> coeffs;
};
WeightedExpSum weighted_exp_sum(const GeneratingTuple& tuple, const std::function<double(int)>& weight, double z,
                                double rel);

// Root w of sum_m q[m] h_m(w) = target; fscale converts the sum to a futures
// price for the error report. With `saturate`, a sum that stays below (above) the
// target on [-30, 30] gives +inf (-inf) instead of BracketingError.
double solve_critical_w(std::span<const double> q, double target, double w_guess, double fscale,
                        bool saturate = false);

struct PutWork {
    std::vector<double> h, diag, b, inner;
};

struct PutSeries {
    double value = 0.0;       // sum_n omega_n p~_n h_n(z0)
    double last_block = 0.0;  // contribution of the second half of the terms
};

// Undiscounted put series for one strike: p~_n = (K b~_n(w) - F' sum_m q_m a~_{n,m}(w)) / sqrt(pi).
PutSeries put_series(std::span<const double> omega, std::span<const double> q, std::span<const double> h0,
                     double fprime, double strike, double wstar, PutWork& work);

void check_expiry(const ModelState& state, double t, double t_star, std::span<const double> strikes,
                  const ExpansionConfig& cfg);

std::vector<double> sv_put_prices(const ModelState& state, const MarketData& market, double t, double t_star,
                                  std::span<const double> strikes, const ExpansionConfig& cfg);
double sv_spot_put_price(const ModelState& state, const MarketData& market, double t, double strike,
                         const ExpansionConfig& cfg);
// log sum_n exp(-phi_n A(0,t)) L(t, phi_n | z0) c_n h_n(z(x0)) and the flat counterpart.
double log_exp_series(const ModelState& state, double t, const ExpansionConfig& cfg);

}  // namespace subou::detail
