#pragma once

#include <string>
#include <vector>

#include "subou/pricing.hpp"

namespace subou {

// Lognormal futures-option price (Black 1976).
double black76_price(double forward, double strike, double vol, double t, double discount, OptionType type);
// Inverse of black76_price by safeguarded Newton, |price error| < 1e-12 F.
// Throws DomainError when the price is outside the no-arbitrage range.
double implied_vol(double price, double forward, double strike, double t, double discount, OptionType type);

struct FitOptions {
    int nm_max_evals = 150;  // Nelder-Mead warm start budget; 0 skips it
    int lm_max_evals = 100;     // residual evaluations, Jacobian columns excluded
    double lm_tol = 1e-14;
    double fd_step = 1e-5;   // central-difference step in transformed coordinates
    bool fix_theta_z = true; // the CIR level and the subordinator scale are not separately identified
    ExpansionConfig pricing;
};

struct FitReport {
    double rmse = 0.0;              // in volatility units (0.01 = one vol point)
    std::vector<double> residuals;  // model minus market implied vol, one per quote
    int evaluations = 0;
    int iterations = 0;
    bool converged = false;
    std::string message;
};

struct FitResult {
    ModelState state;
    FitReport report;
};

// Model implied vols for the market's quotes (out-of-the-money side).
std::vector<double> model_implied_vols(const ModelState& state, const MarketData& market,
                                       const ExpansionConfig& cfg = {});

// Least squares in implied-vol space over kappa, theta, sigma, gamma and the jump
// parameters; x0 is kept from `initial`.
FitResult calibrate_smile(const MarketData& market, const ModelState& initial, const FitOptions& opt = {});

// As calibrate_smile plus the CIR parameters (Feller enforced) and the levels of
// a(t), piecewise constant between consecutive quote expiries unless `initial`
// already carries breakpoints.
FitResult calibrate_surface(const MarketData& market, const ModelState& initial, const FitOptions& opt = {});

}  // namespace subou
