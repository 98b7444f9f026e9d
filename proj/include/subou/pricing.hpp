#pragma once

#include <optional>
#include <span>
#include <vector>

#include "subou/cir.hpp"
#include "subou/market.hpp"
#include "subou/subou.hpp"

namespace subou {

// Log-futures driver X (flat model) or X run on the CIR activity clock (SV model).
struct ModelState {
    GeneratingTuple tuple;
    double x0 = 0.0;
    std::optional<CirActivity> sv;

    void validate() const;
};

enum class OptionType { put, call };

// Compensator G(t) = log E[exp(X_t)].
double g_compensator(const ModelState& state, double t, const ExpansionConfig& cfg = {});

// Futures price at time s for maturity t as a function of the state x:
//   F(s, t) = scale * sum_m coeffs[m] h_m(z(x)).
// Coefficients are truncated for |z(x)| <= z_abs_max.
struct FuturesSeries {
    GeneratingTuple tuple;
    double scale = 0.0;
    std::vector<double> coeffs;

    [[nodiscard]] double operator()(double x) const;
    void evaluate(std::span<const double> xs, std::span<double> out) const;
    // out = F, dout = dF/dx.
    void evaluate_with_slope(std::span<const double> xs, std::span<double> out, std::span<double> dout) const;
};

// `z` is the activity level at time s, required by the SV model and ignored otherwise.
FuturesSeries futures_series(const ModelState& state, const MarketData& market, double s, double t,
                             std::optional<double> z = std::nullopt, const ExpansionConfig& cfg = {},
                             double z_abs_max = 8.0);
double futures_price(const ModelState& state, const MarketData& market, double s, double t, double x,
                     std::optional<double> z = std::nullopt, const ExpansionConfig& cfg = {});

// State x* with F(t, t_star; x*) = strike, |F - K| < 1e-10 K. Throws BracketingError
// with the attainable futures range when no such state exists.
double critical_state(const ModelState& state, const MarketData& market, double t, double t_star, double strike,
                      std::optional<double> z = std::nullopt, const ExpansionConfig& cfg = {});

// European options on the futures F(., t_star), expiring at t. Prices share the
// weight tables of one expiry. The truncation tolerance cfg.tol is relative to the strike.
std::vector<double> option_prices(const ModelState& state, const MarketData& market, double t, double t_star,
                                  std::span<const double> strikes, OptionType type, const ExpansionConfig& cfg = {});
double put_price(const ModelState& state, const MarketData& market, double t, double t_star, double strike,
                 const ExpansionConfig& cfg = {});
double call_price(const ModelState& state, const MarketData& market, double t, double t_star, double strike,
                  const ExpansionConfig& cfg = {});

// Option on the spot S_t = F(t, t).
double spot_option_price(const ModelState& state, const MarketData& market, double t, double strike, OptionType type,
                         const ExpansionConfig& cfg = {});

}  // namespace subou
