#include "subou/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pricing_detail.hpp"
#include "subou/errors.hpp"
#include "subou/kernels.hpp"
#include "subou/numeric.hpp"
#include "subou/special_fn.hpp"

namespace subou {

void ModelState::validate() const {
    tuple.validate();
    if (!std::isfinite(x0)) throw DomainError("initial state x0 must be finite");
    if (sv) sv->validate();
}

namespace detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

int exp_order(const GeneratingTuple& tuple, double bound) {
    if (!(bound > 0.0)) throw DomainError("exp_order: bound must be > 0");
    int m = 1;
    while (exp_coeff_tail(tuple, m) > bound) {
        ++m;
        if (m > 200000) throw ConvergenceError("exponential coefficient tail does not decay", bound, m);
    }
    return m;
}

WeightedExpSum weighted_exp_sum(const GeneratingTuple& tuple, const std::function<double(int)>& weight, double z,
                                double rel) {
    const double env = kCramer * std::exp(0.5 * z * z);
    int m = exp_order(tuple, 1e-8);
    for (;;) {
        WeightedExpSum out;
        out.coeffs = exp_coeffs(tuple, m);
        for (int k = 0; k < m; ++k) out.coeffs[k] *= weight(k);
        kernels::hermite_series(out.coeffs, std::span<const double>(&z, 1), std::span<double>(&out.value, 1));
        if (env * exp_coeff_tail(tuple, m) <= rel * std::abs(out.value)) return out;
        if (m > 200000) throw ConvergenceError("exponential series did not converge", env * exp_coeff_tail(tuple, m), m);
        m = std::max(m + 8, m * 3 / 2);
    }
}

double solve_critical_w(std::span<const double> q, double target, double w_guess, double fscale, bool saturate) {
    constexpr double w_cap = 30.0;
    auto f = [&](double w) {
        double s = 0.0;
        kernels::hermite_series(q, std::span<const double>(&w, 1), std::span<double>(&s, 1));
        return s - target;
    };
    const double tol = 1e-10 * target;
    // Newton on log S: nearly linear in w, so a good guess converges in a few steps.
    {
        double w = std::clamp(w_guess, -w_cap, w_cap);
        for (int i = 0; i < 12; ++i) {
            double s = 0.0, ds = 0.0;
            kernels::hermite_series_deriv(q, std::span<const double>(&w, 1), std::span<double>(&s, 1),
                                          std::span<double>(&ds, 1));
            if (!(s > 0.0) || !(ds > 0.0)) break;
            if (std::abs(s - target) < tol) return w;
            const double step = std::clamp((std::log(target) - std::log(s)) * s / ds, -1.0, 1.0);
            w = std::clamp(w + step, -w_cap, w_cap);
        }
    }
    auto fail = [&]() -> double {
        if (saturate) return f(w_cap) < 0.0 ? kInf : -kInf;
        throw BracketingError("no critical state with F = K in z in [-30, 30]", fscale * (f(-w_cap) + target),
                              fscale * (f(w_cap) + target));
    };
    w_guess = std::clamp(w_guess, -w_cap, w_cap);
    const double fg = f(w_guess);
    if (fg == 0.0) return w_guess;
    double lo = w_guess, hi = w_guess;
    double step = 0.25;
    if (fg < 0.0) {
        for (;;) {
            if (hi >= w_cap) return fail();
            lo = hi;
            hi = std::min(hi + step, w_cap);
            step *= 2.0;
            if (f(hi) >= 0.0) break;
        }
    } else {
        for (;;) {
            if (lo <= -w_cap) return fail();
            hi = lo;
            lo = std::max(lo - step, -w_cap);
            step *= 2.0;
            if (f(lo) <= 0.0) break;
        }
    }
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        const double v = f(mid);
        if (std::abs(v) < tol) break;
        (v < 0.0 ? lo : hi) = mid;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) break;
    }
    return mid;
}

PutSeries put_series(std::span<const double> omega, std::span<const double> q, std::span<const double> h0,
                     double fprime, double strike, double wstar, PutWork& work) {
    const std::size_t n = omega.size();
    if (std::isinf(wstar)) {
        // Exercise everywhere (K - E[F]) or nowhere.
        PutSeries out;
        if (wstar < 0.0) return out;
        CompensatedSum head, tail;
        head += strike * omega[0] * h0[0];
        for (std::size_t k = 0; k < std::min(n, q.size()); ++k)
            (k < n / 2 ? head : tail) += -fprime * omega[k] * q[k] * h0[k];
        out.last_block = tail.value();
        out.value = head.value() + out.last_block;
        return out;
    }
    const std::size_t len = std::max(n, q.size()) + 1;
    work.h.resize(len);
    normalized_hermite(wstar, work.h);
    work.b.resize(n);
    coeff_b_normalized(wstar, work.h, work.b);
    work.diag.resize(n);
    coeff_a_diagonal_normalized(wstar, work.h, work.diag);
    work.inner.resize(n);
    kernels::put_inner_sums(q, work.h, work.diag, 0.5 * std::exp(-wstar * wstar), work.inner);
    CompensatedSum head, tail;
    for (std::size_t k = 0; k < n; ++k) {
        const double term = omega[k] * (strike * work.b[k] - fprime * work.inner[k]) * h0[k];
        (k < n / 2 ? head : tail) += term;
    }
    PutSeries out;
    out.last_block = tail.value() / kSqrtPi;
    out.value = head.value() / kSqrtPi + out.last_block;
    return out;
}

void check_expiry(const ModelState& state, double t, double t_star, std::span<const double> strikes,
                  const ExpansionConfig& cfg) {
    state.validate();
    cfg.validate();
    if (!(t_star >= t)) throw DomainError("futures maturity must be >= option expiry");
    if (!(t >= cfg.min_expiry))
        throw PrecisionError("option expiry " + std::to_string(t) + " is below the supported minimum " +
                             std::to_string(cfg.min_expiry));
    for (double k : strikes)
        if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("strikes must be positive");
}

double log_exp_series(const ModelState& state, double t, const ExpansionConfig& cfg) {
    const auto& tp = state.tuple;
    std::function<double(int)> w;
    if (state.sv) {
        const double a = activity_integral(*state.sv, 0.0, t);
        w = [&, a](int n) {
            const double lam = tp.eigenvalue(n);
            return std::exp(-lam * a + log_cir_laplace(*state.sv, t, lam, state.sv->z0));
        };
    } else {
        w = [&](int n) { return std::exp(-tp.eigenvalue(n) * t); };
    }
    const auto s = weighted_exp_sum(tp, w, tp.z(state.x0), 1e-3 * cfg.tol);
    if (!(s.value > 0.0)) throw OverflowError("exponential moment series is not positive at t=" + std::to_string(t));
    return std::log(s.value);
}

namespace {

// Flat-model puts at one expiry.
std::vector<double> flat_put_prices(const ModelState& state, const MarketData& market, double t, double t_star,
                                    std::span<const double> strikes, bool spot, const ExpansionConfig& cfg) {
    const auto& tp = state.tuple;
    const double disc = market.discount_factor(t);
    const double f0 = market.forward(t_star);
    const double z0 = tp.z(state.x0);
    const double tau = t_star - t;
    const double fprime = f0 / std::exp(log_exp_series(state, t_star, cfg));
    const double env0 = kCramer * std::exp(0.5 * z0 * z0);

    ExpansionConfig outer_cfg = cfg;
    outer_cfg.tol = 0.5 * cfg.tol;
    const auto wt = eigen_weights(tp, t, disc * env0, outer_cfg);
    const std::size_t n_out = wt.w.size();
    std::vector<double> h0(n_out);
    normalized_hermite(z0, h0);
    double omega_sum = wt.tail;
    for (double v : wt.w) omega_sum += v;

    const double k_min = *std::min_element(strikes.begin(), strikes.end());
    const double inner_bound = cfg.tol * k_min / (2.0 * disc * fprime * env0 * omega_sum);
    int m = exp_order(tp, inner_bound);
    std::vector<double> q, w_star(strikes.size());
    for (int round = 0;; ++round) {
        q = exp_coeffs(tp, m);
        if (tau > 0.0)
            for (int k = 0; k < m; ++k) q[k] *= std::exp(-tp.eigenvalue(k) * tau);
        double need = inner_bound;
        for (std::size_t i = 0; i < strikes.size(); ++i) {
            const double guess = tp.z(tp.theta + tp.sigma * tp.sigma / (4.0 * tp.kappa) + std::log(strikes[i] / fprime));
            if (spot)
                w_star[i] = std::abs(guess) > 30.0 ? std::copysign(kInf, guess) : guess;
            else
                w_star[i] = solve_critical_w(q, strikes[i] / fprime, guess, fprime, true);
            if (!spot && std::isfinite(w_star[i]))
                need = std::min(need, 1e-12 * strikes[i] / fprime / (kCramer * std::exp(0.5 * w_star[i] * w_star[i])));
        }
        if (exp_coeff_tail(tp, m) <= need || round == 3) break;
        m = exp_order(tp, need);
    }

    std::vector<double> out(strikes.size());
    PutWork work;
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        const auto ps = put_series(wt.w, q, h0, fprime, strikes[i], w_star[i], work);
        if (cfg.adaptive && !wt.certified && disc * std::abs(ps.last_block) > cfg.tol * strikes[i])
            throw ConvergenceError("put expansion did not converge within n_max terms",
                                   disc * env0 * wt.tail * strikes[i], static_cast<int>(n_out));
        out[i] = disc * ps.value;
    }
    return out;
}

}  // namespace
}  // namespace detail

double g_compensator(const ModelState& state, double t, const ExpansionConfig& cfg) {
    state.validate();
    if (!(t >= 0.0)) throw DomainError("g_compensator: t must be >= 0");
    if (t == 0.0) return state.x0;
    return std::log(exp_prefactor(state.tuple)) + detail::log_exp_series(state, t, cfg);
}

double FuturesSeries::operator()(double x) const {
    double out = 0.0;
    evaluate(std::span<const double>(&x, 1), std::span<double>(&out, 1));
    return out;
}

void FuturesSeries::evaluate(std::span<const double> xs, std::span<double> out) const {
    std::vector<double> zs(xs.size());
    std::transform(xs.begin(), xs.end(), zs.begin(), [&](double x) { return tuple.z(x); });
    kernels::hermite_series(coeffs, zs, out);
    for (double& v : out) v *= scale;
}

void FuturesSeries::evaluate_with_slope(std::span<const double> xs, std::span<double> out,
                                        std::span<double> dout) const {
    std::vector<double> zs(xs.size());
    std::transform(xs.begin(), xs.end(), zs.begin(), [&](double x) { return tuple.z(x); });
    kernels::hermite_series_deriv(coeffs, zs, out, dout);
    const double dz = std::sqrt(tuple.kappa) / tuple.sigma;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] *= scale;
        dout[i] *= scale * dz;
    }
}

FuturesSeries futures_series(const ModelState& state, const MarketData& market, double s, double t,
                             std::optional<double> z, const ExpansionConfig& cfg, double z_abs_max) {
    state.validate();
    if (!(s >= 0.0) || !(t >= s)) throw DomainError("futures_series: need 0 <= s <= t");
    const auto& tp = state.tuple;
    FuturesSeries out;
    out.tuple = tp;
    out.scale = market.forward(t) / std::exp(detail::log_exp_series(state, t, cfg));
    const double s_min = std::exp(-z_abs_max * tp.sigma / std::sqrt(tp.kappa) - tp.sigma * tp.sigma / (4.0 * tp.kappa));
    const int m = detail::exp_order(tp, 1e-3 * cfg.tol * s_min / (kCramer * std::exp(0.5 * z_abs_max * z_abs_max)));
    out.coeffs = exp_coeffs(tp, m);
    const double dt = t - s;
    if (state.sv) {
        const double zs = z.value_or(state.sv->z0);
        if (!(zs >= 0.0)) throw DomainError("futures_series: activity level must be >= 0");
        const double a = activity_integral(*state.sv, s, t);
        for (int k = 0; k < m; ++k) {
            const double lam = tp.eigenvalue(k);
            out.coeffs[k] *= std::exp(-lam * a + log_cir_laplace(*state.sv, dt, lam, zs));
        }
    } else if (dt > 0.0) {
        for (int k = 0; k < m; ++k) out.coeffs[k] *= std::exp(-tp.eigenvalue(k) * dt);
    }
    return out;
}

double futures_price(const ModelState& state, const MarketData& market, double s, double t, double x,
                     std::optional<double> z, const ExpansionConfig& cfg) {
    return futures_series(state, market, s, t, z, cfg)(x);
}

double critical_state(const ModelState& state, const MarketData& market, double t, double t_star, double strike,
                      std::optional<double> z, const ExpansionConfig& cfg) {
    if (!(strike > 0.0)) throw DomainError("critical_state: strike must be > 0");
    const auto fs = futures_series(state, market, t, t_star, z, cfg, 12.0);
    const auto& tp = state.tuple;
    const double guess = tp.z(tp.theta + tp.sigma * tp.sigma / (4.0 * tp.kappa) + std::log(strike / fs.scale));
    const double w = detail::solve_critical_w(fs.coeffs, strike / fs.scale, guess, fs.scale);
    return tp.theta + tp.sigma / std::sqrt(tp.kappa) * w;
}

std::vector<double> option_prices(const ModelState& state, const MarketData& market, double t, double t_star,
                                  std::span<const double> strikes, OptionType type, const ExpansionConfig& cfg) {
    detail::check_expiry(state, t, t_star, strikes, cfg);
    if (strikes.empty()) return {};
    auto out = state.sv ? detail::sv_put_prices(state, market, t, t_star, strikes, cfg)
                        : detail::flat_put_prices(state, market, t, t_star, strikes, false, cfg);
    if (type == OptionType::call) {
        const double disc = market.discount_factor(t);
        const double f0 = market.forward(t_star);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += disc * (f0 - strikes[i]);
    }
    return out;
}

double put_price(const ModelState& state, const MarketData& market, double t, double t_star, double strike,
                 const ExpansionConfig& cfg) {
    return option_prices(state, market, t, t_star, std::span<const double>(&strike, 1), OptionType::put, cfg)[0];
}

double call_price(const ModelState& state, const MarketData& market, double t, double t_star, double strike,
                  const ExpansionConfig& cfg) {
    return option_prices(state, market, t, t_star, std::span<const double>(&strike, 1), OptionType::call, cfg)[0];
}

double spot_option_price(const ModelState& state, const MarketData& market, double t, double strike, OptionType type,
                         const ExpansionConfig& cfg) {
    const std::span<const double> ks(&strike, 1);
    detail::check_expiry(state, t, t, ks, cfg);
    double put = state.sv ? detail::sv_spot_put_price(state, market, t, strike, cfg)
                          : detail::flat_put_prices(state, market, t, t, ks, true, cfg)[0];
    if (type == OptionType::call) put += market.discount_factor(t) * (market.forward(t) - strike);
    return put;
}

}  // namespace subou
