#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pricing_detail.hpp"
#include "subou/errors.hpp"
#include "subou/numeric.hpp"
#include "subou/special_fn.hpp"

namespace subou::detail {

namespace {

// w(n) evaluated once per n.
class MemoWeights {
public:
    explicit MemoWeights(std::function<double(int)> f) : f_(std::move(f)) {}
    double operator()(int n) {
        const auto k = static_cast<std::size_t>(n);
        if (k >= cache_.size()) cache_.resize(std::max(k + 1, 2 * cache_.size()), -1.0);
        if (cache_[k] < 0.0) cache_[k] = f_(n);
        return cache_[k];
    }

private:
    std::function<double(int)> f_;
    std::vector<double> cache_;
};

double guess_w(const GeneratingTuple& tp, double strike, double fprime) {
    return tp.z(tp.theta + tp.sigma * tp.sigma / (4.0 * tp.kappa) + std::log(strike / fprime));
}

}  // namespace

std::vector<double> sv_put_prices(const ModelState& state, const MarketData& market, double t, double t_star,
                                  std::span<const double> strikes, const ExpansionConfig& cfg) {
    const auto& tp = state.tuple;
    const auto& act = *state.sv;
    const double disc = market.discount_factor(t);
    const double f0 = market.forward(t_star);
    const double z0 = tp.z(state.x0);
    const double env0 = kCramer * std::exp(0.5 * z0 * z0);
    const double tau = t_star - t;
    const double a0 = activity_integral(act, 0.0, t);
    const double a1 = activity_integral(act, t, t_star);
    const double fprime = f0 / std::exp(log_exp_series(state, t_star, cfg));
    const double rate = tp.sub.gamma * tp.kappa * a0;
    ExpansionConfig outer_cfg = cfg;
    outer_cfg.tol = 0.5 * cfg.tol;

    // The conditional weights average to the unconditional ones, which size the inner truncation.
    double omega_sum = 0.0;
    {
        MemoWeights w([&](int n) {
            const double lam = tp.eigenvalue(n);
            return std::exp(-lam * a0 + log_cir_laplace(act, t, lam, act.z0));
        });
        const auto wt = truncate_weights(std::ref(w), disc * env0, outer_cfg, rate);
        omega_sum = wt.tail;
        for (double v : wt.w) omega_sum += v;
    }
    const double k_min = *std::min_element(strikes.begin(), strikes.end());
    const double inner_bound = cfg.tol * k_min / (2.0 * disc * fprime * env0 * omega_sum);

    const auto window = cir_window(act, t, act.z0, cfg.sv_tail_prob);
    const double lo = window.lo, hi = window.hi;
    const double z_floor = 1e-12 * hi;
    const std::size_t nk = strikes.size();

    int m = exp_order(tp, inner_bound);
    for (int round = 0;; ++round) {
        const auto c = exp_coeffs(tp, m);
        std::vector<double> lc(m), bc(m), e1(m);
        for (int k = 0; k < m; ++k) {
            const double lam = tp.eigenvalue(k);
            const auto cc = cir_laplace_coeffs(act, tau, lam);
            lc[k] = cc.log_c;
            bc[k] = cc.b;
            e1[k] = -lam * a1;
        }
        double need = inner_bound;
        std::vector<double> h0;
        PutWork work;
        std::vector<double> last_w(nk, std::numeric_limits<double>::quiet_NaN());

        auto node = [&](double z) {
            std::vector<double> vals(nk, 0.0);
            z = std::max(z, z_floor);
            const double pz = cir_density(act, t, act.z0, z);
            if (!(pz * (hi - lo) > 1e-18)) return vals;
            std::vector<double> q(m);
            for (int k = 0; k < m; ++k) q[k] = std::exp(e1[k] + lc[k] - bc[k] * z) * c[k];
            const CirBridgeTransform bridge(act, t, act.z0, z);
            MemoWeights w([&](int n) {
                const double lam = tp.eigenvalue(n);
                return std::exp(-lam * a0 + bridge.log_value(lam));
            });
            const auto wt = truncate_weights(std::ref(w), disc * env0, outer_cfg, rate);
            if (h0.size() < wt.w.size()) {
                h0.resize(wt.w.size());
                normalized_hermite(z0, h0);
            }
            const std::span<const double> h0s(h0.data(), wt.w.size());
            for (std::size_t i = 0; i < nk; ++i) {
                const double target = strikes[i] / fprime;
                const double guess = std::isfinite(last_w[i]) ? last_w[i] : guess_w(tp, strikes[i], fprime);
                const double ws = solve_critical_w(q, target, guess, fprime, true);
                last_w[i] = ws;
                if (std::isfinite(ws)) need = std::min(need, 1e-12 * target / (kCramer * std::exp(0.5 * ws * ws)));
                const auto ps = put_series(wt.w, q, h0s, fprime, strikes[i], ws, work);
                if (cfg.adaptive && !wt.certified && disc * std::abs(ps.last_block) > cfg.tol * strikes[i])
                    throw ConvergenceError("put expansion did not converge within n_max terms at activity level " +
                                               std::to_string(z),
                                           disc * env0 * wt.tail * strikes[i], wt.order());
                vals[i] = pz * ps.value;
            }
            return vals;
        };

        auto simpson = [&](const std::vector<std::vector<double>>& v) {
            const std::size_t n = v.size();
            const double h = (hi - lo) / static_cast<double>(n - 1);
            std::vector<double> out(nk, 0.0);
            for (std::size_t i = 0; i < nk; ++i) {
                CompensatedSum s;
                for (std::size_t j = 0; j < n; ++j) {
                    const double wj = (j == 0 || j + 1 == n) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
                    s += wj * v[j][i];
                }
                out[i] = s.value() * h / 3.0;
            }
            return out;
        };

        std::size_t n = static_cast<std::size_t>(cfg.sv_nodes) | 1u;
        std::vector<std::vector<double>> vals(n);
        for (std::size_t j = 0; j < n; ++j) vals[j] = node(lo + (hi - lo) * static_cast<double>(j) / (n - 1));
        auto prev = simpson(vals);
        for (;;) {
            const std::size_t n2 = 2 * n - 1;
            if (n2 > static_cast<std::size_t>(cfg.sv_max_nodes)) {
                double diff = 0.0;
                if (n > 3) {
                    std::vector<std::vector<double>> coarse;
                    for (std::size_t j = 0; j < n; j += 2) coarse.push_back(vals[j]);
                    const auto c2 = simpson(coarse);
                    for (std::size_t i = 0; i < nk; ++i) diff = std::max(diff, std::abs(c2[i] - prev[i]));
                }
                throw ConvergenceError("activity integral did not reach the requested accuracy", disc * diff,
                                       static_cast<int>(n));
            }
            std::vector<std::vector<double>> next(n2);
            for (std::size_t j = 0; j < n2; ++j) {
                next[j] = (j % 2 == 0) ? std::move(vals[j / 2])
                                       : node(lo + (hi - lo) * static_cast<double>(j) / (n2 - 1));
            }
            vals = std::move(next);
            n = n2;
            const auto cur = simpson(vals);
            double diff = 0.0;
            for (std::size_t i = 0; i < nk; ++i) diff = std::max(diff, std::abs(cur[i] - prev[i]));
            prev = cur;
            if (disc * diff < cfg.sv_rel_tol * f0) break;
        }
        if (exp_coeff_tail(tp, m) <= need || round == 2) {
            for (double& v : prev) v *= disc;
            return prev;
        }
        m = exp_order(tp, need);
    }
}

double sv_spot_put_price(const ModelState& state, const MarketData& market, double t, double strike,
                         const ExpansionConfig& cfg) {
    const auto& tp = state.tuple;
    const auto& act = *state.sv;
    const double disc = market.discount_factor(t);
    const double z0 = tp.z(state.x0);
    const double env0 = kCramer * std::exp(0.5 * z0 * z0);
    const double a0 = activity_integral(act, 0.0, t);
    const double fprime = market.forward(t) / std::exp(log_exp_series(state, t, cfg));
    ExpansionConfig outer_cfg = cfg;
    outer_cfg.tol = 0.5 * cfg.tol;
    MemoWeights w([&](int n) {
        const double lam = tp.eigenvalue(n);
        return std::exp(-lam * a0 + log_cir_laplace(act, t, lam, act.z0));
    });
    const auto wt = truncate_weights(std::ref(w), disc * env0, outer_cfg, tp.sub.gamma * tp.kappa * a0);
    double omega_sum = wt.tail;
    for (double v : wt.w) omega_sum += v;
    const int m = exp_order(tp, cfg.tol * strike / (2.0 * disc * fprime * env0 * omega_sum));
    const auto q = exp_coeffs(tp, m);
    std::vector<double> h0(wt.w.size());
    normalized_hermite(z0, h0);
    PutWork work;
    double ws = guess_w(tp, strike, fprime);
    if (std::abs(ws) > 30.0) ws = std::copysign(std::numeric_limits<double>::infinity(), ws);
    const auto ps = put_series(wt.w, q, h0, fprime, strike, ws, work);
    if (cfg.adaptive && !wt.certified && disc * std::abs(ps.last_block) > cfg.tol * strike)
        throw ConvergenceError("put expansion did not converge within n_max terms", disc * env0 * wt.tail * strike,
                               wt.order());
    return disc * ps.value;
}

}  // namespace subou::detail
