#include "subou/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <thread>

#include "parallel.hpp"
#include "pricing_detail.hpp"
#include "subou/errors.hpp"
#include "subou/kernels.hpp"
#include "subou/numeric.hpp"

namespace subou {

namespace {

Rng path_rng(std::uint64_t seed, std::size_t path) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(static_cast<std::uint64_t>(path) >> 32)};
    return Rng(seq);
}

double ou_step(const GeneratingTuple& tp, double x, double dt, Rng& rng) {
    if (!(dt > 0.0)) return x;
    const double e = std::exp(-tp.kappa * dt);
    const double sd = tp.sigma * std::sqrt(-std::expm1(-2.0 * tp.kappa * dt) / (2.0 * tp.kappa));
    return tp.theta + (x - tp.theta) * e + sd * std::normal_distribution<double>()(rng);
}

void check_grid(std::span<const double> grid) {
    if (grid.empty()) throw DomainError("simulation grid is empty");
    if (!(grid[0] >= 0.0)) throw DomainError("simulation grid must start at t >= 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("simulation grid must be strictly increasing");
}

double initial_x(const ModelState& state, bool stationary, Rng& rng) {
    if (!stationary) return state.x0;
    const auto& tp = state.tuple;
    return std::normal_distribution<double>(tp.theta, tp.sigma / std::sqrt(2.0 * tp.kappa))(rng);
}

// Coefficient count for series evaluated up to |z| <= z_max at relative accuracy tol.
int series_order(const GeneratingTuple& tp, double z_max, double tol) {
    const double s_min = std::exp(-z_max * tp.sigma / std::sqrt(tp.kappa) - tp.sigma * tp.sigma / (4.0 * tp.kappa));
    return detail::exp_order(tp, 1e-3 * tol * s_min / (kCramer * std::exp(0.5 * z_max * z_max)));
}

}  // namespace

PathBundle simulate_subou(const ModelState& state, std::span<const double> grid, std::size_t n_paths,
                          const SimulationOptions& opt) {
    state.validate();
    check_grid(grid);
    const auto& tp = state.tuple;
    PathBundle out;
    out.grid.assign(grid.begin(), grid.end());
    out.n_paths = n_paths;
    out.x.resize(n_paths * grid.size());
    out.seeds.resize(n_paths);
    const std::size_t n = grid.size();
    detail::parallel_for(n_paths, opt.threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
            Rng rng = path_rng(opt.seed, p);
            out.seeds[p] = p;
            double x = initial_x(state, opt.stationary_start, rng);
            double t = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dt = grid[i] - t;
                if (dt > 0.0) x = ou_step(tp, x, sample_increment(tp.sub, dt, rng), rng);
                t = grid[i];
                out.x[p * n + i] = x;
            }
        }
    });
    return out;
}

PathBundle simulate_sv_subou(const ModelState& state, std::span<const double> grid, std::size_t n_paths,
                             const SimulationOptions& opt) {
    state.validate();
    if (!state.sv) throw DomainError("simulate_sv_subou needs a CIR activity");
    if (!(opt.max_activity_step > 0.0)) throw DomainError("max_activity_step must be > 0");
    check_grid(grid);
    const auto& tp = state.tuple;
    const auto& act = *state.sv;
    PathBundle out;
    out.grid.assign(grid.begin(), grid.end());
    out.n_paths = n_paths;
    out.x.resize(n_paths * grid.size());
    out.z.resize(n_paths * grid.size());
    out.seeds.resize(n_paths);
    const std::size_t n = grid.size();
    detail::parallel_for(n_paths, opt.threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
            Rng rng = path_rng(opt.seed, p);
            out.seeds[p] = p;
            double x = initial_x(state, opt.stationary_start, rng);
            double z = act.z0;
            double t = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dt = grid[i] - t;
                if (dt > 0.0) {
                    const auto steps = static_cast<std::size_t>(std::ceil(dt / opt.max_activity_step));
                    const double h = dt / static_cast<double>(steps);
                    double clock = activity_integral(act, t, grid[i]);
                    for (std::size_t k = 0; k < steps; ++k) {
                        const double zn = sample_cir_transition(act, h, z, rng);
                        clock += 0.5 * (z + zn) * h;
                        z = zn;
                    }
                    if (clock > 0.0) x = ou_step(tp, x, sample_increment(tp.sub, clock, rng), rng);
                }
                t = grid[i];
                out.x[p * n + i] = x;
                out.z[p * n + i] = z;
            }
        }
    });
    return out;
}

std::vector<double> realized_qv(const PathBundle& bundle, double t_star, const ModelState& state,
                                const MarketData& market, const ExpansionConfig& cfg) {
    state.validate();
    const std::size_t n = bundle.grid.size();
    const std::size_t np = bundle.n_paths;
    if (n == 0) return {};
    if (bundle.grid.back() > t_star) throw DomainError("realized_qv: grid must end at or before the futures maturity");
    if (state.sv && bundle.z.size() != bundle.x.size()) throw DomainError("realized_qv: SV model needs Z paths");
    const auto& tp = state.tuple;
    std::vector<double> log_f(np * n);
    auto store = [&](std::size_t p, std::size_t i, double f) {
        if (!(f > 0.0))
            throw OverflowError("futures series is not positive on path " + std::to_string(p) + " at s=" +
                                std::to_string(bundle.grid[i]));
        log_f[p * n + i] = std::log(f);
    };
    const double scale = market.forward(t_star) / std::exp(detail::log_exp_series(state, t_star, cfg));

    detail::parallel_for(n, 0, [&](std::size_t b, std::size_t e) {
        std::vector<double> zs(np), vals(np);
        for (std::size_t i = b; i < e; ++i) {
            const double s = bundle.grid[i];
            double z_max = 8.0;
            for (std::size_t p = 0; p < np; ++p) {
                zs[p] = tp.z(bundle.x[p * n + i]);
                z_max = std::max(z_max, std::abs(zs[p]) + 0.5);
            }
            const int m = series_order(tp, z_max, cfg.tol);
            auto c = exp_coeffs(tp, m);
            if (!state.sv) {
                for (int k = 0; k < m; ++k) c[k] *= std::exp(-tp.eigenvalue(k) * (t_star - s));
                kernels::hermite_series(c, zs, vals);
                for (std::size_t p = 0; p < np; ++p) store(p, i, scale * vals[p]);
                continue;
            }
            const auto& act = *state.sv;
            const double a = activity_integral(act, s, t_star);
            std::vector<double> lc(m), bc(m), q(m);
            for (int k = 0; k < m; ++k) {
                const double lam = tp.eigenvalue(k);
                const auto cc = cir_laplace_coeffs(act, t_star - s, lam);
                lc[k] = cc.log_c - lam * a;
                bc[k] = cc.b;
            }
            for (std::size_t p = 0; p < np; ++p) {
                const double zp = bundle.z[p * n + i];
                for (int k = 0; k < m; ++k) q[k] = std::exp(lc[k] - bc[k] * zp) * c[k];
                double v = 0.0;
                kernels::hermite_series(q, std::span<const double>(&zs[p], 1), std::span<double>(&v, 1));
                store(p, i, scale * v);
            }
        }
    });

    std::vector<double> qv(np * n, 0.0);
    for (std::size_t p = 0; p < np; ++p) {
        CompensatedSum acc;
        for (std::size_t i = 1; i < n; ++i) {
            const double d = log_f[p * n + i] - log_f[p * n + i - 1];
            acc += d * d;
            qv[p * n + i] = acc.value();
        }
    }
    return qv;
}

MaturityReport check_maturity_condition(const ModelState& state, std::span<const double> x_grid,
                                        std::span<const double> t_grid, std::span<const double> z_grid,
                                        const ExpansionConfig& cfg) {
    state.validate();
    for (double t : t_grid)
        if (!(t > 0.0)) throw DomainError("check_maturity_condition: times must be > 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("check_maturity_condition: times must be increasing");
    const auto& tp = state.tuple;
    std::vector<double> zs(x_grid.size());
    double z_max = 8.0;
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
        zs[j] = tp.z(x_grid[j]);
        z_max = std::max(z_max, std::abs(zs[j]) + 0.5);
    }
    const int m = series_order(tp, z_max, cfg.tol);
    const auto c = exp_coeffs(tp, m);
    const double dz = std::sqrt(tp.kappa) / tp.sigma;
    const std::size_t nx = x_grid.size();

    MaturityReport rep;
    auto flag = [&](double x, double z, double t, std::string what) {
        rep.holds = false;
        rep.violations.push_back({x, z, t, std::move(what)});
    };
    const std::vector<double> flat_z = {0.0};
    const std::span<const double> levels = state.sv ? (z_grid.empty() ? std::span<const double>(&state.sv->z0, 1) : z_grid)
                                                    : std::span<const double>(flat_z);
    std::vector<double> g(nx), gx(nx), gz(nx), dummy(nx);
    for (double zl : levels) {
        std::vector<double> prev_rx(nx), prev_rz(nx);
        for (std::size_t it = 0; it < t_grid.size(); ++it) {
            const double t = t_grid[it];
            std::vector<double> w(m), wz(m);
            for (int k = 0; k < m; ++k) {
                const double lam = tp.eigenvalue(k);
                if (state.sv) {
                    const auto cc = cir_laplace_coeffs(*state.sv, t, lam);
                    w[k] = std::exp(-lam * activity_integral(*state.sv, 0.0, t) + cc.log_c - cc.b * zl) * c[k];
                    wz[k] = -cc.b * w[k];
                } else {
                    w[k] = std::exp(-lam * t) * c[k];
                }
            }
            kernels::hermite_series_deriv(w, zs, g, gx);
            if (state.sv) kernels::hermite_series(wz, zs, gz);
            for (std::size_t j = 0; j < nx; ++j) {
                const double x = x_grid[j];
                if (!(g[j] > 0.0)) flag(x, zl, t, "g <= 0");
                if (!(gx[j] > 0.0)) flag(x, zl, t, "g_x <= 0");
                const double rx = dz * gx[j] / g[j];
                const double rz = state.sv ? (gz[j] / g[j]) * (gz[j] / g[j]) : 0.0;
                if (it > 0) {
                    if (rx > prev_rx[j] * (1.0 + 1e-12) + 1e-300) flag(x, zl, t, "g_x/g increases in t");
                    if (state.sv && rz > prev_rz[j] * (1.0 + 1e-12) + 1e-300) flag(x, zl, t, "(g_z/g)^2 increases in t");
                }
                prev_rx[j] = rx;
                prev_rz[j] = rz;
            }
        }
    }
    return rep;
}

}  // namespace subou
