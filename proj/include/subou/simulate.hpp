#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subou/pricing.hpp"

namespace subou {

// Paths on a common grid; matrices are row-major, one row per path.
struct PathBundle {
    std::vector<double> grid;
    std::size_t n_paths = 0;
    std::vector<double> x;  // X (or Y) at each grid point
    std::vector<double> z;  // activity level Z at each grid point; empty for the flat model
    std::vector<std::uint64_t> seeds;

    [[nodiscard]] std::size_t n_steps() const noexcept { return grid.size(); }
    [[nodiscard]] double x_at(std::size_t path, std::size_t i) const { return x[path * grid.size() + i]; }
    [[nodiscard]] double z_at(std::size_t path, std::size_t i) const { return z[path * grid.size() + i]; }
};

struct SimulationOptions {
    std::uint64_t seed = 1;
    unsigned threads = 0;             // 0 = hardware concurrency
    bool stationary_start = false;    // draw X_0 from the stationary law instead of x0
    double max_activity_step = 1.0 / 500.0;  // trapezoid step for the SV clock
};

// X at each grid time (grid strictly increasing, grid[0] >= 0, X_0 = state.x0).
// Each step draws the subordinator increment and then the exact OU transition
// over that much internal time. Path p uses the stream seeded by (seed, p).
PathBundle simulate_subou(const ModelState& state, std::span<const double> grid, std::size_t n_paths,
                          const SimulationOptions& opt = {});

// SV model: Z exact on a refinement of the grid, clock increments by the
// trapezoid rule on a(u) + Z_u.
PathBundle simulate_sv_subou(const ModelState& state, std::span<const double> grid, std::size_t n_paths,
                             const SimulationOptions& opt = {});

// Cumulative realized quadratic variation of log F(., t_star) along each path:
// out[p * n + i] = sum_{j < i} (log F(s_{j+1}) - log F(s_j))^2, n = grid size.
std::vector<double> realized_qv(const PathBundle& bundle, double t_star, const ModelState& state,
                                const MarketData& market, const ExpansionConfig& cfg = {});

struct MaturityViolation {
    double x = 0.0;
    double z = 0.0;
    double t = 0.0;  // the later of the two compared times
    std::string what;
};

struct MaturityReport {
    bool holds = true;
    std::vector<MaturityViolation> violations;
};

// Checks that g_x/g (and for the SV model (g_z/g)^2) decrease in t and that
// g > 0, g_x > 0, where g(x, t) = E[exp(X_t) | X_0 = x].
MaturityReport check_maturity_condition(const ModelState& state, std::span<const double> x_grid,
                                        std::span<const double> t_grid, std::span<const double> z_grid = {},
                                        const ExpansionConfig& cfg = {});

}  // namespace subou
