#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subou/calibrate.hpp"
#include "subou/measure.hpp"
#include "subou/simulate.hpp"

namespace subou::cli {

enum class InstrumentKind { futures, put, call, spot_put, spot_call };

struct Instrument {
    InstrumentKind kind = InstrumentKind::put;
    double time = 0.0;      // option expiry, or the observation time of a futures price
    double maturity = 0.0;  // futures maturity; unused for spot options
    double strike = 0.0;
    std::optional<double> state;     // futures only; defaults to the model's x0
    std::optional<double> activity;  // futures only, SV model; defaults to z0
};

struct SimulationSpec {
    std::size_t n_paths = 0;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool stationary_start = false;
    double max_activity_step = 1.0 / 500.0;
    double observe = 0.5;  // QV is accumulated over [0, observe]
    int steps = 500;
    std::vector<double> maturities;
    std::string paths_out;  // optional CSV dump of the simulated paths
};

struct Config {
    ModelState model;
    ExpansionConfig expansion;
    std::vector<Instrument> instruments;
    std::string calibration_mode = "smile";
    FitOptions fit;
    SimulationSpec simulation;
    std::optional<PiecewiseLinear> physical_drift;
};

// JSON configuration. Syntax errors carry line and column; semantic errors name the key path.
Config parse_config(std::string_view text);
Config load_config(const std::string& path);

// Market file: comma-separated rows, '#' starts a comment.
//   futures,<maturity>,<price>
//   discount,<maturity>,<factor>
//   quote,<expiry>,<futures maturity>,<strike>,<implied vol>[,<bid>,<ask>]
MarketData parse_market(std::string_view text);
MarketData load_market(const std::string& path);

// Model block in the configuration format, for writing fitted parameters.
std::string model_json(const ModelState& state);

// Numbers are written with 12 significant digits.
std::string fmt(double v);

int cmd_price(const Config& cfg, const MarketData& market, std::ostream& out);
int cmd_calibrate(const Config& cfg, const MarketData& market, std::ostream& out, const std::string& params_out);
int cmd_simulate(const Config& cfg, const MarketData& market, std::ostream& out);
// 0 when the two laws are equivalent, 2 when not.
int cmd_check(const Config& q, const Config& p, std::ostream& out);

// Full command line. Errors go to `err` as a one-line JSON record; exit code 1.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subou::cli
