#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <tuple>

#include "subou/cli/cli.hpp"
#include "subou/errors.hpp"

namespace subou::cli {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

const char* kind_name(InstrumentKind k) {
    switch (k) {
        case InstrumentKind::futures: return "futures";
        case InstrumentKind::put: return "put";
        case InstrumentKind::call: return "call";
        case InstrumentKind::spot_put: return "spot_put";
        case InstrumentKind::spot_call: return "spot_call";
    }
    return "?";
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message, int line = 0,
                 int column = 0) {
    nlohmann::json rec;
    rec["kind"] = kind;
    rec["message"] = message;
    if (line > 0) {
        rec["line"] = line;
        rec["column"] = column;
    }
    err << nlohmann::json{{"error", rec}}.dump() << '\n';
}

}  // namespace

int cmd_price(const Config& cfg, const MarketData& market, std::ostream& out) {
    const auto& ins = cfg.instruments;
    std::vector<double> value(ins.size());
    // Options sharing (type, expiry, maturity) are priced in one batch, strikes in config order.
    std::map<std::tuple<int, double, double>, std::vector<std::size_t>> batches;
    for (std::size_t i = 0; i < ins.size(); ++i) {
        const auto& x = ins[i];
        switch (x.kind) {
            case InstrumentKind::futures: {
                std::optional<double> z;
                if (cfg.model.sv) z = x.activity.value_or(cfg.model.sv->z0);
                value[i] = futures_price(cfg.model, market, x.time, x.maturity, x.state.value_or(cfg.model.x0), z,
                                         cfg.expansion);
                break;
            }
            case InstrumentKind::put:
            case InstrumentKind::call:
                batches[{static_cast<int>(x.kind), x.time, x.maturity}].push_back(i);
                break;
            case InstrumentKind::spot_put:
            case InstrumentKind::spot_call:
                value[i] = spot_option_price(cfg.model, market, x.time, x.strike,
                                             x.kind == InstrumentKind::spot_put ? OptionType::put : OptionType::call,
                                             cfg.expansion);
                break;
        }
    }
    for (const auto& [key, idx] : batches) {
        const auto& [kind, t, t_star] = key;
        std::vector<double> strikes;
        for (auto i : idx) strikes.push_back(ins[i].strike);
        const auto type = kind == static_cast<int>(InstrumentKind::put) ? OptionType::put : OptionType::call;
        const auto v = option_prices(cfg.model, market, t, t_star, strikes, type, cfg.expansion);
        for (std::size_t j = 0; j < idx.size(); ++j) value[idx[j]] = v[j];
    }

    out << "instrument\ttime\tmaturity\tstrike\tstate\tvalue\n";
    for (std::size_t i = 0; i < ins.size(); ++i) {
        const auto& x = ins[i];
        const bool fut = x.kind == InstrumentKind::futures;
        out << kind_name(x.kind) << '\t' << fmt(x.time) << '\t' << fmt(x.maturity) << '\t'
            << (fut ? "-" : fmt(x.strike)) << '\t' << (fut ? fmt(x.state.value_or(cfg.model.x0)) : "-") << '\t'
            << fmt(value[i]) << '\n';
    }
    return 0;
}

int cmd_calibrate(const Config& cfg, const MarketData& market, std::ostream& out, const std::string& params_out) {
    const bool surface = cfg.calibration_mode == "surface";
    if (surface && !cfg.model.sv) throw ConfigError("surface calibration needs a model.sv block");
    const auto fit = surface ? calibrate_surface(market, cfg.model, cfg.fit) : calibrate_smile(market, cfg.model, cfg.fit);
    const auto& r = fit.report;
    out << "mode\t" << cfg.calibration_mode << '\n'
        << "rmse\t" << fmt(r.rmse) << '\n'
        << "evaluations\t" << r.evaluations << '\n'
        << "iterations\t" << r.iterations << '\n'
        << "converged\t" << (r.converged ? "true" : "false") << '\n'
        << "message\t" << r.message << '\n'
        << "expiry\tmaturity\tstrike\tmarket_vol\tmodel_vol\tresidual\n";
    for (std::size_t i = 0; i < market.quotes.size(); ++i) {
        const auto& q = market.quotes[i];
        out << fmt(q.expiry) << '\t' << fmt(q.maturity) << '\t' << fmt(q.strike) << '\t' << fmt(q.implied_vol)
            << '\t' << fmt(q.implied_vol + r.residuals[i]) << '\t' << fmt(r.residuals[i]) << '\n';
    }
    const auto params = model_json(fit.state);
    if (params_out.empty()) {
        out << params << '\n';
    } else {
        std::ofstream f(params_out);
        if (!f) throw ConfigError("cannot write '" + params_out + "'");
        f << params << '\n';
    }
    return 0;
}

int cmd_simulate(const Config& cfg, const MarketData& market, std::ostream& out) {
    const auto& sim = cfg.simulation;
    if (sim.n_paths == 0) throw ConfigError("config.simulation: block with n_paths > 0 is required");
    std::vector<double> grid(static_cast<std::size_t>(sim.steps) + 1);
    for (int i = 0; i <= sim.steps; ++i) grid[i] = sim.observe * i / sim.steps;
    SimulationOptions opt;
    opt.seed = sim.seed;
    opt.threads = sim.threads;
    opt.stationary_start = sim.stationary_start;
    opt.max_activity_step = sim.max_activity_step;
    const auto b = cfg.model.sv ? simulate_sv_subou(cfg.model, grid, sim.n_paths, opt)
                                : simulate_subou(cfg.model, grid, sim.n_paths, opt);

    out << "paths\t" << sim.n_paths << '\n' << "seed\t" << sim.seed << '\n' << "observe\t" << fmt(sim.observe) << '\n';
    out << "maturity\tmean_qv\tstd_error\n";
    const std::size_t n = grid.size();
    for (double t_star : sim.maturities) {
        const auto qv = realized_qv(b, t_star, cfg.model, market, cfg.expansion);
        double s = 0.0, ss = 0.0;
        for (std::size_t p = 0; p < b.n_paths; ++p) s += qv[p * n + n - 1];
        const double mean = s / static_cast<double>(b.n_paths);
        for (std::size_t p = 0; p < b.n_paths; ++p) ss += std::pow(qv[p * n + n - 1] - mean, 2);
        const double se =
            b.n_paths > 1 ? std::sqrt(ss / static_cast<double>(b.n_paths - 1) / static_cast<double>(b.n_paths)) : 0.0;
        out << fmt(t_star) << '\t' << fmt(mean) << '\t' << fmt(se) << '\n';
    }

    if (!sim.paths_out.empty()) {
        std::ofstream f(sim.paths_out);
        if (!f) throw ConfigError("cannot write '" + sim.paths_out + "'");
        f << (b.z.empty() ? "path,time,x\n" : "path,time,x,z\n");
        for (std::size_t p = 0; p < b.n_paths; ++p)
            for (std::size_t i = 0; i < n; ++i) {
                f << p << ',' << fmt(grid[i]) << ',' << fmt(b.x_at(p, i));
                if (!b.z.empty()) f << ',' << fmt(b.z_at(p, i));
                f << '\n';
            }
    }
    return 0;
}

int cmd_check(const Config& q, const Config& p, std::ostream& out) {
    const auto v = p.physical_drift ? check_physical_drift(q.model.tuple, p.model.tuple, *p.physical_drift)
                                    : check_equivalence(q.model.tuple, p.model.tuple);
    if (v.equivalent) {
        out << "equivalent\n";
        return 0;
    }
    out << "not_equivalent\t" << v.reason << '\n';
    return 2;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Subordinate Ornstein-Uhlenbeck commodity models: pricing, calibration, simulation"};
    app.require_subcommand(1);
    std::string config, market, config_p, params_out;

    auto* price = app.add_subcommand("price", "Price the config's instruments against a market file");
    price->add_option("config", config, "JSON config")->required();
    price->add_option("market", market, "market file")->required();

    auto* calib = app.add_subcommand("calibrate", "Fit the model to the market file's quotes");
    calib->add_option("config", config, "JSON config (model block is the starting point)")->required();
    calib->add_option("market", market, "market file with quote rows")->required();
    calib->add_option("-o,--out", params_out, "write the fitted model block here instead of stdout");

    auto* sim = app.add_subcommand("simulate", "Simulate paths and report mean realized QV per maturity");
    sim->add_option("config", config, "JSON config with a simulation block")->required();
    sim->add_option("-m,--market", market, "market file (default: flat futures curve at 1)");

    auto* check = app.add_subcommand("check", "Test two models for equivalent laws");
    check->add_option("config_q", config, "pricing-measure config")->required();
    check->add_option("config_p", config_p, "physical-measure config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        write_error(err, "usage", e.what());
        return 1;
    }

    try {
        if (price->parsed()) return cmd_price(load_config(config), load_market(market), out);
        if (calib->parsed()) return cmd_calibrate(load_config(config), load_market(market), out, params_out);
        if (sim->parsed()) {
            MarketData m;
            m.futures = Curve::flat(1.0);
            return cmd_simulate(load_config(config), market.empty() ? m : load_market(market), out);
        }
        return cmd_check(load_config(config), load_config(config_p), out);
    } catch (const ConfigError& e) {
        write_error(err, e.kind(), e.what(), e.line(), e.column());
    } catch (const Error& e) {
        write_error(err, e.kind(), e.what());
    } catch (const std::exception& e) {
        write_error(err, "internal", e.what());
    }
    return 1;
}

}  // namespace subou::cli
