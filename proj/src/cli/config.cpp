#include <cmath>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>

#include "subou/cli/cli.hpp"
#include "subou/errors.hpp"

namespace subou::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Line and column (1-based) of a byte offset.
std::pair<int, int> locate(std::string_view text, std::size_t offset) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        for (const auto& [k, v] : j_.items()) {
            bool ok = false;
            for (const char* a : keys) ok = ok || k == a;
            if (!ok) throw ConfigError(path_ + ": unknown key '" + k + "'");
        }
    }

    [[nodiscard]] bool has(const char* key) const { return j_.contains(key); }
    [[nodiscard]] std::string key_path(const char* key) const { return path_ + "." + key; }

    [[nodiscard]] double num(const char* key) const {
        if (!has(key)) throw ConfigError(key_path(key) + ": required number is missing");
        return number(j_.at(key), key_path(key));
    }
    [[nodiscard]] double num(const char* key, double def) const { return has(key) ? num(key) : def; }
    [[nodiscard]] std::optional<double> opt_num(const char* key) const {
        if (!has(key)) return std::nullopt;
        return num(key);
    }

    [[nodiscard]] long long integer(const char* key, long long def) const {
        if (!has(key)) return def;
        const auto& v = j_.at(key);
        if (!v.is_number_integer()) throw ConfigError(key_path(key) + ": expected an integer");
        return v.get<long long>();
    }

    [[nodiscard]] bool flag(const char* key, bool def) const {
        if (!has(key)) return def;
        const auto& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(key_path(key) + ": expected true or false");
        return v.get<bool>();
    }

    [[nodiscard]] std::string str(const char* key, const std::string& def) const {
        if (!has(key)) return def;
        const auto& v = j_.at(key);
        if (!v.is_string()) throw ConfigError(key_path(key) + ": expected a string");
        return v.get<std::string>();
    }

    [[nodiscard]] std::vector<double> nums(const char* key) const {
        if (!has(key)) return {};
        const auto& v = j_.at(key);
        if (!v.is_array()) throw ConfigError(key_path(key) + ": expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(number(v[i], key_path(key) + "[" + std::to_string(i) + "]"));
        return out;
    }

    [[nodiscard]] Node child(const char* key) const { return {j_.at(key), key_path(key)}; }
    [[nodiscard]] const json& raw(const char* key) const { return j_.at(key); }

private:
    static double number(const json& v, const std::string& path) {
        if (!v.is_number()) throw ConfigError(path + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(path + ": must be finite");
        return d;
    }

    const json& j_;
    std::string path_;
};

SubordinatorSpec parse_subordinator(const Node& n) {
    const auto family = n.str("family", "none");
    const double gamma = n.num("gamma", 0.0);
    switch (family_from_name(family)) {
        case Family::no_jumps:
            n.allow({"family", "gamma"});
            return SubordinatorSpec::drift_only(gamma);
        case Family::tempered_stable:
            n.allow({"family", "gamma", "c", "p", "eta"});
            return SubordinatorSpec::tempered_stable(gamma, n.num("c"), n.num("p"), n.num("eta"));
        case Family::compound_poisson_exp:
            n.allow({"family", "gamma", "alpha", "eta"});
            return SubordinatorSpec::compound_poisson_exp(gamma, n.num("alpha"), n.num("eta"));
        case Family::inverse_gaussian:
            n.allow({"family", "gamma", "mu", "nu"});
            return SubordinatorSpec::inverse_gaussian(gamma, n.num("mu"), n.num("nu"));
        case Family::gamma:
            n.allow({"family", "gamma", "c", "eta"});
            return SubordinatorSpec::gamma_process(gamma, n.num("c"), n.num("eta"));
    }
    throw UnsupportedFamilyError("unknown subordinator family '" + family + "'");
}

ModelState parse_model(const Node& n) {
    n.allow({"kappa", "theta", "sigma", "x0", "subordinator", "sv"});
    ModelState s;
    s.tuple.kappa = n.num("kappa");
    s.tuple.theta = n.num("theta");
    s.tuple.sigma = n.num("sigma");
    s.x0 = n.num("x0", s.tuple.theta);
    if (n.has("subordinator"))
        s.tuple.sub = parse_subordinator(n.child("subordinator"));
    else
        s.tuple.sub = SubordinatorSpec::drift_only(1.0);
    if (n.has("sv")) {
        const auto v = n.child("sv");
        v.allow({"kappa", "theta", "sigma", "z0", "a_breaks", "a_levels"});
        CirActivity a;
        a.kappa = v.num("kappa");
        a.theta = v.num("theta");
        a.sigma = v.num("sigma");
        a.z0 = v.num("z0", a.theta);
        a.a_breaks = v.nums("a_breaks");
        a.a_levels = v.nums("a_levels");
        s.sv = a;
    }
    s.validate();
    return s;
}

ExpansionConfig parse_expansion(const Node& n) {
    n.allow({"n_max", "tol", "adaptive", "sv_nodes", "sv_max_nodes", "sv_rel_tol", "sv_tail_prob", "min_expiry"});
    ExpansionConfig c;
    c.n_max = static_cast<int>(n.integer("n_max", c.n_max));
    c.tol = n.num("tol", c.tol);
    c.adaptive = n.flag("adaptive", c.adaptive);
    c.sv_nodes = static_cast<int>(n.integer("sv_nodes", c.sv_nodes));
    c.sv_max_nodes = static_cast<int>(n.integer("sv_max_nodes", c.sv_max_nodes));
    c.sv_rel_tol = n.num("sv_rel_tol", c.sv_rel_tol);
    c.sv_tail_prob = n.num("sv_tail_prob", c.sv_tail_prob);
    c.min_expiry = n.num("min_expiry", c.min_expiry);
    c.validate();
    return c;
}

Instrument parse_instrument(const Node& n) {
    const auto type = n.str("type", "");
    Instrument ins;
    if (type == "futures") {
        n.allow({"type", "time", "maturity", "state", "activity"});
        ins.kind = InstrumentKind::futures;
        ins.time = n.num("time", 0.0);
        ins.maturity = n.num("maturity");
        ins.state = n.opt_num("state");
        ins.activity = n.opt_num("activity");
        return ins;
    }
    if (type == "put" || type == "call") {
        n.allow({"type", "expiry", "maturity", "strike"});
        ins.kind = type == "put" ? InstrumentKind::put : InstrumentKind::call;
        ins.time = n.num("expiry");
        ins.maturity = n.num("maturity");
        ins.strike = n.num("strike");
        return ins;
    }
    if (type == "spot_put" || type == "spot_call") {
        n.allow({"type", "expiry", "strike"});
        ins.kind = type == "spot_put" ? InstrumentKind::spot_put : InstrumentKind::spot_call;
        ins.time = n.num("expiry");
        ins.maturity = ins.time;
        ins.strike = n.num("strike");
        return ins;
    }
    throw ConfigError(n.key_path("type") + ": expected futures, put, call, spot_put or spot_call");
}

void parse_calibration(const Node& n, Config& c) {
    n.allow({"mode", "nm_max_evals", "lm_max_evals", "lm_tol", "fd_step", "fix_theta_z"});
    c.calibration_mode = n.str("mode", "smile");
    if (c.calibration_mode != "smile" && c.calibration_mode != "surface")
        throw ConfigError(n.key_path("mode") + ": expected smile or surface");
    c.fit.nm_max_evals = static_cast<int>(n.integer("nm_max_evals", c.fit.nm_max_evals));
    c.fit.lm_max_evals = static_cast<int>(n.integer("lm_max_evals", c.fit.lm_max_evals));
    c.fit.lm_tol = n.num("lm_tol", c.fit.lm_tol);
    c.fit.fd_step = n.num("fd_step", c.fit.fd_step);
    c.fit.fix_theta_z = n.flag("fix_theta_z", c.fit.fix_theta_z);
}

SimulationSpec parse_simulation(const Node& n) {
    n.allow({"n_paths", "seed", "threads", "stationary_start", "max_activity_step", "observe", "steps", "maturities",
             "paths_out"});
    SimulationSpec s;
    const auto paths = n.integer("n_paths", 0);
    if (paths <= 0) throw ConfigError(n.key_path("n_paths") + ": must be a positive integer");
    s.n_paths = static_cast<std::size_t>(paths);
    const auto seed = n.integer("seed", 1);
    if (seed < 0) throw ConfigError(n.key_path("seed") + ": must be >= 0");
    s.seed = static_cast<std::uint64_t>(seed);
    const auto threads = n.integer("threads", 0);
    if (threads < 0) throw ConfigError(n.key_path("threads") + ": must be >= 0");
    s.threads = static_cast<unsigned>(threads);
    s.stationary_start = n.flag("stationary_start", false);
    s.max_activity_step = n.num("max_activity_step", s.max_activity_step);
    s.observe = n.num("observe", s.observe);
    if (!(s.observe > 0.0)) throw ConfigError(n.key_path("observe") + ": must be > 0");
    s.steps = static_cast<int>(n.integer("steps", s.steps));
    if (s.steps < 1) throw ConfigError(n.key_path("steps") + ": must be >= 1");
    s.maturities = n.nums("maturities");
    for (double t : s.maturities)
        if (!(t >= s.observe)) throw ConfigError(n.key_path("maturities") + ": every maturity must be >= observe");
    s.paths_out = n.str("paths_out", "");
    return s;
}

}  // namespace

Config parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        const auto [line, col] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string msg = e.what();
        // Drop the library's "[json.exception.parse_error.101] " prefix.
        if (const auto p = msg.find("] "); p != std::string::npos) msg = msg.substr(p + 2);
        throw ConfigError("config syntax error: " + msg, line, col);
    }
    const Node top(root, "config");
    top.allow({"model", "expansion", "instruments", "calibration", "simulation", "physical_drift"});
    if (!top.has("model")) throw ConfigError("config.model: required block is missing");
    Config c;
    c.model = parse_model(top.child("model"));
    if (top.has("expansion")) c.expansion = parse_expansion(top.child("expansion"));
    if (top.has("instruments")) {
        const auto& arr = top.raw("instruments");
        if (!arr.is_array()) throw ConfigError("config.instruments: expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            c.instruments.push_back(parse_instrument(Node(arr[i], "config.instruments[" + std::to_string(i) + "]")));
    }
    if (top.has("calibration")) parse_calibration(top.child("calibration"), c);
    c.fit.pricing = c.expansion;
    if (top.has("simulation")) c.simulation = parse_simulation(top.child("simulation"));
    if (top.has("physical_drift")) {
        const auto n = top.child("physical_drift");
        n.allow({"times", "values"});
        PiecewiseLinear h{n.nums("times"), n.nums("values")};
        if (h.times.empty() || h.times.size() != h.values.size())
            throw ConfigError("config.physical_drift: times and values must be non-empty and of equal length");
        c.physical_drift = std::move(h);
    }
    return c;
}

Config load_config(const std::string& path) { return parse_config(read_file(path)); }

MarketData parse_market(std::string_view text) {
    MarketData m;
    std::vector<double> ft, fv, dt, dv;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

        std::vector<std::string> fields;
        std::vector<int> cols;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            auto f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            const auto b = f.find_first_not_of(" \t");
            const auto e = f.find_last_not_of(" \t");
            cols.push_back(static_cast<int>(start + (b == std::string_view::npos ? 0 : b)) + 1);
            fields.emplace_back(b == std::string_view::npos ? std::string_view{} : f.substr(b, e - b + 1));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        auto value = [&](std::size_t i) {
            const std::string& f = fields[i];
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(f, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != f.size() || !std::isfinite(v))
                throw ConfigError("market file: '" + f + "' is not a number", line_no, cols[i]);
            return v;
        };
        auto arity = [&](std::size_t lo, std::size_t hi) {
            if (fields.size() < lo || fields.size() > hi)
                throw ConfigError("market file: row '" + fields[0] + "' expects " + std::to_string(lo - 1) +
                                      (lo == hi ? "" : " or " + std::to_string(hi - 1)) + " values, got " +
                                      std::to_string(fields.size() - 1),
                                  line_no, 1);
        };
        const std::string& kind = fields[0];
        if (kind == "futures" || kind == "discount") {
            arity(3, 3);
            (kind == "futures" ? ft : dt).push_back(value(1));
            (kind == "futures" ? fv : dv).push_back(value(2));
        } else if (kind == "quote") {
            arity(5, 7);
            if (fields.size() == 6) throw ConfigError("market file: quote row has a bid but no ask", line_no, cols[5]);
            Quote q;
            q.expiry = value(1);
            q.maturity = value(2);
            q.strike = value(3);
            q.implied_vol = value(4);
            if (fields.size() == 7) {
                q.bid = value(5);
                q.ask = value(6);
            }
            m.quotes.push_back(q);
        } else {
            throw ConfigError("market file: unknown row type '" + kind + "' (expected futures, discount or quote)",
                              line_no, cols[0]);
        }
    }
    if (ft.empty()) throw ConfigError("market file: at least one futures row is required");
    try {
        m.futures = Curve(ft, fv);
        if (!dt.empty()) m.discount = Curve(dt, dv);
        m.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("market file: ") + e.what());
    }
    return m;
}

MarketData load_market(const std::string& path) { return parse_market(read_file(path)); }

namespace {

// Round to the 12 significant digits used for all CLI output.
double r12(double v) { return std::stod(fmt(v)); }

std::vector<double> r12(std::vector<double> v) {
    for (double& x : v) x = r12(x);
    return v;
}

}  // namespace

std::string model_json(const ModelState& s) {
    json sub;
    const auto& sp = s.tuple.sub;
    sub["family"] = family_name(sp.family);
    sub["gamma"] = r12(sp.gamma);
    switch (sp.family) {
        case Family::no_jumps: break;
        case Family::tempered_stable:
            sub["c"] = r12(sp.c);
            sub["p"] = r12(sp.p);
            sub["eta"] = r12(sp.eta);
            break;
        case Family::compound_poisson_exp:
            sub["alpha"] = r12(sp.alpha);
            sub["eta"] = r12(sp.eta);
            break;
        case Family::inverse_gaussian:
            sub["mu"] = r12(sp.mu);
            sub["nu"] = r12(sp.nu_ig);
            break;
        case Family::gamma:
            sub["c"] = r12(sp.c);
            sub["eta"] = r12(sp.eta);
            break;
    }
    json m;
    m["kappa"] = r12(s.tuple.kappa);
    m["theta"] = r12(s.tuple.theta);
    m["sigma"] = r12(s.tuple.sigma);
    m["x0"] = r12(s.x0);
    m["subordinator"] = sub;
    if (s.sv) {
        json v;
        v["kappa"] = r12(s.sv->kappa);
        v["theta"] = r12(s.sv->theta);
        v["sigma"] = r12(s.sv->sigma);
        v["z0"] = r12(s.sv->z0);
        v["a_breaks"] = r12(s.sv->a_breaks);
        v["a_levels"] = r12(s.sv->a_levels);
        m["sv"] = v;
    }
    json root;
    root["model"] = m;
    return root.dump(2);
}

}  // namespace subou::cli
