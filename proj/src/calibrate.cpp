#include "subou/calibrate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "parallel.hpp"
#include "subou/errors.hpp"
#include "subou/numeric.hpp"

namespace subou {

double black76_price(double forward, double strike, double vol, double t, double discount, OptionType type) {
    if (!(forward > 0.0) || !(strike > 0.0) || !(t > 0.0) || !(discount > 0.0) || !(vol >= 0.0))
        throw DomainError("black76_price: need F, K, t, B > 0 and vol >= 0");
    const double sd = vol * std::sqrt(t);
    double call;
    if (sd == 0.0) {
        call = std::max(forward - strike, 0.0);
    } else {
        const double d1 = (std::log(forward / strike) + 0.5 * sd * sd) / sd;
        call = forward * normal_cdf(d1) - strike * normal_cdf(d1 - sd);
    }
    const double undiscounted = type == OptionType::call ? call : call - forward + strike;
    return discount * undiscounted;
}

double implied_vol(double price, double forward, double strike, double t, double discount, OptionType type) {
    if (!(forward > 0.0) || !(strike > 0.0) || !(t > 0.0) || !(discount > 0.0))
        throw DomainError("implied_vol: need F, K, t, B > 0");
    const double intrinsic = discount * std::max(type == OptionType::call ? forward - strike : strike - forward, 0.0);
    const double upper = discount * (type == OptionType::call ? forward : strike);
    if (!(price > intrinsic) || !(price < upper))
        throw DomainError("implied_vol: price " + std::to_string(price) + " outside the no-arbitrage range (" +
                          std::to_string(intrinsic) + ", " + std::to_string(upper) + ")");
    const double tol = 1e-12 * forward;
    double lo = 0.0, hi = 1.0;
    while (black76_price(forward, strike, hi, t, discount, type) < price) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e3) throw DomainError("implied_vol: volatility above 1000");
    }
    double v = 0.5 * (lo + hi);
    const double sqt = std::sqrt(t);
    for (int i = 0; i < 200; ++i) {
        const double diff = black76_price(forward, strike, v, t, discount, type) - price;
        if (std::abs(diff) < tol) return v;
        (diff > 0.0 ? hi : lo) = v;
        const double sd = v * sqt;
        const double d1 = (std::log(forward / strike) + 0.5 * sd * sd) / sd;
        const double vega = discount * forward * sqt * std::exp(-0.5 * d1 * d1) / std::sqrt(2.0 * std::numbers::pi);
        double next = v - diff / vega;
        if (!(vega > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo < 1e-15 * std::max(1.0, v)) return next;
        v = next;
    }
    return v;
}

namespace {

struct QuoteGroup {
    double t = 0.0, t_star = 0.0;
    std::vector<std::size_t> idx;
    std::vector<double> strikes;
};

std::vector<QuoteGroup> group_quotes(const MarketData& market) {
    std::map<std::pair<double, double>, QuoteGroup> groups;
    for (std::size_t i = 0; i < market.quotes.size(); ++i) {
        const auto& q = market.quotes[i];
        auto& g = groups[{q.expiry, q.maturity}];
        g.t = q.expiry;
        g.t_star = q.maturity;
        g.idx.push_back(i);
        g.strikes.push_back(q.strike);
    }
    std::vector<QuoteGroup> out;
    for (auto& [key, g] : groups) out.push_back(std::move(g));
    return out;
}

double logit(double p) { return std::log(p / (1.0 - p)); }
double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Unconstrained coordinates for the free parameters of a model state.
class ParamMap {
public:
    ParamMap(const ModelState& init, bool with_sv, bool fix_theta_z) : base_(init), sv_(with_sv), fix_tz_(fix_theta_z) {}

    [[nodiscard]] Eigen::VectorXd encode(const ModelState& s) const {
        std::vector<double> u = {std::log(s.tuple.kappa), s.tuple.theta, std::log(s.tuple.sigma),
                                 std::sqrt(s.tuple.sub.gamma)};
        const auto& j = s.tuple.sub;
        switch (j.family) {
            case Family::no_jumps: break;
            case Family::inverse_gaussian: u.insert(u.end(), {std::log(j.mu), std::log(j.nu_ig)}); break;
            case Family::compound_poisson_exp: u.insert(u.end(), {std::log(j.alpha), std::log(j.eta)}); break;
            case Family::gamma: u.insert(u.end(), {std::log(j.c), std::log(j.eta)}); break;
            case Family::tempered_stable:
                u.push_back(std::log(j.c));
                if (j.eta > 0.0) u.push_back(std::log(j.eta));
                break;
        }
        if (sv_) {
            const auto& a = *s.sv;
            u.push_back(std::log(a.kappa));
            if (!fix_tz_) u.push_back(std::log(a.theta));
            const double frac = std::clamp(a.sigma / std::sqrt(2.0 * a.kappa * a.theta), 1e-9, 1.0 - 1e-9);
            u.push_back(logit(frac));
            u.push_back(std::log(a.z0));
            for (double l : a.a_levels) u.push_back(std::sqrt(l));
        }
        return Eigen::Map<Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size()));
    }

    [[nodiscard]] ModelState decode(const Eigen::VectorXd& u) const {
        ModelState s = base_;
        Eigen::Index k = 0;
        s.tuple.kappa = std::exp(u[k++]);
        s.tuple.theta = u[k++];
        s.tuple.sigma = std::exp(u[k++]);
        s.tuple.sub.gamma = u[k] * u[k];
        ++k;
        auto& j = s.tuple.sub;
        switch (j.family) {
            case Family::no_jumps: break;
            case Family::inverse_gaussian:
                j.mu = std::exp(u[k++]);
                j.nu_ig = std::exp(u[k++]);
                break;
            case Family::compound_poisson_exp:
                j.alpha = std::exp(u[k++]);
                j.eta = std::exp(u[k++]);
                break;
            case Family::gamma:
                j.c = std::exp(u[k++]);
                j.eta = std::exp(u[k++]);
                break;
            case Family::tempered_stable:
                j.c = std::exp(u[k++]);
                if (base_.tuple.sub.eta > 0.0) j.eta = std::exp(u[k++]);
                break;
        }
        if (sv_) {
            auto& a = *s.sv;
            a.kappa = std::exp(u[k++]);
            if (!fix_tz_) a.theta = std::exp(u[k++]);
            a.sigma = std::sqrt(2.0 * a.kappa * a.theta) * logistic(u[k++]);
            a.z0 = std::exp(u[k++]);
            for (double& l : a.a_levels) {
                l = u[k] * u[k];
                ++k;
            }
        }
        return s;
    }

private:
    ModelState base_;
    bool sv_;
    bool fix_tz_;
};

class Objective {
public:
    Objective(const MarketData& market, const ParamMap& map, const ExpansionConfig& cfg)
        : market_(market), map_(map), cfg_(cfg) {}

    // Residuals; failures to price map to a large penalty.
    Eigen::VectorXd residuals(const Eigen::VectorXd& u) {
        ++evaluations;
        const auto n = static_cast<Eigen::Index>(market_.quotes.size());
        Eigen::VectorXd r(n);
        try {
            const auto iv = model_implied_vols(map_.decode(u), market_, cfg_);
            for (Eigen::Index i = 0; i < n; ++i) r[i] = iv[i] - market_.quotes[i].implied_vol;
        } catch (const Error&) {
            r.setConstant(1.0);
        }
        const double ss = r.squaredNorm();
        if (ss < best_ss) {
            best_ss = ss;
            best_u = u;
        }
        return r;
    }
    double value(const Eigen::VectorXd& u) { return residuals(u).squaredNorm(); }

    int evaluations = 0;
    double best_ss = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_u;

private:
    const MarketData& market_;
    const ParamMap& map_;
    ExpansionConfig cfg_;
};

struct LmFunctor : Eigen::DenseFunctor<double> {
    LmFunctor(Objective& obj, int inputs, int values, double step)
        : Eigen::DenseFunctor<double>(inputs, values), obj_(obj), step_(step) {}
    int operator()(const InputType& u, ValueType& f) const {
        f = obj_.residuals(u);
        return 0;
    }
    int df(const InputType& u, JacobianType& jac) const {
        InputType v = u;
        for (Eigen::Index k = 0; k < u.size(); ++k) {
            const double h = step_ * std::max(1.0, std::abs(u[k]));
            v[k] = u[k] + h;
            const auto fp = obj_.residuals(v);
            v[k] = u[k] - h;
            const auto fm = obj_.residuals(v);
            v[k] = u[k];
            jac.col(k) = (fp - fm) / (2.0 * h);
        }
        return 0;
    }

private:
    Objective& obj_;
    double step_;
};

// Nelder-Mead on the sum of squares; returns the best vertex.
Eigen::VectorXd nelder_mead(Objective& obj, Eigen::VectorXd x0, int max_evals) {
    const Eigen::Index n = x0.size();
    std::vector<Eigen::VectorXd> p(static_cast<std::size_t>(n + 1), x0);
    std::vector<double> f(static_cast<std::size_t>(n + 1));
    for (Eigen::Index k = 0; k < n; ++k) p[static_cast<std::size_t>(k + 1)][k] += 0.1 * std::max(1.0, std::abs(x0[k]));
    for (std::size_t i = 0; i < p.size(); ++i) f[i] = obj.value(p[i]);
    int evals = static_cast<int>(n + 1);
    std::vector<std::size_t> order(p.size());
    while (evals < max_evals) {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
        if (f[worst] - f[best] <= 1e-14 * (1.0 + f[best])) break;
        Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
        for (std::size_t i : order)
            if (i != worst) c += p[i];
        c /= static_cast<double>(n);
        const Eigen::VectorXd xr = c + (c - p[worst]);
        const double fr = obj.value(xr);
        ++evals;
        if (fr < f[best]) {
            const Eigen::VectorXd xe = c + 2.0 * (c - p[worst]);
            const double fe = obj.value(xe);
            ++evals;
            if (fe < fr) {
                p[worst] = xe;
                f[worst] = fe;
            } else {
                p[worst] = xr;
                f[worst] = fr;
            }
        } else if (fr < f[second]) {
            p[worst] = xr;
            f[worst] = fr;
        } else {
            const Eigen::VectorXd xc = fr < f[worst] ? Eigen::VectorXd(c + 0.5 * (xr - c)) : Eigen::VectorXd(c + 0.5 * (p[worst] - c));
            const double fc = obj.value(xc);
            ++evals;
            if (fc < std::min(fr, f[worst])) {
                p[worst] = xc;
                f[worst] = fc;
            } else {
                for (std::size_t i = 0; i < p.size(); ++i) {
                    if (i == best) continue;
                    p[i] = p[best] + 0.5 * (p[i] - p[best]);
                    f[i] = obj.value(p[i]);
                    ++evals;
                }
            }
        }
    }
    const auto it = std::min_element(f.begin(), f.end());
    return p[static_cast<std::size_t>(it - f.begin())];
}

const char* lm_status(Eigen::LevenbergMarquardtSpace::Status s) {
    using namespace Eigen::LevenbergMarquardtSpace;
    switch (s) {
        case RelativeReductionTooSmall: return "relative reduction below tolerance";
        case RelativeErrorTooSmall: return "relative step below tolerance";
        case RelativeErrorAndReductionTooSmall: return "step and reduction below tolerance";
        case CosinusTooSmall: return "gradient orthogonal to residuals";
        case TooManyFunctionEvaluation: return "evaluation budget exhausted";
        case FtolTooSmall: return "ftol too small";
        case XtolTooSmall: return "xtol too small";
        case GtolTooSmall: return "gtol too small";
        case ImproperInputParameters: return "improper input parameters";
        default: return "stopped";
    }
}

FitResult fit(const MarketData& market, const ModelState& initial, bool with_sv, const FitOptions& opt) {
    market.validate();
    initial.validate();
    if (market.quotes.empty()) throw DomainError("calibration needs quotes");
    const ParamMap map(initial, with_sv, opt.fix_theta_z);
    Eigen::VectorXd u = map.encode(initial);
    if (market.quotes.size() < static_cast<std::size_t>(u.size()))
        throw DomainError("calibration needs at least as many quotes as free parameters (" + std::to_string(u.size()) +
                          ")");
    // Abort early when the starting model cannot price the quotes.
    (void)model_implied_vols(initial, market, opt.pricing);

    Objective obj(market, map, opt.pricing);
    if (opt.nm_max_evals > 0) u = nelder_mead(obj, u, opt.nm_max_evals);

    LmFunctor functor(obj, static_cast<int>(u.size()), static_cast<int>(market.quotes.size()), opt.fd_step);
    Eigen::LevenbergMarquardt<LmFunctor> lm(functor);
    lm.setMaxfev(opt.lm_max_evals);
    lm.setXtol(opt.lm_tol);
    lm.setFtol(opt.lm_tol);
    lm.setGtol(0.0);
    const auto status = lm.minimize(u);

    FitResult out;
    const Eigen::VectorXd best = obj.best_u.size() == u.size() ? obj.best_u : u;
    out.state = map.decode(best);
    const auto r = obj.residuals(best);
    out.report.residuals.assign(r.data(), r.data() + r.size());
    out.report.rmse = std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));
    out.report.evaluations = obj.evaluations;
    out.report.iterations = static_cast<int>(lm.iterations());
    using namespace Eigen::LevenbergMarquardtSpace;
    out.report.converged = status == RelativeReductionTooSmall || status == RelativeErrorTooSmall ||
                           status == RelativeErrorAndReductionTooSmall || status == CosinusTooSmall ||
                           status == FtolTooSmall || status == XtolTooSmall || status == GtolTooSmall;
    out.report.message = lm_status(status);
    return out;
}

}  // namespace

std::vector<double> model_implied_vols(const ModelState& state, const MarketData& market, const ExpansionConfig& cfg) {
    std::vector<double> out(market.quotes.size());
    const auto groups = group_quotes(market);
    detail::parallel_for(groups.size(), 0, [&](std::size_t begin, std::size_t end) {
      for (std::size_t gi = begin; gi < end; ++gi) {
        const auto& g = groups[gi];
        const auto puts = option_prices(state, market, g.t, g.t_star, g.strikes, OptionType::put, cfg);
        const double f = market.forward(g.t_star);
        const double b = market.discount_factor(g.t);
        for (std::size_t j = 0; j < g.idx.size(); ++j) {
            const double k = g.strikes[j];
            const auto type = k < f ? OptionType::put : OptionType::call;
            const double price = type == OptionType::put ? puts[j] : puts[j] + b * (f - k);
            out[g.idx[j]] = implied_vol(price, f, k, g.t, b, type);
        }
      }
    });
    return out;
}

FitResult calibrate_smile(const MarketData& market, const ModelState& initial, const FitOptions& opt) {
    if (initial.sv) throw DomainError("calibrate_smile takes a model without stochastic activity");
    return fit(market, initial, false, opt);
}

FitResult calibrate_surface(const MarketData& market, const ModelState& initial, const FitOptions& opt) {
    if (!initial.sv) throw DomainError("calibrate_surface needs a CIR activity in the initial state");
    ModelState start = initial;
    auto& act = *start.sv;
    if (act.a_levels.empty()) {
        std::vector<double> expiries;
        for (const auto& q : market.quotes) expiries.push_back(q.expiry);
        std::sort(expiries.begin(), expiries.end());
        expiries.erase(std::unique(expiries.begin(), expiries.end()), expiries.end());
        act.a_breaks = {0.0};
        for (std::size_t i = 0; i + 1 < expiries.size(); ++i) act.a_breaks.push_back(expiries[i]);
        act.a_levels.assign(act.a_breaks.size(), 0.0);
    }
    // Square-root coordinates have zero slope at 0; start levels slightly inside.
    for (double& l : act.a_levels) l = std::max(l, 1e-4);
    return fit(market, start, true, opt);
}

}  // namespace subou
