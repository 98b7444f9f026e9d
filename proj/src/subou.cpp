#include "subou/subou.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "subou/errors.hpp"
#include "subou/kernels.hpp"
#include "subou/numeric.hpp"
#include "subou/special_fn.hpp"

namespace subou {

void GeneratingTuple::validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be > 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be > 0");
    if (!std::isfinite(theta)) throw DomainError("theta must be finite");
    sub.validate();
}

double GeneratingTuple::z(double x) const noexcept { return std::sqrt(kappa) / sigma * (x - theta); }

double GeneratingTuple::eigenvalue(int n) const { return laplace_exponent(sub, kappa * n); }

void ExpansionConfig::validate() const {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    if (!(tol > 0.0)) throw DomainError("tol must be > 0");
    if (sv_nodes < 3 || sv_nodes % 2 == 0) throw DomainError("sv_nodes must be odd and >= 3");
    if (sv_max_nodes < sv_nodes) throw DomainError("sv_max_nodes must be >= sv_nodes");
    if (!(sv_rel_tol > 0.0) || !(sv_tail_prob > 0.0)) throw DomainError("sv tolerances must be > 0");
}

double stationary_density(const GeneratingTuple& tuple, double x) {
    const double d = x - tuple.theta;
    return std::sqrt(tuple.kappa / (std::numbers::pi * tuple.sigma * tuple.sigma)) *
           std::exp(-tuple.kappa * d * d / (tuple.sigma * tuple.sigma));
}

double eigenfunction(double x, int n, const GeneratingTuple& tuple) {
    if (n < 0) throw DomainError("eigenfunction: n must be >= 0");
    return normalized_hermite(tuple.z(x), n).back();
}

namespace {

// Mean and variance of the OU transition over internal time s.
inline void ou_moments(const GeneratingTuple& tp, double s, double x, double& mean, double& var) {
    mean = tp.theta + (x - tp.theta) * std::exp(-tp.kappa * s);
    var = tp.sigma * tp.sigma * (-std::expm1(-2.0 * tp.kappa * s)) / (2.0 * tp.kappa);
}

}  // namespace

double ou_density(const GeneratingTuple& tuple, double t, double x, double y) {
    if (!(t > 0.0)) throw DomainError("ou_density: t must be > 0");
    double mean = 0.0;
    double var = 0.0;
    ou_moments(tuple, t, x, mean, var);
    const double d = y - mean;
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

namespace {

// integral over s in (0, inf) of g(s) nu(s) ds with s = u^2 near zero and s = 1/v on the tail.
double integrate_against_levy(const GeneratingTuple& tuple, const std::function<double(double)>& g, double y,
                              const QuadratureSettings& quad) {
    const auto& sub = tuple.sub;
    if (!sub.has_jumps()) return 0.0;
    auto head = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double s = u * u;
        const double v = g(s);
        return v == 0.0 ? 0.0 : v * levy_density(sub, s) * 2.0 * u;
    };
    auto tail = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double s = 1.0 / v;
        const double gv = g(s);
        return gv == 0.0 ? 0.0 : gv * levy_density(sub, s) / (v * v);
    };
    // The integrand in u peaks near u ~ |y| / sigma; give the adaptive rule breakpoints around it.
    const double uc = std::abs(y) / tuple.sigma;
    std::vector<double> pts{0.0};
    for (double f : {0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double p = uc * f;
        if (p > pts.back() && p < 1.0) pts.push_back(p);
    }
    pts.push_back(1.0);
    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) segs.push_back({head, pts[i], pts[i + 1]});
    segs.push_back({tail, 0.0, 1.0});
    return integrate_segments(segs, quad);
}

}  // namespace

double subou_levy_density(const GeneratingTuple& tuple, double x, double y, const QuadratureSettings& quad) {
    if (y == 0.0) throw DomainError("subou_levy_density: y must be nonzero");
    auto g = [&](double s) {
        double mean = 0.0;
        double var = 0.0;
        ou_moments(tuple, s, x, mean, var);
        const double d = x + y - mean;
        return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * std::numbers::pi * var);
    };
    return integrate_against_levy(tuple, g, y, quad);
}

double levy_asymptote(const GeneratingTuple& tuple, double y) {
    if (y == 0.0) throw DomainError("levy_asymptote: y must be nonzero");
    if (!tuple.sub.has_jumps()) throw UnsupportedFamilyError("levy_asymptote: subordinator has no jumps");
    const auto ts = tuple.sub.ts();
    if (!(ts.p > 0.0)) throw UnsupportedFamilyError("levy_asymptote requires p > 0");
    const double s2 = tuple.sigma * tuple.sigma;
    return ts.c * std::tgamma(ts.p + 0.5) * std::pow(2.0 * s2, ts.p) /
           (std::sqrt(std::numbers::pi) * std::pow(std::abs(y), 2.0 * ts.p + 1.0));
}

double levy_tail_up(const GeneratingTuple& tuple, double x, double y, const QuadratureSettings& quad) {
    if (!(y > 0.0)) throw DomainError("levy_tail_up: y must be > 0");
    auto g = [&](double s) {
        double mean = 0.0;
        double var = 0.0;
        ou_moments(tuple, s, x, mean, var);
        return 0.5 * std::erfc((x + y - mean) / std::sqrt(2.0 * var));
    };
    return integrate_against_levy(tuple, g, y, quad);
}

double levy_tail_down(const GeneratingTuple& tuple, double x, double y, const QuadratureSettings& quad) {
    if (!(y > 0.0)) throw DomainError("levy_tail_down: y must be > 0");
    auto g = [&](double s) {
        double mean = 0.0;
        double var = 0.0;
        ou_moments(tuple, s, x, mean, var);
        return 0.5 * std::erfc((mean - (x - y)) / std::sqrt(2.0 * var));
    };
    return integrate_against_levy(tuple, g, y, quad);
}

std::vector<double> exp_coeffs(const GeneratingTuple& tuple, int count) {
    std::vector<double> c(static_cast<std::size_t>(std::max(count, 0)));
    const double r = tuple.sigma / std::sqrt(2.0 * tuple.kappa);
    double v = 1.0;
    for (int n = 0; n < count; ++n) {
        if (n > 0) v *= r / std::sqrt(static_cast<double>(n));
        c[n] = v;
    }
    return c;
}

double exp_prefactor(const GeneratingTuple& tuple) noexcept {
    return std::exp(tuple.theta + tuple.sigma * tuple.sigma / (4.0 * tuple.kappa));
}

double exp_coeff_tail(const GeneratingTuple& tuple, int m) {
    const double r = tuple.sigma / std::sqrt(2.0 * tuple.kappa);
    double log_c = m * std::log(r) - 0.5 * std::lgamma(m + 1.0);
    double explicit_part = 0.0;
    int k = m;
    // Sum explicitly until the term ratio r / sqrt(k+1) drops below 1/2.
    while (r / std::sqrt(k + 1.0) >= 0.5) {
        explicit_part += std::exp(log_c);
        log_c += std::log(r) - 0.5 * std::log(k + 1.0);
        ++k;
    }
    return explicit_part + std::exp(log_c) / (1.0 - r / std::sqrt(k + 1.0));
}

namespace {

// Block-doubling bound: sum_{n in [L, 2L)} w(n) <= L w(L) for nonincreasing w.
double block_tail(const std::function<double(int)>& w, int from) {
    double head = 0.0;
    long long l = from;
    if (l == 0) {
        head = w(0);
        l = 1;
    }
    double sum = 0.0;
    double prev = 0.0;
    int growing = 0;
    for (int k = 0; k < 60 && l < (1LL << 30); ++k, l *= 2) {
        const double block = static_cast<double>(l) * w(static_cast<int>(l));
        if (!std::isfinite(block)) break;
        sum += block;
        if (block == 0.0) return head + sum;
        if (prev > 0.0) {
            const double rho = block / prev;
            if (block < 1e-3 * sum && rho < 0.5) return head + sum + block * rho / (1.0 - rho);
            growing = rho >= 1.0 ? growing + 1 : 0;
            if (growing >= 4) break;
        }
        prev = block;
    }
    throw ConvergenceError("eigenvalue weight tail does not decay", sum, from);
}

}  // namespace

double weight_tail_bound(const std::function<double(int)>& w, int from, double geometric_rate) {
    if (from < 0) throw DomainError("weight_tail_bound: from must be >= 0");
    if (geometric_rate > 0.0) {
        const double geometric = std::exp(-geometric_rate * from) / -std::expm1(-geometric_rate);
        try {
            return std::min(geometric, block_tail(w, from));
        } catch (const ConvergenceError&) {
            return geometric;
        }
    }
    return block_tail(w, from);
}

WeightTable truncate_weights(const std::function<double(int)>& w, double scale, const ExpansionConfig& cfg,
                             double geometric_rate) {
    WeightTable out;
    auto fits = [&](int m, double& tail) {
        tail = weight_tail_bound(w, m, geometric_rate);
        return scale * tail <= cfg.tol;
    };
    int order = cfg.n_max;
    double tail = 0.0;
    if (cfg.adaptive) {
        int lo = 0;
        int hi = std::min(32, cfg.n_max);
        while (!fits(hi, tail) && hi < cfg.n_max) {
            lo = hi;
            hi = std::min(2 * hi, cfg.n_max);
        }
        if (scale * tail <= cfg.tol) {
            double t = tail;
            while (hi - lo > 1) {
                const int mid = lo + (hi - lo) / 2;
                if (fits(mid, t)) {
                    hi = mid;
                    tail = t;
                } else {
                    lo = mid;
                }
            }
        }
        order = hi;
    } else {
        fits(order, tail);
    }
    out.tail = tail;
    out.certified = scale * tail <= cfg.tol;
    out.w.resize(static_cast<std::size_t>(order));
    for (int n = 0; n < order; ++n) out.w[n] = w(n);
    return out;
}

WeightTable eigen_weights(const GeneratingTuple& tuple, double t, double scale, const ExpansionConfig& cfg) {
    auto w = [&](int n) { return std::exp(-tuple.eigenvalue(n) * t); };
    return truncate_weights(w, scale, cfg, tuple.sub.gamma * tuple.kappa * t);
}

double truncation_bound(const GeneratingTuple& tuple, double t, double f_norm, double x, int m) {
    if (!(t > 0.0)) throw DomainError("truncation_bound: t must be > 0");
    const double z = tuple.z(x);
    auto w = [&](int n) { return std::exp(-tuple.eigenvalue(n) * t); };
    return kCramer * f_norm * std::exp(0.5 * z * z) * weight_tail_bound(w, m, tuple.sub.gamma * tuple.kappa * t);
}

double semigroup_apply(const GeneratingTuple& tuple, double t, std::span<const double> coeffs, double x,
                       const ExpansionConfig& cfg) {
    if (!(t >= 0.0)) throw DomainError("semigroup_apply: t must be >= 0");
    const double z = tuple.z(x);
    double norm2 = 0.0;
    for (double f : coeffs) norm2 += f * f;
    const double scale = kCramer * std::sqrt(norm2) * std::exp(0.5 * z * z);
    std::size_t order = coeffs.size();
    std::vector<double> terms;
    if (t > 0.0 && scale > 0.0) {
        const auto wt = eigen_weights(tuple, t, scale, cfg);
        order = std::min<std::size_t>(order, wt.w.size());
        terms.resize(order);
        for (std::size_t n = 0; n < order; ++n) terms[n] = wt.w[n] * coeffs[n];
        if (cfg.adaptive && !wt.certified && order < coeffs.size()) {
            std::vector<double> h(order);
            normalized_hermite(z, h);
            double block = 0.0;
            for (std::size_t n = order / 2; n < order; ++n) block += terms[n] * h[n];
            if (std::abs(block) > cfg.tol) {
                throw ConvergenceError("semigroup expansion did not converge within n_max terms",
                                       scale * wt.tail, static_cast<int>(order));
            }
        }
    } else {
        terms.assign(coeffs.begin(), coeffs.end());
    }
    double out = 0.0;
    kernels::hermite_series(terms, std::span<const double>(&z, 1), std::span<double>(&out, 1));
    return out;
}

void subou_density_batch(const GeneratingTuple& tuple, double t, double x, std::span<const double> ys,
                         std::span<double> out, const ExpansionConfig& cfg) {
    if (!(t > 0.0)) throw DomainError("subou_density: t must be > 0");
    if (out.size() < ys.size()) throw DomainError("subou_density_batch: output too short");
    if (ys.empty()) return;
    const double zx = tuple.z(x);
    // |m(y) phi_n(x) phi_n(y)| <= K^2 sqrt(kappa/pi)/sigma e^{zx^2/2} e^{-zy^2/2}; take the worst y.
    double zy_min = std::abs(tuple.z(ys[0]));
    for (double y : ys) zy_min = std::min(zy_min, std::abs(tuple.z(y)));
    const double scale = kCramer * kCramer * std::sqrt(tuple.kappa / std::numbers::pi) / tuple.sigma *
                         std::exp(0.5 * zx * zx - 0.5 * zy_min * zy_min);
    const auto wt = eigen_weights(tuple, t, scale, cfg);
    std::vector<double> coeffs(wt.w.size());
    normalized_hermite(zx, coeffs);
    for (std::size_t n = 0; n < coeffs.size(); ++n) coeffs[n] *= wt.w[n];
    if (cfg.adaptive && !wt.certified) {
        // Empirical increment test on the last block at the first y.
        const auto hy = normalized_hermite(tuple.z(ys[0]), wt.order() - 1);
        double block = 0.0;
        for (std::size_t n = coeffs.size() / 2; n < coeffs.size(); ++n) block += coeffs[n] * hy[n];
        if (std::abs(block * stationary_density(tuple, ys[0])) > cfg.tol) {
            throw ConvergenceError("density expansion did not converge within n_max terms", scale * wt.tail,
                                   wt.order());
        }
    }
    std::vector<double> zs(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) zs[i] = tuple.z(ys[i]);
    kernels::hermite_series(coeffs, zs, out);
    for (std::size_t i = 0; i < ys.size(); ++i) out[i] *= stationary_density(tuple, ys[i]);
}

double subou_density(const GeneratingTuple& tuple, double t, double x, double y, const ExpansionConfig& cfg) {
    double out = 0.0;
    subou_density_batch(tuple, t, x, std::span<const double>(&y, 1), std::span<double>(&out, 1), cfg);
    return out;
}

}  // namespace subou
