#include "subou/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>
#include <vector>
#include <algorithm>

#include "subou/errors.hpp"

namespace subou {

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureSettings& settings) {
    if (a == b) return 0.0;
    double err = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, settings.max_depth, settings.rel_tol, &err, &l1);
    if (!std::isfinite(value)) throw QuadratureError("integrand produced a non-finite value", err);
    if (err > settings.abs_tol && err > settings.rel_tol * std::abs(value) && err > settings.rel_tol * l1) {
        throw QuadratureError("adaptive quadrature missed tolerance on [" + std::to_string(a) + ", " +
                                  std::to_string(b) + "]",
                              err);
    }
    return value;
}

double integrate_segments(std::span<const Segment> segs, const QuadratureSettings& settings) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    // One fixed 15-point pass sizes the whole integral; each segment then only has
    // to resolve its share of the global tolerance, so negligible pieces stop early.
    std::vector<double> rough(segs.size(), 0.0);
    double scale = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& s = segs[i];
        if (s.a == s.b) continue;
        double err = 0.0;
        double l1 = 0.0;
        rough[i] = GK::integrate(s.f, s.a, s.b, 0, 0.0, &err, &l1);
        if (std::isfinite(l1)) scale += l1;
    }
    const double target = std::max(settings.abs_tol, settings.rel_tol * scale);
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& s = segs[i];
        if (s.a == s.b) continue;
        double err = 0.0;
        double l1 = 0.0;
        // Boost's tolerance is relative to the local estimate; convert the absolute share.
        const double share = target / static_cast<double>(segs.size());
        const double rel = std::min(0.5, share / std::max(std::abs(rough[i]), 1e-300));
        const double v = GK::integrate(s.f, s.a, s.b, settings.max_depth, rel, &err, &l1);
        if (!std::isfinite(v)) throw QuadratureError("integrand produced a non-finite value", err);
        total += v;
        total_err += err;
    }
    if (total_err > settings.abs_tol && total_err > settings.rel_tol * std::max(std::abs(total), scale)) {
        throw QuadratureError("adaptive quadrature missed tolerance", total_err);
    }
    return total;
}

double integrate_pieces(const std::function<double(double)>& f, std::span<const double> pts,
                        const QuadratureSettings& settings) {
    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) segs.push_back({f, pts[i], pts[i + 1]});
    return integrate_segments(segs, settings);
}

double integrate_to_inf(const std::function<double(double)>& f, double a, const QuadratureSettings& settings) {
    auto g = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double s = a + (1.0 - v) / v;
        const double val = f(s);
        return val == 0.0 ? 0.0 : val / (v * v);
    };
    return integrate(g, 0.0, 1.0, settings);
}

std::vector<double> simpson_weights(int n, double a, double b) {
    if (n < 3 || n % 2 == 0) throw DomainError("simpson_weights: node count must be odd and >= 3");
    const double h = (b - a) / (n - 1);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        w[i] = c * h / 3.0;
    }
    return w;
}

}  // namespace subou
