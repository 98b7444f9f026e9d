#pragma once

#include <functional>
#include <span>
#include <vector>

namespace subou {

struct QuadratureSettings {
    double abs_tol = 1e-13;
    double rel_tol = 1e-10;
    unsigned max_depth = 20;
};

// Adaptive 15-point Gauss-Kronrod on [a, b] (finite). Throws QuadratureError
// when the error estimate misses both tolerances.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSettings& settings = {});

struct Segment {
    std::function<double(double)> f;
    double a = 0.0;
    double b = 0.0;
};
// Sum of adaptive integrals of several integrands, with the tolerance applied to
// the total rather than to each segment.
double integrate_segments(std::span<const Segment> segs, const QuadratureSettings& settings = {});
// Sum of adaptive integrals over consecutive pieces [pts[i], pts[i+1]].
double integrate_pieces(const std::function<double(double)>& f, std::span<const double> pts,
                        const QuadratureSettings& settings = {});

// integral over [a, inf) through s = a + (1 - v)/v on (0, 1].
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        const QuadratureSettings& settings = {});

// Composite Simpson weights for n (odd, >= 3) equally spaced nodes on [a, b].
std::vector<double> simpson_weights(int n, double a, double b);

}  // namespace subou
