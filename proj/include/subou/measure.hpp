#pragma once

#include <string>
#include <vector>

#include "subou/subou.hpp"

namespace subou {

struct Verdict {
    bool equivalent = false;
    std::string reason;  // empty when equivalent
};

// Whether the laws of the subordinate processes with tuples tq and tp are
// equivalent: gamma sigma^2 must agree, and for infinite-activity jumps so must
// p and C sigma^{2p}. Mixed finite/infinite activity is never equivalent.
Verdict check_equivalence(const GeneratingTuple& tq, const GeneratingTuple& tp, double tol = 1e-9);

// Piecewise-linear function of time through (times[i], values[i]), flat beyond the last knot.
struct PiecewiseLinear {
    std::vector<double> times;
    std::vector<double> values;

    [[nodiscard]] double operator()(double t) const;
};

// Equivalence with a drift change H of the Brownian part: H must vanish when
// gamma == 0, start at H(0) = 0, and gamma_P sigma_P^2 must equal gamma sigma^2.
Verdict check_physical_drift(const GeneratingTuple& tq, const GeneratingTuple& tp, const PiecewiseLinear& h,
                             double tol = 1e-9);

}  // namespace subou
