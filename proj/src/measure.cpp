#include "subou/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "subou/errors.hpp"

namespace subou {

namespace {

bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

Verdict check_equivalence(const GeneratingTuple& tq, const GeneratingTuple& tp, double tol) {
    if (!(tol >= 0.0)) throw DomainError("check_equivalence: tol must be >= 0");
    tq.validate();
    tp.validate();
    const double dq = tq.sub.gamma * tq.sigma * tq.sigma;
    const double dp = tp.sub.gamma * tp.sigma * tp.sigma;
    if (!close(dq, dp, tol))
        return {false, "gamma sigma^2 differs (" + num(dq) + " vs " + num(dp) + ")"};
    const bool iq = tq.sub.infinite_activity();
    const bool ip = tp.sub.infinite_activity();
    if (iq != ip) return {false, "finite vs infinite activity"};
    if (!iq) return {true, {}};
    const auto a = tq.sub.ts();
    const auto b = tp.sub.ts();
    if (!close(a.p, b.p, tol)) return {false, "p != p' (" + num(a.p) + " vs " + num(b.p) + ")"};
    const double sq = a.c * std::pow(tq.sigma, 2.0 * a.p);
    const double sp = b.c * std::pow(tp.sigma, 2.0 * b.p);
    if (!close(sq, sp, tol)) return {false, "C sigma^{2p} differs (" + num(sq) + " vs " + num(sp) + ")"};
    return {true, {}};
}

double PiecewiseLinear::operator()(double t) const {
    if (times.empty()) return 0.0;
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return values[i - 1] + w * (values[i] - values[i - 1]);
}

Verdict check_physical_drift(const GeneratingTuple& tq, const GeneratingTuple& tp, const PiecewiseLinear& h,
                             double tol) {
    if (h.times.size() != h.values.size()) throw DomainError("drift knots and values differ in length");
    for (std::size_t i = 1; i < h.times.size(); ++i)
        if (!(h.times[i] > h.times[i - 1])) throw DomainError("drift knots must be increasing");
    if (!h.times.empty() && h.times.front() > 0.0) throw DomainError("drift knots must start at t = 0");
    const bool nonzero = std::any_of(h.values.begin(), h.values.end(), [&](double v) { return std::abs(v) > tol; });
    if (tq.sub.gamma == 0.0 && nonzero) return {false, "pure-jump drift: H must vanish when gamma = 0"};
    if (std::abs(h(0.0)) > tol) return {false, "H(0) != 0"};
    return check_equivalence(tq, tp, tol);
}

}  // namespace subou
