#include "subou/market.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subou/errors.hpp"

namespace subou {

Curve::Curve(std::vector<double> times, std::vector<double> values) : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size()) throw DomainError("curve times and values differ in length");
    if (times_.empty()) throw DomainError("curve needs at least one point");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) throw DomainError("curve values must be positive");
        if (!std::isfinite(times_[i]) || times_[i] < 0.0) throw DomainError("curve times must be >= 0");
        if (i > 0 && !(times_[i] > times_[i - 1])) throw DomainError("curve times must be increasing");
    }
    logs_.resize(values_.size());
    std::transform(values_.begin(), values_.end(), logs_.begin(), [](double v) { return std::log(v); });
}

Curve Curve::flat(double value) { return Curve({0.0}, {value}); }

double Curve::operator()(double t) const {
    if (times_.empty()) throw DomainError("empty curve");
    if (t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times_.begin());
    const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
    return std::exp(logs_[i - 1] + w * (logs_[i] - logs_[i - 1]));
}

void MarketData::validate() const {
    if (futures.empty()) throw DomainError("market data has no futures curve");
    for (double b : discount.values())
        if (b > 1.0) throw DomainError("discount factors must lie in (0, 1]");
    for (std::size_t i = 0; i < quotes.size(); ++i) {
        const auto& q = quotes[i];
        if (!(q.expiry > 0.0) || !(q.maturity >= q.expiry) || !(q.strike > 0.0) || !(q.implied_vol >= 0.0))
            throw DomainError("quote " + std::to_string(i) + " out of range (need 0 < t <= t*, K > 0, vol >= 0)");
    }
}

}  // namespace subou
