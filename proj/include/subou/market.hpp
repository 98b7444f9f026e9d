#pragma once

#include <vector>

namespace subou {

// Positive term structure with log-linear interpolation; flat beyond the ends.
class Curve {
public:
    Curve() = default;
    Curve(std::vector<double> times, std::vector<double> values);
    static Curve flat(double value);

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] bool empty() const noexcept { return times_.empty(); }
    [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<double> times_;
    std::vector<double> values_;
    std::vector<double> logs_;
};

struct Quote {
    double expiry = 0.0;    // option expiry t
    double maturity = 0.0;  // futures maturity t* >= t
    double strike = 0.0;
    double implied_vol = 0.0;
    double bid = 0.0;
    double ask = 0.0;
};

struct MarketData {
    Curve futures;   // F(0, t)
    Curve discount;  // B(0, t); empty means B == 1
    std::vector<Quote> quotes;

    [[nodiscard]] double forward(double t) const { return futures(t); }
    [[nodiscard]] double discount_factor(double t) const { return discount.empty() ? 1.0 : discount(t); }
    // Throws DomainError when a curve value or quote is out of range.
    void validate() const;
};

}  // namespace subou
