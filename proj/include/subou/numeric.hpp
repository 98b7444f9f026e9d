#pragma once

#include <cmath>
#include <numbers>

namespace subou {

inline constexpr double kSqrtPi = 1.7724538509055160273;
inline constexpr double kSqrt2 = std::numbers::sqrt2;
// Cramer's inequality constant: |H_n(x)| e^{-x^2/2} <= K sqrt(2^n n!).
inline constexpr double kCramer = 1.0864;

// Neumaier (improved Kahan-Babuska) running sum. All series in the library
// accumulate through this type.
class CompensatedSum {
public:
    constexpr CompensatedSum() = default;
    constexpr explicit CompensatedSum(double init) : sum_(init) {}

    CompensatedSum& operator+=(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    [[nodiscard]] constexpr double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Standard normal CDF through erfc; relative accuracy holds in both tails.
inline double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / kSqrt2); }

}  // namespace subou
