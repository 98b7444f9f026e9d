#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "subou/calibrate.hpp"
#include "subou/errors.hpp"

using namespace subou;

namespace {

ModelState ig_model() {
    ModelState s;
    s.tuple.kappa = 1.0;
    s.tuple.theta = 0.0;
    s.tuple.sigma = 0.5;
    s.tuple.sub = SubordinatorSpec::inverse_gaussian(0.1, 1.0, 1.0);
    return s;
}

MarketData synthetic_smile(const ModelState& truth, double t) {
    MarketData m;
    m.futures = Curve::flat(100.0);
    m.discount = Curve({0.0, 3.0}, {1.0, 0.94});
    for (double mny : {0.6, 0.8, 0.9, 1.0, 1.1, 1.25, 1.5, 1.8}) {
        Quote q;
        q.expiry = t;
        q.maturity = t + 1.0 / 12;
        q.strike = 100.0 * mny;
        m.quotes.push_back(q);
    }
    const auto iv = model_implied_vols(truth, m);
    for (std::size_t i = 0; i < iv.size(); ++i) m.quotes[i].implied_vol = iv[i];
    return m;
}

}  // namespace

TEST(Black76, RoundTripAndLimits) {
    for (auto type : {OptionType::put, OptionType::call}) {
        for (double k : {50.0, 90.0, 100.0, 130.0, 200.0}) {
            const double p = black76_price(100.0, k, 0.3, 0.8, 0.97, type);
            EXPECT_NEAR(implied_vol(p, 100.0, k, 0.8, 0.97, type), 0.3, 1e-10);
        }
    }
    const double t = 0.25, vol = 0.1;  // vol sqrt(t) = 0.05
    const double atm = black76_price(100.0, 100.0, vol, t, 0.9, OptionType::call);
    EXPECT_NEAR(atm / (0.9 * 100.0 * vol * std::sqrt(t / (2 * std::numbers::pi))), 1.0, 0.01);
    EXPECT_NEAR(black76_price(100.0, 1e-9, 0.3, 1.0, 0.9, OptionType::call), 90.0, 1e-8);
    EXPECT_THROW(implied_vol(95.0, 100.0, 100.0, 1.0, 0.9, OptionType::call), DomainError);
    EXPECT_THROW(implied_vol(0.0, 100.0, 100.0, 1.0, 0.9, OptionType::put), DomainError);
}

TEST(Calibrate, ObjectiveInvariantUnderQuoteRelabeling) {
    const auto truth = ig_model();
    auto m = synthetic_smile(truth, 0.5);
    auto other = ig_model();
    other.tuple.sigma = 0.6;
    const auto a = model_implied_vols(other, m);
    auto shuffled = m;
    std::mt19937 rng(4);
    std::vector<std::size_t> perm(m.quotes.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled.quotes[i] = m.quotes[perm[i]];
    const auto b = model_implied_vols(other, shuffled);
    ASSERT_EQ(b.size(), m.quotes.size());
    for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_EQ(b[i], a[perm[i]]);
}

TEST(Calibrate, SmileRoundTrip) {
    const auto truth = ig_model();
    const auto m = synthetic_smile(truth, 0.5);
    auto start = truth;
    start.tuple.kappa *= 1.3;
    start.tuple.theta = 0.1;
    start.tuple.sigma *= 0.7;
    start.tuple.sub.gamma *= 1.3;
    start.tuple.sub.mu *= 0.7;
    start.tuple.sub.nu_ig *= 1.3;
    const auto fit = calibrate_smile(m, start);
    EXPECT_LT(fit.report.rmse, 1e-6) << fit.report.message;
    EXPECT_EQ(fit.report.residuals.size(), m.quotes.size());
}

TEST(Calibrate, RejectsTooFewQuotes) {
    auto m = synthetic_smile(ig_model(), 0.5);
    m.quotes.resize(4);
    EXPECT_THROW(calibrate_smile(m, ig_model()), DomainError);
}
