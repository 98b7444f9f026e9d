#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/hermite.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "subou/errors.hpp"
#include "subou/special_fn.hpp"
#include "subou/subou.hpp"

using namespace subou;

namespace {

double raw_norm(int n) { return std::sqrt(std::ldexp(std::tgamma(n + 1.0), n)); }

// Independent oracle: integral_{-inf}^{w} f(x) e^{-x^2} dx by tanh-sinh on a finite window.
double gauss_integral(const std::function<double(double)>& f, double w) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double lo = std::min(w, 0.0) - 12.0;
    return ts.integrate([&](double x) { return f(x) * std::exp(-x * x); }, lo, w);
}

}  // namespace

TEST(Hermite, LowOrders) {
    EXPECT_EQ(hermite_eval(0.7, 0).values.at(0), 1.0);
    EXPECT_EQ(hermite_eval(2.0, 1).values.at(1), 4.0);
    EXPECT_DOUBLE_EQ(hermite_eval(1.0, 3).values.at(3), 8.0 - 12.0);
}

TEST(Hermite, MatchesMonomialExpansion) {
    for (double x : {-4.0, -2.5, -1.0, -0.3, 0.0, 0.6, 1.7, 3.2, 4.0}) {
        const auto t = hermite_eval(x, 8);
        for (int n = 0; n <= 8; ++n) {
            // H_n(x) = n! sum_k (-1)^k (2x)^{n-2k} / (k! (n-2k)!)
            double ref = 0.0;
            for (int k = 0; 2 * k <= n; ++k) {
                ref += std::pow(-1.0, k) * std::pow(2.0 * x, n - 2 * k) /
                       (std::tgamma(k + 1.0) * std::tgamma(n - 2 * k + 1.0));
            }
            ref *= std::tgamma(n + 1.0);
            EXPECT_NEAR(t.values[n], ref, 1e-10 * std::max(1.0, std::abs(ref))) << "n=" << n << " x=" << x;
            EXPECT_NEAR(t.values[n], boost::math::hermite(n, x), 1e-10 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST(Hermite, NormalizedAgreesWithRaw) {
    for (double z : {-3.0, -0.4, 0.0, 1.1, 2.9}) {
        const auto h = normalized_hermite(z, 30);
        const auto raw = hermite_eval(z, 30);
        for (int n = 0; n <= 30; ++n) {
            EXPECT_NEAR(h[n], raw.values[n] / raw_norm(n), 1e-11 * std::max(1.0, std::abs(h[n])));
        }
    }
}

TEST(Hermite, NormalizedStaysFiniteAtHighOrder) {
    const auto h = normalized_hermite(5.0, 4000);
    for (double v : h) ASSERT_TRUE(std::isfinite(v));
    // Cramer-type bound |h_n(z)| e^{-z^2/2} <= 1.0864
    for (double v : h) EXPECT_LE(std::abs(v) * std::exp(-12.5), 1.0865);
}

TEST(Eigenfunction, Examples) {
    GeneratingTuple tp;
    tp.kappa = 1.0;
    tp.theta = 0.2;
    tp.sigma = 0.6;
    EXPECT_EQ(eigenfunction(0.2, 0, tp), 1.0);
    EXPECT_EQ(eigenfunction(0.2, 1, tp), 0.0);
    EXPECT_NEAR(eigenfunction(0.2 + 0.6, 2, tp), 2.0 / (2.0 * std::sqrt(2.0)), 1e-14);
}

TEST(Eigenfunction, OrthonormalUnderStationaryDensity) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> k(0.2, 3.0), th(-1.0, 1.0), sg(0.2, 1.5);
    boost::math::quadrature::tanh_sinh<double> ts;
    for (int trial = 0; trial < 4; ++trial) {
        GeneratingTuple tp;
        tp.kappa = k(rng);
        tp.theta = th(rng);
        tp.sigma = sg(rng);
        const double sd = tp.sigma / std::sqrt(tp.kappa);
        for (int n = 0; n <= 12; n += 3) {
            for (int m = n; m <= 12; m += 2) {
                auto f = [&](double x) {
                    return eigenfunction(x, n, tp) * eigenfunction(x, m, tp) * stationary_density(tp, x);
                };
                const double v = ts.integrate(f, tp.theta - 12.0 * sd, tp.theta + 12.0 * sd);
                EXPECT_NEAR(v, n == m ? 1.0 : 0.0, 1e-8) << n << "," << m;
            }
        }
    }
}

TEST(CoeffB, Examples) {
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_DOUBLE_EQ(coeff_b(inf, 0)[0], std::sqrt(std::numbers::pi));
    EXPECT_NEAR(coeff_b(0.0, 0)[0], std::sqrt(std::numbers::pi) / 2.0, 1e-15);
    const double q = gauss_integral([](double x) { return 2.0 * x; }, 0.0);
    EXPECT_NEAR(coeff_b(0.0, 1)[1], q, 1e-12);
    EXPECT_NEAR(q, -1.0, 1e-12);
}

TEST(CoeffB, AgreesWithQuadrature) {
    for (double w : {-3.0, -1.5, -0.2, 0.0, 0.9, 2.0, 3.0}) {
        const auto b = coeff_b(w, 10);
        for (int n = 0; n <= 10; ++n) {
            const double q = gauss_integral([n](double x) { return boost::math::hermite(n, x); }, w);
            EXPECT_NEAR(b[n] / raw_norm(n), q / raw_norm(n), 1e-8) << "n=" << n << " w=" << w;
        }
    }
}

TEST(CoeffA, Examples) {
    const double inf = std::numeric_limits<double>::infinity();
    const auto ai = coeff_a(inf, 1, 1);
    EXPECT_NEAR(ai(0, 0), std::sqrt(std::numbers::pi), 1e-14);
    EXPECT_NEAR(ai(1, 1), 2.0 * std::sqrt(std::numbers::pi), 1e-14);
    EXPECT_NEAR(ai(0, 1), 0.0, 1e-14);
    const auto a0 = coeff_a(0.0, 1, 1);
    EXPECT_NEAR(a0(0, 1), -1.0, 1e-14);
    EXPECT_NEAR(a0(1, 1), std::sqrt(std::numbers::pi), 1e-14);
    EXPECT_NEAR(gauss_integral([](double x) { return 4.0 * x * x; }, 0.0), std::sqrt(std::numbers::pi), 1e-12);
}

TEST(CoeffA, RecursionAgreesWithQuadrature) {
    for (double w : {-3.0, -1.0, 0.0, 0.5, 2.2, 3.0}) {
        const auto a = coeff_a(w, 10, 10);
        for (int n = 0; n <= 10; ++n) {
            for (int m = 0; m <= 10; ++m) {
                const double q = gauss_integral(
                    [n, m](double x) { return boost::math::hermite(n, x) * boost::math::hermite(m, x); }, w);
                const double s = raw_norm(n) * raw_norm(m);
                EXPECT_NEAR(a(n, m) / s, q / s, 1e-8) << n << "," << m << " w=" << w;
                EXPECT_EQ(a(n, m), a(m, n));
            }
        }
    }
}

TEST(CoeffA, OffDiagonalMatchesDoubleSum) {
    // a_{n,m} = sum_k 2^k k! C(n,k) C(m,k) b_{n+m-2k}
    for (double w : {-2.0, 0.3, 1.8}) {
        const auto a = coeff_a(w, 10, 10);
        const auto b = coeff_b(w, 20);
        for (int n = 0; n <= 10; ++n) {
            for (int m = 0; m <= 10; ++m) {
                double ref = 0.0;
                for (int k = 0; k <= std::min(n, m); ++k) {
                    const double binom = std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)) *
                                         std::tgamma(m + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(m - k + 1.0));
                    ref += std::ldexp(std::tgamma(k + 1.0), k) * binom * b[n + m - 2 * k];
                }
                const double s = raw_norm(n) * raw_norm(m);
                EXPECT_NEAR(a(n, m) / s, ref / s, 1e-8) << n << "," << m << " w=" << w;
            }
        }
    }
}

TEST(CoeffA, NormalizedBoundedAtHighOrder) {
    const auto a = coeff_a_normalized(0.7, 300, 300);
    for (std::size_t n = 0; n < a.rows(); n += 7) {
        for (std::size_t m = 0; m < a.cols(); m += 5) {
            ASSERT_TRUE(std::isfinite(a(n, m)));
            EXPECT_LE(std::abs(a(n, m)), std::sqrt(std::numbers::pi) + 1e-9);
        }
    }
}

TEST(Bessel, Examples) {
    EXPECT_EQ(bessel_i(0.0, 0.0), 1.0);
    EXPECT_EQ(bessel_i(1.0, 0.0), 0.0);
    EXPECT_NEAR(bessel_i(0.5, 1.0), std::sqrt(2.0 / std::numbers::pi) * std::sinh(1.0), 1e-14);
    EXPECT_THROW(bessel_i(1.0, -1.0), DomainError);
}

TEST(Bessel, AgreesWithBoostAcrossRegimes) {
    for (double nu : {0.0, 0.3, 1.0, 2.7, 9.5, 39.0, 40.0, 75.0, 180.0}) {
        for (double x : {1e-3, 0.1, 1.0, 5.0, 20.0, 49.0, 60.0, 150.0, 400.0}) {
            const double ref = boost::math::cyl_bessel_i(nu, x);
            if (!std::isfinite(ref) || ref < 1e-290) continue;
            EXPECT_NEAR(bessel_i(nu, x) / ref, 1.0, 1e-10) << "nu=" << nu << " x=" << x;
        }
    }
}

TEST(Bessel, ScaledAndLogFormsConsistent) {
    for (double nu : {0.0, 1.5, 12.0, 60.0}) {
        for (double x : {0.5, 30.0, 800.0, 5000.0}) {
            const double ls = log_bessel_i(nu, x);
            EXPECT_TRUE(std::isfinite(ls));
            EXPECT_NEAR(std::log(bessel_i_scaled(nu, x)), ls - x, 1e-10 * std::max(1.0, std::abs(ls)));
        }
    }
    // e^{-x} I_nu(x) ~ 1/sqrt(2 pi x) for large x
    EXPECT_NEAR(bessel_i_scaled(1.0, 1e6) * std::sqrt(2.0 * std::numbers::pi * 1e6), 1.0, 1e-6);
}
