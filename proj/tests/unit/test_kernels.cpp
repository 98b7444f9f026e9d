#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "subou/kernels.hpp"
#include "subou/special_fn.hpp"

using namespace subou;
using kernels::Isa;

namespace {

class IsaGuard {
public:
    explicit IsaGuard(Isa isa) { kernels::force_isa(isa); }
    ~IsaGuard() { kernels::force_isa(std::nullopt); }
};

std::vector<Isa> simd_variants() {
    std::vector<Isa> out;
    for (Isa i : {Isa::avx2, Isa::neon})
        if (kernels::isa_available(i)) out.push_back(i);
    return out;
}

std::vector<double> random_vec(std::size_t n, double lo, double hi, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST(Kernels, ScalarSeriesMatchesDirectSum) {
    const auto c = random_vec(40, -1.0, 1.0, 3);
    const auto z = random_vec(9, -3.0, 3.0, 4);
    std::vector<double> out(z.size());
    IsaGuard g(Isa::scalar);
    kernels::hermite_series(c, z, out);
    for (std::size_t i = 0; i < z.size(); ++i) {
        const auto h = normalized_hermite(z[i], 39);
        double ref = 0.0;
        for (int n = 0; n < 40; ++n) ref += c[n] * h[n];
        EXPECT_NEAR(out[i], ref, 1e-12 * std::exp(0.5 * z[i] * z[i]));
    }
}

TEST(Kernels, DerivativeMatchesFiniteDifference) {
    const auto c = random_vec(25, -1.0, 1.0, 5);
    const std::vector<double> z{-1.3, 0.0, 0.4, 2.1};
    std::vector<double> v(z.size()), dv(z.size()), vp(z.size()), vm(z.size()), d2(z.size());
    kernels::hermite_series_deriv(c, z, v, dv);
    const double h = 1e-6;
    std::vector<double> zp(z), zm(z);
    for (auto& x : zp) x += h;
    for (auto& x : zm) x -= h;
    kernels::hermite_series(c, zp, vp);
    kernels::hermite_series(c, zm, vm);
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(dv[i], (vp[i] - vm[i]) / (2 * h), 1e-6);
}

TEST(Kernels, PutInnerSumsMatchCoefficientMatrix) {
    const double w = 0.8;
    const int rows = 37;
    const int cols = 23;
    const auto a = coeff_a_normalized(w, rows, cols);
    const auto h = normalized_hermite(w, std::max(rows, cols) + 1);
    std::vector<double> diag(rows);
    coeff_a_diagonal_normalized(w, h, diag);
    const auto q = random_vec(cols, -1.0, 1.0, 8);
    std::vector<double> out(rows);
    IsaGuard g(Isa::scalar);
    kernels::put_inner_sums(q, h, diag, 0.5 * std::exp(-w * w), out);
    for (int n = 0; n < rows; ++n) {
        double ref = 0.0;
        for (int m = 0; m < cols; ++m) ref += q[m] * a(n, m);
        EXPECT_NEAR(out[n], ref, 1e-13);
    }
}

TEST(Kernels, SimdVariantsBitwiseEqualScalar) {
    const auto variants = simd_variants();
    if (variants.empty()) GTEST_SKIP() << "no SIMD variant available on this CPU";
    for (std::size_t nz : {1u, 3u, 4u, 7u, 64u, 101u}) {
        for (std::size_t nc : {0u, 1u, 2u, 5u, 300u}) {
            const auto c = random_vec(nc, -1.0, 1.0, unsigned(nc + 11));
            const auto z = random_vec(nz, -4.0, 4.0, unsigned(nz + 17));
            std::vector<double> ref(nz), dref(nz), vr(nz);
            {
                IsaGuard g(Isa::scalar);
                kernels::hermite_series_deriv(c, z, ref, dref);
                kernels::hermite_series(c, z, vr);
            }
            for (Isa isa : variants) {
                IsaGuard g(isa);
                std::vector<double> out(nz), dout(nz), v2(nz);
                kernels::hermite_series_deriv(c, z, out, dout);
                kernels::hermite_series(c, z, v2);
                for (std::size_t i = 0; i < nz; ++i) {
                    EXPECT_EQ(out[i], ref[i]) << kernels::isa_name(isa);
                    EXPECT_EQ(dout[i], dref[i]) << kernels::isa_name(isa);
                    EXPECT_EQ(v2[i], vr[i]) << kernels::isa_name(isa);
                }
            }
        }
    }
    for (int rows : {1, 4, 9, 64, 131}) {
        const int cols = rows + 3;
        const double w = -0.6;
        const auto h = normalized_hermite(w, std::max(rows, cols) + 1);
        std::vector<double> diag(rows);
        coeff_a_diagonal_normalized(w, h, diag);
        const auto q = random_vec(cols, -1.0, 1.0, unsigned(rows));
        std::vector<double> ref(rows);
        {
            IsaGuard g(Isa::scalar);
            kernels::put_inner_sums(q, h, diag, 0.5 * std::exp(-w * w), ref);
        }
        for (Isa isa : variants) {
            IsaGuard g(isa);
            std::vector<double> out(rows);
            kernels::put_inner_sums(q, h, diag, 0.5 * std::exp(-w * w), out);
            for (int i = 0; i < rows; ++i) EXPECT_EQ(out[i], ref[i]) << kernels::isa_name(isa);
        }
    }
}

TEST(Kernels, ForceUnavailableIsaThrows) {
    for (Isa i : {Isa::avx2, Isa::neon}) {
        if (!kernels::isa_available(i)) {
            EXPECT_THROW(kernels::force_isa(i), std::invalid_argument);
        }
    }
    EXPECT_TRUE(kernels::isa_available(Isa::scalar));
}
