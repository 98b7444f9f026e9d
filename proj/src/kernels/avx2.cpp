// Compiled with -mavx2 only (no -mfma): multiplies and adds stay separately
// rounded, matching the scalar reference lane for lane.
#include "subou/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

#include <cmath>

namespace subou::kernels::detail {
namespace {

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

struct Neumaier4 {
    __m256d s = _mm256_setzero_pd();
    __m256d c = _mm256_setzero_pd();
    void add(__m256d v) {
        const __m256d t = _mm256_add_pd(s, v);
        const __m256d big_s = _mm256_cmp_pd(vabs(s), vabs(v), _CMP_GE_OQ);
        const __m256d cs = _mm256_add_pd(_mm256_sub_pd(s, t), v);
        const __m256d cv = _mm256_add_pd(_mm256_sub_pd(v, t), s);
        c = _mm256_add_pd(c, _mm256_blendv_pd(cv, cs, big_s));
        s = t;
    }
    [[nodiscard]] __m256d value() const { return _mm256_add_pd(s, c); }
};

}  // namespace

void hermite_series_avx2(std::span<const double> coeffs, std::span<const double> z, std::span<double> out) {
    const std::size_t nc = coeffs.size();
    const std::size_t nz = z.size();
    const std::size_t vec_end = nz - nz % 4;
    if (nc == 0) {
        for (std::size_t i = 0; i < nz; ++i) out[i] = 0.0;
        return;
    }
    const auto tab = recursion_table(nc);
    const __m256d sqrt2 = _mm256_set1_pd(std::sqrt(2.0));
    for (std::size_t i = 0; i < vec_end; i += 4) {
        const __m256d zi = _mm256_loadu_pd(&z[i]);
        Neumaier4 acc;
        __m256d h0 = _mm256_set1_pd(1.0);
        acc.add(_mm256_mul_pd(_mm256_set1_pd(coeffs[0]), h0));
        if (nc > 1) {
            __m256d h1 = _mm256_mul_pd(sqrt2, zi);
            acc.add(_mm256_mul_pd(_mm256_set1_pd(coeffs[1]), h1));
            for (std::size_t n = 2; n < nc; ++n) {
                const __m256d az = _mm256_mul_pd(_mm256_set1_pd(tab.a[n]), zi);
                const __m256d h2 = _mm256_sub_pd(_mm256_mul_pd(az, h1), _mm256_mul_pd(_mm256_set1_pd(tab.b[n]), h0));
                acc.add(_mm256_mul_pd(_mm256_set1_pd(coeffs[n]), h2));
                h0 = h1;
                h1 = h2;
            }
        }
        _mm256_storeu_pd(&out[i], acc.value());
    }
    if (vec_end < nz) {
        hermite_series_scalar(coeffs, z.subspan(vec_end), out.subspan(vec_end));
    }
}

void hermite_series_deriv_avx2(std::span<const double> coeffs, std::span<const double> z, std::span<double> out,
                               std::span<double> dout) {
    const std::size_t nc = coeffs.size();
    const std::size_t nz = z.size();
    const std::size_t vec_end = nz - nz % 4;
    if (nc == 0) {
        for (std::size_t i = 0; i < nz; ++i) out[i] = dout[i] = 0.0;
        return;
    }
    const auto tab = recursion_table(nc);
    const __m256d sqrt2 = _mm256_set1_pd(std::sqrt(2.0));
    for (std::size_t i = 0; i < vec_end; i += 4) {
        const __m256d zi = _mm256_loadu_pd(&z[i]);
        Neumaier4 acc;
        Neumaier4 dacc;
        __m256d h0 = _mm256_set1_pd(1.0);
        acc.add(_mm256_mul_pd(_mm256_set1_pd(coeffs[0]), h0));
        if (nc > 1) {
            __m256d h1 = _mm256_mul_pd(sqrt2, zi);
            acc.add(_mm256_mul_pd(_mm256_set1_pd(coeffs[1]), h1));
            dacc.add(_mm256_mul_pd(_mm256_set1_pd(coeffs[1] * tab.d[1]), h0));
            for (std::size_t n = 2; n < nc; ++n) {
                const __m256d az = _mm256_mul_pd(_mm256_set1_pd(tab.a[n]), zi);
                const __m256d h2 = _mm256_sub_pd(_mm256_mul_pd(az, h1), _mm256_mul_pd(_mm256_set1_pd(tab.b[n]), h0));
                acc.add(_mm256_mul_pd(_mm256_set1_pd(coeffs[n]), h2));
                dacc.add(_mm256_mul_pd(_mm256_set1_pd(coeffs[n] * tab.d[n]), h1));
                h0 = h1;
                h1 = h2;
            }
        }
        _mm256_storeu_pd(&out[i], acc.value());
        _mm256_storeu_pd(&dout[i], dacc.value());
    }
    if (vec_end < nz) {
        hermite_series_deriv_scalar(coeffs, z.subspan(vec_end), out.subspan(vec_end), dout.subspan(vec_end));
    }
}

void put_inner_sums_avx2(std::span<const double> q, std::span<const double> h, std::span<const double> u,
                         std::span<const double> diag, double ehalf, std::span<double> out) {
    const std::size_t nn = out.size();
    const std::size_t nm = q.size();
    const std::size_t vec_end = nn - nn % 4;
    const __m256d eh = _mm256_set1_pd(ehalf);
    for (std::size_t n = 0; n < vec_end; n += 4) {
        const __m256d hn = _mm256_loadu_pd(&h[n]);
        const __m256d un = _mm256_loadu_pd(&u[n]);
        const __m256d dg = _mm256_loadu_pd(&diag[n]);
        const double fn = static_cast<double>(n);
        const __m256d nvec = _mm256_set_pd(fn + 3.0, fn + 2.0, fn + 1.0, fn);
        Neumaier4 acc;
        for (std::size_t m = 0; m < nm; ++m) {
            const __m256d qm = _mm256_set1_pd(q[m]);
            const __m256d mvec = _mm256_set1_pd(static_cast<double>(m));
            const __m256d num = _mm256_mul_pd(
                _mm256_sub_pd(_mm256_mul_pd(hn, _mm256_set1_pd(u[m])), _mm256_mul_pd(un, _mm256_set1_pd(h[m]))), eh);
            const __m256d off = _mm256_mul_pd(qm, _mm256_div_pd(num, _mm256_sub_pd(mvec, nvec)));
            const __m256d on = _mm256_mul_pd(qm, dg);
            const __m256d is_diag = _mm256_cmp_pd(mvec, nvec, _CMP_EQ_OQ);
            acc.add(_mm256_blendv_pd(off, on, is_diag));
        }
        _mm256_storeu_pd(&out[n], acc.value());
    }
    put_inner_rows_scalar(q, h, u, diag, ehalf, out, vec_end, nn);
}

}  // namespace subou::kernels::detail

#else

#include <stdexcept>

namespace subou::kernels::detail {

void hermite_series_avx2(std::span<const double>, std::span<const double>, std::span<double>) {
    throw std::logic_error("AVX2 kernels not built for this target");
}
void hermite_series_deriv_avx2(std::span<const double>, std::span<const double>, std::span<double>,
                               std::span<double>) {
    throw std::logic_error("AVX2 kernels not built for this target");
}
void put_inner_sums_avx2(std::span<const double>, std::span<const double>, std::span<const double>,
                         std::span<const double>, double, std::span<double>) {
    throw std::logic_error("AVX2 kernels not built for this target");
}

}  // namespace subou::kernels::detail

#endif
