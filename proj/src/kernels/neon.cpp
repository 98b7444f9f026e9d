// Two-lane AArch64 variant. vmulq/vaddq/vsubq only, never vfmaq, so each lane
// rounds exactly like the scalar reference.
#include "subou/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

#include <cmath>

namespace subou::kernels::detail {
namespace {

struct Neumaier2 {
    float64x2_t s = vdupq_n_f64(0.0);
    float64x2_t c = vdupq_n_f64(0.0);
    void add(float64x2_t v) {
        const float64x2_t t = vaddq_f64(s, v);
        const uint64x2_t big_s = vcgeq_f64(vabsq_f64(s), vabsq_f64(v));
        const float64x2_t cs = vaddq_f64(vsubq_f64(s, t), v);
        const float64x2_t cv = vaddq_f64(vsubq_f64(v, t), s);
        c = vaddq_f64(c, vbslq_f64(big_s, cs, cv));
        s = t;
    }
    [[nodiscard]] float64x2_t value() const { return vaddq_f64(s, c); }
};

}  // namespace

void hermite_series_neon(std::span<const double> coeffs, std::span<const double> z, std::span<double> out) {
    const std::size_t nc = coeffs.size();
    const std::size_t nz = z.size();
    const std::size_t vec_end = nz - nz % 2;
    if (nc == 0) {
        for (std::size_t i = 0; i < nz; ++i) out[i] = 0.0;
        return;
    }
    const auto tab = recursion_table(nc);
    const float64x2_t sqrt2 = vdupq_n_f64(std::sqrt(2.0));
    for (std::size_t i = 0; i < vec_end; i += 2) {
        const float64x2_t zi = vld1q_f64(&z[i]);
        Neumaier2 acc;
        float64x2_t h0 = vdupq_n_f64(1.0);
        acc.add(vmulq_f64(vdupq_n_f64(coeffs[0]), h0));
        if (nc > 1) {
            float64x2_t h1 = vmulq_f64(sqrt2, zi);
            acc.add(vmulq_f64(vdupq_n_f64(coeffs[1]), h1));
            for (std::size_t n = 2; n < nc; ++n) {
                const float64x2_t az = vmulq_f64(vdupq_n_f64(tab.a[n]), zi);
                const float64x2_t h2 = vsubq_f64(vmulq_f64(az, h1), vmulq_f64(vdupq_n_f64(tab.b[n]), h0));
                acc.add(vmulq_f64(vdupq_n_f64(coeffs[n]), h2));
                h0 = h1;
                h1 = h2;
            }
        }
        vst1q_f64(&out[i], acc.value());
    }
    if (vec_end < nz) {
        hermite_series_scalar(coeffs, z.subspan(vec_end), out.subspan(vec_end));
    }
}

void hermite_series_deriv_neon(std::span<const double> coeffs, std::span<const double> z, std::span<double> out,
                               std::span<double> dout) {
    const std::size_t nc = coeffs.size();
    const std::size_t nz = z.size();
    const std::size_t vec_end = nz - nz % 2;
    if (nc == 0) {
        for (std::size_t i = 0; i < nz; ++i) out[i] = dout[i] = 0.0;
        return;
    }
    const auto tab = recursion_table(nc);
    const float64x2_t sqrt2 = vdupq_n_f64(std::sqrt(2.0));
    for (std::size_t i = 0; i < vec_end; i += 2) {
        const float64x2_t zi = vld1q_f64(&z[i]);
        Neumaier2 acc;
        Neumaier2 dacc;
        float64x2_t h0 = vdupq_n_f64(1.0);
        acc.add(vmulq_f64(vdupq_n_f64(coeffs[0]), h0));
        if (nc > 1) {
            float64x2_t h1 = vmulq_f64(sqrt2, zi);
            acc.add(vmulq_f64(vdupq_n_f64(coeffs[1]), h1));
            dacc.add(vmulq_f64(vdupq_n_f64(coeffs[1] * tab.d[1]), h0));
            for (std::size_t n = 2; n < nc; ++n) {
                const float64x2_t az = vmulq_f64(vdupq_n_f64(tab.a[n]), zi);
                const float64x2_t h2 = vsubq_f64(vmulq_f64(az, h1), vmulq_f64(vdupq_n_f64(tab.b[n]), h0));
                acc.add(vmulq_f64(vdupq_n_f64(coeffs[n]), h2));
                dacc.add(vmulq_f64(vdupq_n_f64(coeffs[n] * tab.d[n]), h1));
                h0 = h1;
                h1 = h2;
            }
        }
        vst1q_f64(&out[i], acc.value());
        vst1q_f64(&dout[i], dacc.value());
    }
    if (vec_end < nz) {
        hermite_series_deriv_scalar(coeffs, z.subspan(vec_end), out.subspan(vec_end), dout.subspan(vec_end));
    }
}

void put_inner_sums_neon(std::span<const double> q, std::span<const double> h, std::span<const double> u,
                         std::span<const double> diag, double ehalf, std::span<double> out) {
    const std::size_t nn = out.size();
    const std::size_t nm = q.size();
    const std::size_t vec_end = nn - nn % 2;
    const float64x2_t eh = vdupq_n_f64(ehalf);
    for (std::size_t n = 0; n < vec_end; n += 2) {
        const float64x2_t hn = vld1q_f64(&h[n]);
        const float64x2_t un = vld1q_f64(&u[n]);
        const float64x2_t dg = vld1q_f64(&diag[n]);
        const double lanes[2] = {static_cast<double>(n), static_cast<double>(n) + 1.0};
        const float64x2_t nvec = vld1q_f64(lanes);
        Neumaier2 acc;
        for (std::size_t m = 0; m < nm; ++m) {
            const float64x2_t qm = vdupq_n_f64(q[m]);
            const float64x2_t mvec = vdupq_n_f64(static_cast<double>(m));
            const float64x2_t num =
                vmulq_f64(vsubq_f64(vmulq_f64(hn, vdupq_n_f64(u[m])), vmulq_f64(un, vdupq_n_f64(h[m]))), eh);
            const float64x2_t off = vmulq_f64(qm, vdivq_f64(num, vsubq_f64(mvec, nvec)));
            const float64x2_t on = vmulq_f64(qm, dg);
            const uint64x2_t is_diag = vceqq_f64(mvec, nvec);
            acc.add(vbslq_f64(is_diag, on, off));
        }
        vst1q_f64(&out[n], acc.value());
    }
    put_inner_rows_scalar(q, h, u, diag, ehalf, out, vec_end, nn);
}

}  // namespace subou::kernels::detail

#else

#include <stdexcept>

namespace subou::kernels::detail {

void hermite_series_neon(std::span<const double>, std::span<const double>, std::span<double>) {
    throw std::logic_error("NEON kernels not built for this target");
}
void hermite_series_deriv_neon(std::span<const double>, std::span<const double>, std::span<double>,
                               std::span<double>) {
    throw std::logic_error("NEON kernels not built for this target");
}
void put_inner_sums_neon(std::span<const double>, std::span<const double>, std::span<const double>,
                         std::span<const double>, double, std::span<double>) {
    throw std::logic_error("NEON kernels not built for this target");
}

}  // namespace subou::kernels::detail

#endif
