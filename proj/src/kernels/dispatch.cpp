#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "subou/kernels.hpp"

namespace subou::kernels {
namespace {

constexpr int kAuto = -1;
std::atomic<int> g_forced{kAuto};

bool cpu_has_avx2() noexcept {
#if defined(SUBOU_HAVE_AVX2) && (defined(__x86_64__) || defined(_M_X64))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa detect() noexcept {
    if (const char* env = std::getenv("SUBOU_FORCE_ISA")) {
        const std::string v(env);
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
        if (v == "neon" && isa_available(Isa::neon)) return Isa::neon;
    }
    if (isa_available(Isa::avx2)) return Isa::avx2;
    if (isa_available(Isa::neon)) return Isa::neon;
    return Isa::scalar;
}

}  // namespace

const char* isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2: return cpu_has_avx2();
        case Isa::neon:
#if defined(SUBOU_HAVE_NEON) && defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() noexcept {
    const int forced = g_forced.load(std::memory_order_relaxed);
    if (forced != kAuto) return static_cast<Isa>(forced);
    static const Isa detected = detect();
    return detected;
}

void force_isa(std::optional<Isa> isa) {
    if (!isa) {
        g_forced.store(kAuto);
        return;
    }
    if (!isa_available(*isa)) throw std::invalid_argument(std::string("ISA not available: ") + isa_name(*isa));
    g_forced.store(static_cast<int>(*isa));
}

void hermite_series(std::span<const double> coeffs, std::span<const double> z, std::span<double> out) {
    if (out.size() < z.size()) throw std::invalid_argument("hermite_series: output shorter than input");
    switch (active_isa()) {
        case Isa::avx2: detail::hermite_series_avx2(coeffs, z, out); return;
        case Isa::neon: detail::hermite_series_neon(coeffs, z, out); return;
        case Isa::scalar: break;
    }
    detail::hermite_series_scalar(coeffs, z, out);
}

void hermite_series_deriv(std::span<const double> coeffs, std::span<const double> z, std::span<double> out,
                          std::span<double> dout) {
    if (out.size() < z.size() || dout.size() < z.size())
        throw std::invalid_argument("hermite_series_deriv: output shorter than input");
    switch (active_isa()) {
        case Isa::avx2: detail::hermite_series_deriv_avx2(coeffs, z, out, dout); return;
        case Isa::neon: detail::hermite_series_deriv_neon(coeffs, z, out, dout); return;
        case Isa::scalar: break;
    }
    detail::hermite_series_deriv_scalar(coeffs, z, out, dout);
}

void put_inner_sums(std::span<const double> q, std::span<const double> h, std::span<const double> diag,
                    double ehalf, std::span<double> out) {
    const std::size_t rows = std::max(out.size(), q.size());
    if (h.size() < rows + 1 || diag.size() < out.size())
        throw std::invalid_argument("put_inner_sums: Hermite or diagonal table too short");
    thread_local std::vector<double> u;
    u.resize(rows);
    for (std::size_t k = 0; k < rows; ++k) u[k] = h[k + 1] * std::sqrt(2.0 * static_cast<double>(k + 1));
    switch (active_isa()) {
        case Isa::avx2: detail::put_inner_sums_avx2(q, h, u, diag, ehalf, out); return;
        case Isa::neon: detail::put_inner_sums_neon(q, h, u, diag, ehalf, out); return;
        case Isa::scalar: break;
    }
    detail::put_inner_sums_scalar(q, h, u, diag, ehalf, out);
}

}  // namespace subou::kernels
