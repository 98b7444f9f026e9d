#pragma once

#include <optional>
#include <span>

// Series kernels with a scalar reference path and SIMD variants chosen at
// runtime. Every variant performs the same IEEE operations in the same order
// per lane (no FMA contraction), so results are bitwise identical.
namespace subou::kernels {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa) noexcept;
bool isa_available(Isa isa) noexcept;
// Best available variant unless overridden by force_isa() or the
// SUBOU_FORCE_ISA environment variable ("scalar", "avx2", "neon").
Isa active_isa() noexcept;
// Pin the variant (tests); std::nullopt restores automatic selection.
// Throws std::invalid_argument for a variant the CPU cannot run.
void force_isa(std::optional<Isa> isa);

// out[i] = sum_n coeffs[n] h_n(z[i]), h_n the normalized Hermite functions.
void hermite_series(std::span<const double> coeffs, std::span<const double> z, std::span<double> out);

// Value and z-derivative: dout[i] = sum_n coeffs[n] sqrt(2n) h_{n-1}(z[i]).
void hermite_series_deriv(std::span<const double> coeffs, std::span<const double> z, std::span<double> out,
                          std::span<double> dout);

// Inner sums of the put expansion for n = 0..out.size()-1:
//   out[n] = sum_{m < q.size()} q[m] a~_{n,m}
// where a~ is the normalized a-coefficient matrix at w:
//   a~_{n,n} = diag[n];
//   a~_{n,m} = (h[n] u[m] - u[n] h[m]) * ehalf / (m - n),  u[k] = h[k+1] sqrt(2(k+1)).
// `h` must hold max(out.size(), q.size()) + 1 values, `diag` out.size() values,
// ehalf = exp(-w^2) / 2.
void put_inner_sums(std::span<const double> q, std::span<const double> h, std::span<const double> diag,
                    double ehalf, std::span<double> out);

namespace detail {

void hermite_series_scalar(std::span<const double> coeffs, std::span<const double> z, std::span<double> out);
void hermite_series_deriv_scalar(std::span<const double> coeffs, std::span<const double> z, std::span<double> out,
                                 std::span<double> dout);
void put_inner_sums_scalar(std::span<const double> q, std::span<const double> h, std::span<const double> u,
                           std::span<const double> diag, double ehalf, std::span<double> out);
// Rows [row_begin, row_end) of the scalar inner sums; SIMD variants finish remainder rows with it.
void put_inner_rows_scalar(std::span<const double> q, std::span<const double> h, std::span<const double> u,
                           std::span<const double> diag, double ehalf, std::span<double> out, std::size_t row_begin,
                           std::size_t row_end);

void hermite_series_avx2(std::span<const double> coeffs, std::span<const double> z, std::span<double> out);
void hermite_series_deriv_avx2(std::span<const double> coeffs, std::span<const double> z, std::span<double> out,
                               std::span<double> dout);
void put_inner_sums_avx2(std::span<const double> q, std::span<const double> h, std::span<const double> u,
                         std::span<const double> diag, double ehalf, std::span<double> out);

void hermite_series_neon(std::span<const double> coeffs, std::span<const double> z, std::span<double> out);
void hermite_series_deriv_neon(std::span<const double> coeffs, std::span<const double> z, std::span<double> out,
                               std::span<double> dout);
void put_inner_sums_neon(std::span<const double> q, std::span<const double> h, std::span<const double> u,
                         std::span<const double> diag, double ehalf, std::span<double> out);

// Recursion constants a_n = sqrt(2/n), b_n = sqrt((n-1)/n), d_n = sqrt(2n) for
// n < size, shared by all variants. Backed by thread-local storage; valid until
// the next call on the same thread.
struct RecursionTable {
    std::span<const double> a;
    std::span<const double> b;
    std::span<const double> d;
};
RecursionTable recursion_table(std::size_t size);

}  // namespace detail
}  // namespace subou::kernels
