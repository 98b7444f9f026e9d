#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace subou {

// Physicists' Hermite polynomials H_0(x)..H_order(x) at one argument.
struct HermiteTable {
    int order = 0;
    std::vector<double> values;
};

HermiteTable hermite_eval(double x, int n_max);

// Normalized Hermite values h_n(z) = H_n(z) / sqrt(2^n n!) for n = 0..out.size()-1.
// The rescaled three-term recursion keeps every value O(e^{z^2/2}) so tables of
// several thousand terms stay finite.
void normalized_hermite(double z, std::span<double> out) noexcept;
std::vector<double> normalized_hermite(double z, int n_max);

// Row-major dense matrix used for the a_{n,m} coefficient tables.
class CoeffMatrix {
public:
    CoeffMatrix() = default;
    CoeffMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// b_n(w) = int_{-inf}^w H_n(x) e^{-x^2} dx for n = 0..n_max (raw scale; overflows
// to inf for large n, use coeff_b_normalized in pricing code).
std::vector<double> coeff_b(double w, int n_max);

// a_{n,m}(w) = int_{-inf}^w H_n H_m e^{-x^2} dx, n <= n_max, m <= m_max (raw scale).
CoeffMatrix coeff_a(double w, int n_max, int m_max);

// Normalized variants: b_n / sqrt(2^n n!) and a_{n,m} / sqrt(2^n n! 2^m m!).
// `h` must hold normalized Hermite values at w up to at least degree
// max(n_max, m_max) + 1.
void coeff_b_normalized(double w, std::span<const double> h, std::span<double> out);
// Diagonal a~_{n,n}(w) for n = 0..out.size()-1 by the downward-stable recursion
// a~_{n,n} = a~_{n-1,n-1} - h_{n-1} h_n e^{-w^2} / sqrt(2n).
void coeff_a_diagonal_normalized(double w, std::span<const double> h, std::span<double> out);
// Off-diagonal closed form (n != m) in normalized scale.
double coeff_a_offdiag_normalized(int n, int m, std::span<const double> h, double exp_mw2) noexcept;
CoeffMatrix coeff_a_normalized(double w, int n_max, int m_max);

// Modified Bessel function of the first kind I_nu(x), nu >= 0, x >= 0.
double bessel_i(double nu, double x);
// e^{-x} I_nu(x); finite for every finite x.
double bessel_i_scaled(double nu, double x);
// log I_nu(x); -inf at x = 0 when nu > 0.
double log_bessel_i(double nu, double x);

}  // namespace subou
