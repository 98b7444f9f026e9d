#include "subou/special_fn.hpp"

#include <algorithm>
#include <cmath>

#include "subou/errors.hpp"
#include "subou/numeric.hpp"

namespace subou {

HermiteTable hermite_eval(double x, int n_max) {
    if (n_max < 0) throw DomainError("hermite_eval: n_max must be non-negative");
    HermiteTable table;
    table.order = n_max;
    table.values.resize(static_cast<std::size_t>(n_max) + 1);
    auto& h = table.values;
    h[0] = 1.0;
    if (n_max >= 1) h[1] = 2.0 * x;
    for (int n = 2; n <= n_max; ++n) {
        h[n] = 2.0 * x * h[n - 1] - 2.0 * (n - 1) * h[n - 2];
    }
    return table;
}

void normalized_hermite(double z, std::span<double> out) noexcept {
    if (out.empty()) return;
    out[0] = 1.0;
    if (out.size() == 1) return;
    out[1] = kSqrt2 * z;
    for (std::size_t n = 2; n < out.size(); ++n) {
        const double dn = static_cast<double>(n);
        out[n] = std::sqrt(2.0 / dn) * z * out[n - 1] - std::sqrt((dn - 1.0) / dn) * out[n - 2];
    }
}

std::vector<double> normalized_hermite(double z, int n_max) {
    if (n_max < 0) throw DomainError("normalized_hermite: n_max must be non-negative");
    std::vector<double> h(static_cast<std::size_t>(n_max) + 1);
    normalized_hermite(z, h);
    return h;
}

namespace {

// log sqrt(2^n n!)
double log_norm(int n) {
    return 0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0));
}

}  // namespace

void coeff_b_normalized(double w, std::span<const double> h, std::span<double> out) {
    if (out.empty()) return;
    if (h.size() + 1 < out.size()) throw DomainError("coeff_b_normalized: Hermite table too short");
    const double e = std::exp(-w * w);
    out[0] = kSqrtPi * normal_cdf(kSqrt2 * w);
    for (std::size_t n = 1; n < out.size(); ++n) {
        out[n] = -h[n - 1] * e / std::sqrt(2.0 * static_cast<double>(n));
    }
}

void coeff_a_diagonal_normalized(double w, std::span<const double> h, std::span<double> out) {
    if (out.empty()) return;
    if (h.size() < out.size()) throw DomainError("coeff_a_diagonal_normalized: Hermite table too short");
    const double e = std::exp(-w * w);
    out[0] = kSqrtPi * normal_cdf(kSqrt2 * w);
    for (std::size_t n = 1; n < out.size(); ++n) {
        out[n] = out[n - 1] - h[n - 1] * h[n] * e / std::sqrt(2.0 * static_cast<double>(n));
    }
}

double coeff_a_offdiag_normalized(int n, int m, std::span<const double> h, double exp_mw2) noexcept {
    const double un = h[n] * h[m + 1] * std::sqrt(2.0 * (m + 1));
    const double vm = h[m] * h[n + 1] * std::sqrt(2.0 * (n + 1));
    return (un - vm) * exp_mw2 / (2.0 * (m - n));
}

CoeffMatrix coeff_a_normalized(double w, int n_max, int m_max) {
    if (n_max < 0 || m_max < 0) throw DomainError("coeff_a: orders must be non-negative");
    const int top = std::max(n_max, m_max) + 1;
    const auto h = normalized_hermite(w, top);
    std::vector<double> diag(static_cast<std::size_t>(std::min(n_max, m_max)) + 1);
    coeff_a_diagonal_normalized(w, h, diag);
    const double e = std::exp(-w * w);
    CoeffMatrix a(static_cast<std::size_t>(n_max) + 1, static_cast<std::size_t>(m_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        for (int m = 0; m <= m_max; ++m) {
            a(n, m) = (n == m) ? diag[n] : coeff_a_offdiag_normalized(n, m, h, e);
        }
    }
    return a;
}

std::vector<double> coeff_b(double w, int n_max) {
    if (n_max < 0) throw DomainError("coeff_b: n_max must be non-negative");
    std::vector<double> b(static_cast<std::size_t>(n_max) + 1);
    if (std::isinf(w)) {
        // b_0(+inf) = sqrt(pi); every other b_n vanishes at both ends.
        std::fill(b.begin(), b.end(), 0.0);
        if (w > 0) b[0] = kSqrtPi;
        return b;
    }
    const auto h = normalized_hermite(w, n_max);
    coeff_b_normalized(w, h, b);
    for (int n = 1; n <= n_max; ++n) b[n] *= std::exp(log_norm(n));
    return b;
}

CoeffMatrix coeff_a(double w, int n_max, int m_max) {
    if (n_max < 0 || m_max < 0) throw DomainError("coeff_a: orders must be non-negative");
    if (std::isinf(w)) {
        CoeffMatrix a(static_cast<std::size_t>(n_max) + 1, static_cast<std::size_t>(m_max) + 1);
        if (w > 0) {
            for (int n = 0; n <= std::min(n_max, m_max); ++n) a(n, n) = kSqrtPi * std::exp(2.0 * log_norm(n));
        }
        return a;
    }
    CoeffMatrix a = coeff_a_normalized(w, n_max, m_max);
    for (int n = 0; n <= n_max; ++n) {
        for (int m = 0; m <= m_max; ++m) a(n, m) *= std::exp(log_norm(n) + log_norm(m));
    }
    return a;
}

}  // namespace subou
