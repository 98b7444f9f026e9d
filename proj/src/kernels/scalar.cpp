#include <cmath>
#include <vector>

#include "subou/kernels.hpp"

namespace subou::kernels::detail {
namespace {

struct Neumaier {
    double s = 0.0;
    double c = 0.0;
    void add(double v) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v)) {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    [[nodiscard]] double value() const { return s + c; }
};

}  // namespace

RecursionTable recursion_table(std::size_t size) {
    thread_local std::vector<double> a{0.0};
    thread_local std::vector<double> b{0.0};
    thread_local std::vector<double> d{0.0};
    for (std::size_t n = a.size(); n < size; ++n) {
        const double dn = static_cast<double>(n);
        a.push_back(std::sqrt(2.0 / dn));
        b.push_back(std::sqrt((dn - 1.0) / dn));
        d.push_back(std::sqrt(2.0 * dn));
    }
    return {std::span<const double>(a).first(size), std::span<const double>(b).first(size),
            std::span<const double>(d).first(size)};
}

void hermite_series_scalar(std::span<const double> coeffs, std::span<const double> z, std::span<double> out) {
    const std::size_t nc = coeffs.size();
    const auto tab = recursion_table(nc);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (nc == 0) {
            out[i] = 0.0;
            continue;
        }
        const double zi = z[i];
        Neumaier acc;
        double h0 = 1.0;
        acc.add(coeffs[0] * h0);
        if (nc > 1) {
            double h1 = std::sqrt(2.0) * zi;
            acc.add(coeffs[1] * h1);
            for (std::size_t n = 2; n < nc; ++n) {
                const double h2 = tab.a[n] * zi * h1 - tab.b[n] * h0;
                acc.add(coeffs[n] * h2);
                h0 = h1;
                h1 = h2;
            }
        }
        out[i] = acc.value();
    }
}

void hermite_series_deriv_scalar(std::span<const double> coeffs, std::span<const double> z, std::span<double> out,
                                 std::span<double> dout) {
    const std::size_t nc = coeffs.size();
    const auto tab = recursion_table(nc);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (nc == 0) {
            out[i] = 0.0;
            dout[i] = 0.0;
            continue;
        }
        const double zi = z[i];
        Neumaier acc;
        Neumaier dacc;
        double h0 = 1.0;
        acc.add(coeffs[0] * h0);
        if (nc > 1) {
            double h1 = std::sqrt(2.0) * zi;
            acc.add(coeffs[1] * h1);
            dacc.add(coeffs[1] * tab.d[1] * h0);
            for (std::size_t n = 2; n < nc; ++n) {
                const double h2 = tab.a[n] * zi * h1 - tab.b[n] * h0;
                acc.add(coeffs[n] * h2);
                dacc.add(coeffs[n] * tab.d[n] * h1);
                h0 = h1;
                h1 = h2;
            }
        }
        out[i] = acc.value();
        dout[i] = dacc.value();
    }
}

void put_inner_sums_scalar(std::span<const double> q, std::span<const double> h, std::span<const double> u,
                           std::span<const double> diag, double ehalf, std::span<double> out) {
    put_inner_rows_scalar(q, h, u, diag, ehalf, out, 0, out.size());
}

void put_inner_rows_scalar(std::span<const double> q, std::span<const double> h, std::span<const double> u,
                           std::span<const double> diag, double ehalf, std::span<double> out, std::size_t row_begin,
                           std::size_t row_end) {
    const std::size_t nm = q.size();
    for (std::size_t n = row_begin; n < row_end; ++n) {
        const double hn = h[n];
        const double un = u[n];
        const double dg = diag[n];
        const double fn = static_cast<double>(n);
        Neumaier acc;
        for (std::size_t m = 0; m < nm; ++m) {
            double term;
            if (m == n) {
                term = q[m] * dg;
            } else {
                const double num = (hn * u[m] - un * h[m]) * ehalf;
                term = q[m] * (num / (static_cast<double>(m) - fn));
            }
            acc.add(term);
        }
        out[n] = acc.value();
    }
}

}  // namespace subou::kernels::detail
