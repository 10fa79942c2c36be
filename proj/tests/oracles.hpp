#pragma once
// Independent test oracles. Everything here recomputes quantities through a
// route disjoint from the library implementation it checks:
//   - periods by adaptive Gauss-Legendre quadrature of dx/w over segment
//     cycles between branch points (no AGM),
//   - lattice membership / change-of-basis checks,
//   - simple finite-difference and regression helpers.

#include <array>
#include <vector>

#include "k3c/common.hpp"
#include "k3c/elliptic.hpp"

namespace oracles {

using k3c::cplx;
using k3c::kImag;
using k3c::kPi;

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton on Legendre
// polynomials; small n only.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (xi * p1 - p0) / (xi * xi - 1);
            double step = p1 / dp;
            xi -= step;
            if (std::abs(step) < 1e-16) break;
        }
        double p0 = 1, p1 = xi;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (xi * p1 - p0) / (xi * xi - 1);
        x[i] = xi;
        w[i] = 2.0 / ((1 - xi * xi) * dp * dp);
    }
}

// One cycle of dx/w over the doubled segment [ei, ej] of w^2 = prod(x - e):
// after x = c + r sin(theta) the integrand 1/sqrt(x - ek) is analytic, and
// the sqrt branch is tracked by continuity along theta.
inline cplx segment_cycle_gl(cplx ei, cplx ej, cplx ek, int n) {
    std::vector<double> gx, gw;
    gauss_legendre(n, gx, gw);
    const cplx c = 0.5 * (ei + ej), r = 0.5 * (ej - ei);
    cplx acc = 0, prev{0};
    for (int m = 0; m < n; ++m) {
        double th = 0.5 * kPi * gx[m];
        cplx root = std::sqrt(c + r * std::sin(th) - ek);
        if (m > 0 && std::abs(root + prev) < std::abs(root - prev)) root = -root;
        prev = root;
        acc += gw[m] / root;
    }
    return 2.0 * (0.5 * kPi) * acc / kImag;
}

// Adaptive: doubles the rule until two successive sizes agree.
inline cplx segment_cycle(cplx ei, cplx ej, cplx ek, double tol = 1e-12) {
    cplx prev = segment_cycle_gl(ei, ej, ek, 48);
    for (int n = 96; n <= 1536; n *= 2) {
        cplx cur = segment_cycle_gl(ei, ej, ek, n);
        if (std::abs(cur - prev) <= tol * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

// Both independent cycles of dx/w by quadrature; returned unnormalized
// (no Im tau > 0 marking), as raw lattice vectors.
inline std::pair<cplx, cplx> quadrature_periods(cplx a, cplx b) {
    auto e = k3c::depressed_cubic_roots(a, b);
    return {segment_cycle(e[2], e[1], e[0]), segment_cycle(e[1], e[0], e[2])};
}

// Is z an integer combination of (p1, p2) within tol (relative)?
inline bool in_lattice(cplx z, cplx p1, cplx p2, double tol = 1e-9) {
    double det = p1.real() * p2.imag() - p1.imag() * p2.real();
    double m = (z.real() * p2.imag() - z.imag() * p2.real()) / det;
    double n = (p1.real() * z.imag() - p1.imag() * z.real()) / det;
    cplx back = std::round(m) * p1 + std::round(n) * p2;
    return std::abs(back - z) <= tol * std::max(1.0, std::abs(z));
}

// Do (q1, q2) and (p1, p2) span the same lattice (integer change of basis
// with determinant +-1)?
inline bool same_lattice(cplx q1, cplx q2, cplx p1, cplx p2, double tol = 1e-9) {
    auto coeff = [&](cplx z, double& m, double& n) {
        double det = p1.real() * p2.imag() - p1.imag() * p2.real();
        m = (z.real() * p2.imag() - z.imag() * p2.real()) / det;
        n = (p1.real() * z.imag() - p1.imag() * z.real()) / det;
    };
    double m1, n1, m2, n2;
    coeff(q1, m1, n1);
    coeff(q2, m2, n2);
    if (!k3c::near_integer(m1, tol) || !k3c::near_integer(n1, tol) ||
        !k3c::near_integer(m2, tol) || !k3c::near_integer(n2, tol))
        return false;
    long a = std::lround(m1), bq = std::lround(n1), c = std::lround(m2), d = std::lround(n2);
    return std::labs(a * d - bq * c) == 1;
}

// Ordinary least squares slope of y against x.
inline double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = double(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracles
