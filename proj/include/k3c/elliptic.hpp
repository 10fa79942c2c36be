#pragma once
// Period lattices of a single elliptic curve w^2 = x^3 + a x + b.
//
// The primary path is the complex AGM with the continuity ("right") square
// root branch rule; every computed basis is validated against the exact
// lattice invariants g2 = -4a, g3 = -4b through the Eisenstein q-series.
// When validation fails for every root labelling (nearly collinear roots can
// defeat the branch rule) we fall back to direct Gauss-Legendre quadrature
// of dx/w over segment cycles.

#include <array>
#include <optional>

#include "k3c/common.hpp"

namespace k3c {

// ---------------------------------------------------------------------------
// cubic roots

// Roots of x^3 + a x + b, sorted by descending (Re, Im). The variable is
// rescaled first so that both tiny (|a|,|b| ~ 1e-40) and huge coefficient
// scales keep full relative accuracy.
inline std::array<cplx, 3> depressed_cubic_roots(cplx a, cplx b) {
    double s = std::max(std::sqrt(std::abs(a)), std::cbrt(std::abs(b)));
    if (s == 0.0) return {cplx{0}, cplx{0}, cplx{0}};
    const cplx p = a / (s * s), q = b / (s * s * s);

    // Cardano with the cancellation-safe cube-root choice
    const cplx half_q = 0.5 * q;
    const cplx disc = std::sqrt(half_q * half_q + p * p * p / 27.0);
    cplx u3 = -half_q - disc;
    if (std::abs(u3) < std::abs(-half_q + disc)) u3 = -half_q + disc;
    std::array<cplx, 3> r;
    if (std::abs(u3) == 0.0) {
        cplx v = std::pow(-q, 1.0 / 3.0);
        const cplx w{-0.5, 0.8660254037844386467637231707529362};
        r = {v, v * w, v * w * w};
    } else {
        const cplx u = std::pow(u3, 1.0 / 3.0);
        const cplx w{-0.5, 0.8660254037844386467637231707529362};
        for (int k = 0; k < 3; ++k) {
            cplx uk = u * std::pow(w, double(k));
            r[k] = uk - p / (3.0 * uk);
        }
    }
    for (cplx& x : r) {
        x *= s;
        for (int it = 0; it < 8; ++it) {  // Newton polish on the original cubic
            cplx f = (x * x + a) * x + b;
            cplx df = 3.0 * x * x + a;
            if (std::abs(df) == 0.0) break;
            cplx step = f / df;
            if (std::abs(step) > 0.25 * s) break;
            x -= step;
        }
    }
    std::sort(r.begin(), r.end(), [](cplx x, cplx y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return r;
}

// ---------------------------------------------------------------------------
// complex AGM

// AGM with the right-choice branch: pick the square root with
// |a' - b'| <= |a' + b'|, ties broken toward Im(b'/a') > 0.
inline cplx agm(cplx a, cplx b) {
    if (a == cplx{0} || b == cplx{0}) return 0;
    for (int it = 0; it < 80; ++it) {
        if (std::abs(a - b) <= 1e-15 * std::abs(a)) break;
        cplx a1 = 0.5 * (a + b);
        cplx b1 = std::sqrt(a * b);
        double dm = std::abs(a1 - b1), dp = std::abs(a1 + b1);
        if (dm > dp || (std::abs(dm - dp) < 1e-14 * std::abs(a1) && (b1 / a1).imag() <= 0))
            b1 = -b1;
        a = a1;
        b = b1;
    }
    return a;
}

// ---------------------------------------------------------------------------
// period basis

// Marked basis (p1, p2) of the period lattice of dx/w, Im(p2/p1) > 0.
struct PeriodBasis {
    cplx p1{1.0, 0.0};
    cplx p2{0.0, 1.0};

    cplx tau() const { return p2 / p1; }
    // Positive lattice area Im(conj(p1) p2); the Legendre positivity invariant.
    double area() const { return (std::conj(p1) * p2).imag(); }
};

// ---------------------------------------------------------------------------
// modular machinery (used to validate computed lattices)

namespace detail {

inline const int kSigma3[25] = {0, 1,   9,   28,  73,  126, 252, 344, 585,
                                757, 1134, 1332, 2044, 2198, 3096, 3528, 4681,
                                4914, 6813, 6860, 9198, 9632, 11988, 12168, 16380};
inline const int kSigma5[25] = {0, 1,     33,    244,   1057,  3126,  8052,  16808, 33825,
                                59293, 103158, 161052, 257908, 371294, 554664, 762744, 1082401,
                                1419858, 1956669, 2476100, 3304182, 4101152, 5314716, 6436344, 8253300};

}  // namespace detail

// Reduce (p1, p2) to an SL(2,Z)-equivalent basis whose tau lies in the
// standard fundamental domain, with boundary representatives chosen as
// Re(tau) in (-1/2, 1/2] and Re(tau) >= 0 on |tau| = 1.
inline PeriodBasis reduce_basis(PeriodBasis b) {
    for (int it = 0; it < 256; ++it) {
        cplx tau = b.tau();
        double n = std::round(tau.real());
        b.p2 -= n * b.p1;
        tau = b.tau();
        if (std::abs(tau) < 1.0 - 1e-15) {
            cplx t = b.p1;
            b.p1 = b.p2;
            b.p2 = -t;
        } else {
            break;
        }
    }
    if (b.tau().real() <= -0.5 + 1e-15) b.p2 += b.p1;
    if (std::abs(std::abs(b.tau()) - 1.0) < 1e-15 && b.tau().real() < -1e-15) {
        cplx t = b.p1;
        b.p1 = b.p2;
        b.p2 = -t;
        if (b.tau().real() <= -0.5 + 1e-15) b.p2 += b.p1;
    }
    return b;
}

inline cplx reduce_tau(cplx tau) { return reduce_basis({cplx{1}, tau}).tau(); }

// Eisenstein E4, E6 by q-expansion; tau must lie in the fundamental domain
// (|q| <= e^{-pi sqrt 3}), where 24 terms are far below double precision.
inline std::pair<cplx, cplx> eisenstein_E4_E6(cplx tau) {
    const cplx q = std::exp(kTwoPi * kImag * tau);
    cplx e4 = 1, e6 = 1, qn = 1;
    for (int n = 1; n <= 24; ++n) {
        qn *= q;
        e4 += 240.0 * double(detail::kSigma3[n]) * qn;
        e6 -= 504.0 * double(detail::kSigma5[n]) * qn;
    }
    return {e4, e6};
}

// Weierstrass invariants g2, g3 of the lattice spanned by the basis.
inline std::pair<cplx, cplx> lattice_invariants(const PeriodBasis& basis) {
    PeriodBasis r = reduce_basis(basis);
    auto [e4, e6] = eisenstein_E4_E6(r.tau());
    cplx w = kTwoPi / r.p1;
    cplx w2 = w * w, w4 = w2 * w2;
    return {w4 * e4 / 12.0, w4 * w2 * e6 / 216.0};
}

inline cplx j_from_tau(cplx tau) {
    auto [e4, e6] = eisenstein_E4_E6(reduce_tau(tau));
    cplx e43 = e4 * e4 * e4;
    return 1728.0 * e43 / (e43 - e6 * e6);
}

// Algebraic j of w^2 = x^3 + a x + b.
inline cplx j_algebraic(cplx a, cplx b) {
    cplx a3 = 4.0 * a * a * a;
    return 1728.0 * a3 / (a3 + 27.0 * b * b);
}

// Relative defect of the basis against the exact invariants of the curve.
// dx/w is twice dx/y for the classical y^2 = 4x^3 - g2 x - g3 form, so the
// basis is validated on the half lattice.
inline double basis_defect(cplx a, cplx b, const PeriodBasis& basis) {
    auto [g2, g3] = lattice_invariants({0.5 * basis.p1, 0.5 * basis.p2});
    return rel_err(g2, -4.0 * a) + rel_err(g3, -4.0 * b);
}

// j-consistency defect: lattice j versus algebraic j, relative.
inline double j_defect(cplx a, cplx b, const PeriodBasis& basis) {
    return rel_err(j_from_tau(basis.tau()), j_algebraic(a, b));
}

// ---------------------------------------------------------------------------
// quadrature fallback

namespace detail {

// One cycle integral of dx/w over the doubled segment [ei, ej]:
//   2 * (1/i) * Int_{-pi/2}^{pi/2} dtheta / sqrt(x(sin th) - ek),
// with the sqrt branch tracked continuously along the segment.
inline cplx segment_cycle(cplx ei, cplx ej, cplx ek, int nodes = 192) {
    const cplx c = 0.5 * (ei + ej), r = 0.5 * (ej - ei);
    cplx acc = 0;
    cplx prev_root{0};
    const double h = kPi / double(nodes);
    for (int m = 0; m < nodes; ++m) {
        double th = -0.5 * kPi + (m + 0.5) * h;  // midpoint rule in theta
        cplx x = c + r * std::sin(th);
        cplx root = std::sqrt(x - ek);
        if (m > 0 && std::abs(root + prev_root) < std::abs(root - prev_root)) root = -root;
        prev_root = root;
        acc += 1.0 / root;
    }
    return 2.0 * acc * h / kImag;
}

}  // namespace detail

// Periods by direct quadrature of the two segment cycles (e1e2), (e2e3).
// Slower than the AGM; used as the branch-ambiguity fallback.
inline PeriodBasis curve_periods_quadrature(cplx a, cplx b) {
    auto e = depressed_cubic_roots(a, b);
    cplx q1 = detail::segment_cycle(e[2], e[1], e[0]);
    cplx q2 = detail::segment_cycle(e[1], e[0], e[2]);
    PeriodBasis basis{q1, q2};
    if (basis.area() < 0) basis.p2 = -basis.p2;
    double best = basis_defect(a, b, basis);
    // the two cycles can come out as a non-primitive sublattice pairing;
    // repair with small integer recombinations if needed
    if (best > 1e-8) {
        for (int m1 = -2; m1 <= 2 && best > 1e-8; ++m1)
            for (int m2 = -2; m2 <= 2 && best > 1e-8; ++m2) {
                if (m1 == 0 && m2 == 0) continue;
                PeriodBasis t{q1, q2 + double(m1) * q1};
                t.p1 += double(m2) * t.p2;
                if (std::abs(t.area()) < 1e-12 * abs2(t.p1)) continue;
                if (t.area() < 0) t.p2 = -t.p2;
                double d = basis_defect(a, b, t);
                if (d < best) {
                    best = d;
                    basis = t;
                }
            }
    }
    if (best > 1e-6)
        throw numeric_error("curve_periods_quadrature: lattice validation failed, defect " +
                            std::to_string(best));
    return basis;
}

// ---------------------------------------------------------------------------
// main entry

struct CurvePeriodsDiag {
    double defect = 0;       // g2/g3 validation defect of the returned basis
    int permutation = 0;     // root labelling that validated (0 = canonical)
    bool used_quadrature = false;
};

// Marked period basis of dx/w on w^2 = x^3 + a x + b via the complex AGM:
//   p1 = 2 pi / M(sqrt(e1-e3), sqrt(e1-e2)),
//   p2 = 2 pi i / M(sqrt(e1-e3), sqrt(e2-e3)),
// tried over root labellings until the lattice validates against g2, g3.
inline PeriodBasis curve_periods(cplx a, cplx b, CurvePeriodsDiag* diag = nullptr) {
    const auto e = depressed_cubic_roots(a, b);
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    PeriodBasis best_basis;
    double best = std::numeric_limits<double>::infinity();
    int best_perm = 0;
    for (int pi = 0; pi < 6; ++pi) {
        const cplx e1 = e[perms[pi][0]], e2 = e[perms[pi][1]], e3 = e[perms[pi][2]];
        cplx m1 = agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2));
        cplx m2 = agm(std::sqrt(e1 - e3), std::sqrt(e2 - e3));
        if (m1 == cplx{0} || m2 == cplx{0}) continue;
        PeriodBasis basis{kTwoPi / m1, kTwoPi * kImag / m2};
        if (std::abs(basis.area()) < 1e-12 * abs2(basis.p1)) continue;
        if (basis.area() < 0) basis.p2 = -basis.p2;
        double d = basis_defect(a, b, basis);
        if (d < best) {
            best = d;
            best_basis = basis;
            best_perm = pi;
        }
        if (d < 1e-9) break;
    }
    if (best < 1e-8) {
        if (diag) *diag = {best, best_perm, false};
        return best_basis;
    }
    PeriodBasis basis = curve_periods_quadrature(a, b);
    if (diag) *diag = {basis_defect(a, b, basis), -1, true};
    return basis;
}

}  // namespace k3c
