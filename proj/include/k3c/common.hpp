#pragma once
// Shared numeric basics for the k3c library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace k3c {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
inline const cplx kImag{0.0, 1.0};

// Thrown when a numerical contract cannot be met (non-convergence,
// residual above tolerance, ...). Carries a human-readable diagnostic.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown on precondition violations (point on the discriminant, sample
// outside a chart domain, ...).
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user-facing configuration (CLI / JSON inputs).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double sqr(double x) { return x * x; }
inline cplx sqr(cplx x) { return x * x; }

inline double abs2(cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }

// Relative distance, guarded against zero scale.
inline double rel_err(cplx got, cplx want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline bool near_integer(double x, double tol) {
    return std::abs(x - std::round(x)) < tol;
}

}  // namespace k3c
