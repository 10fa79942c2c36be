#pragma once
// Fiberwise volume density phi(y) = 2 |pi1|^2 Im tau = 2 Im(conj(pi1) pi2)
// (the Riemann bilinear value of the fiber integral of dx/w wedge its
// conjugate), and least-squares fits of the decay model
//   log phi = alpha log rho + d log(1 - log rho) + log C
// over dyadic circles around a singular fiber.

#include <vector>

#include "k3c/periods.hpp"

namespace k3c {

inline double fiber_volume(const PeriodBasis& basis) { return 2.0 * basis.area(); }

inline double fiber_volume(const FibrationPeriods& fp, cplx y) {
    return fiber_volume(fp.fiber_periods(y).basis());
}

struct VolumeFit {
    double alpha = 0;
    int d = 0;
    double C = 0;
    double rms = 0;
    bool ambiguous = false;  // residual pattern across d not clearly V-shaped
};

struct VolumeSampleSet {
    cplx center{};
    std::vector<double> radii;                  // rho_j = rho0 * 2^-j
    std::vector<double> angles;
    std::vector<std::vector<double>> values;    // [radius][angle]
    std::vector<double> averaged;               // circle averages
    VolumeFit fitted;
};

namespace detail {

// least squares of log phi = alpha log rho + log C with fixed d
inline VolumeFit fit_fixed_d(const std::vector<double>& radii,
                             const std::vector<double>& avg, int d) {
    double sxx = 0, sx = 0, sy = 0, sxy = 0, n = 0;
    for (size_t j = 0; j < radii.size(); ++j) {
        double x = std::log(radii[j]);
        double y = std::log(avg[j]) - double(d) * std::log(1.0 - std::log(radii[j]));
        sxx += x * x;
        sx += x;
        sy += y;
        sxy += x * y;
        n += 1;
    }
    double det = n * sxx - sx * sx;
    double alpha = (n * sxy - sx * sy) / det;
    double logC = (sy * sxx - sx * sxy) / det;
    double rss = 0;
    for (size_t j = 0; j < radii.size(); ++j) {
        double x = std::log(radii[j]);
        double y = std::log(avg[j]) - double(d) * std::log(1.0 - std::log(radii[j]));
        rss += sqr(y - alpha * x - logC);
    }
    VolumeFit f;
    f.alpha = alpha;
    f.d = d;
    f.C = std::exp(logC);
    f.rms = std::sqrt(rss / double(radii.size()));
    return f;
}

}  // namespace detail

// Fit of circle-averaged samples against the decay model, d searched over
// 0..d_max. Requires all values positive (phi of a genuine fibration is).
inline VolumeFit fit_volume_model(const std::vector<double>& radii,
                                  const std::vector<double>& averaged, int d_max = 3) {
    VolumeFit best, second;
    best.rms = second.rms = std::numeric_limits<double>::infinity();
    for (int d = 0; d <= d_max; ++d) {
        VolumeFit f = detail::fit_fixed_d(radii, averaged, d);
        if (f.rms < best.rms) {
            second = best;
            best = f;
        } else if (f.rms < second.rms) {
            second = f;
        }
    }
    if (std::isfinite(second.rms) && second.rms < 1.5 * best.rms) best.ambiguous = true;
    return best;
}

// Sample phi on dyadic circles rho_j = rho0 2^-j, j = 0..J, circle-average,
// and fit. The disc of radius rho0 must contain only this fiber; the deepest
// radius must stay above 1e-8.
inline VolumeSampleSet fit_asymptotics(const FibrationPeriods& fp, cplx center, double rho0,
                                       int J, int n_angles = 16,
                                       const ContinuationOptions& opt = {}) {
    if (J < 12) throw domain_error("fit_asymptotics: J must be at least 12");
    if (rho0 * std::pow(0.5, J) < 1e-8)
        throw domain_error("fit_asymptotics: deepest radius below 1e-8");
    for (cplx r : fp.discriminant_roots())
        if (std::abs(r - center) > 1e-9 && std::abs(r - center) <= rho0 * (1 + 1e-9))
            throw domain_error("fit_asymptotics: disc of radius " + std::to_string(rho0) +
                               " contains another singular fiber");

    VolumeSampleSet s;
    s.center = center;
    for (int j = 0; j <= J; ++j) s.radii.push_back(rho0 * std::pow(0.5, j));
    for (int k = 0; k < n_angles; ++k) s.angles.push_back(kTwoPi * double(k) / n_angles);

    s.values.assign(s.radii.size(), std::vector<double>(n_angles, 0.0));
    s.averaged.assign(s.radii.size(), 0.0);
    for (size_t j = 0; j < s.radii.size(); ++j) {
        double acc = 0;
        for (int k = 0; k < n_angles; ++k) {
            cplx y = center + s.radii[j] * std::exp(kImag * s.angles[k]);
            double v = fiber_volume(fp, y);
            if (!(v > 0)) throw numeric_error("fit_asymptotics: non-positive density sample");
            s.values[j][k] = v;
            acc += v;
        }
        s.averaged[j] = acc / double(n_angles);
    }
    s.fitted = fit_volume_model(s.radii, s.averaged);
    return s;
}

// Dyadic shell integrals of phi over {rho/2 < |y - center| < rho}; their decay
// verifies integrability (alpha > -2) without any fitted model.
inline std::vector<double> shell_integrals(const FibrationPeriods& fp, cplx center,
                                           double rho0, int levels, int n_angles = 24,
                                           int n_radial = 6) {
    static const double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    std::vector<double> out;
    for (int l = 0; l < levels; ++l) {
        double hi = rho0 * std::pow(0.5, l), lo = 0.5 * hi;
        double acc = 0;
        double dr = (hi - lo) / n_radial;
        for (int i = 0; i < n_radial; ++i)
            for (int g = 0; g < 3; ++g) {
                double r = lo + dr * (i + 0.5 * (gx[g] + 1.0));
                double ring = 0;
                for (int k = 0; k < n_angles; ++k) {
                    cplx y = center + r * std::exp(kImag * kTwoPi * double(k) / n_angles);
                    ring += fiber_volume(fp, y);
                }
                acc += gw[g] * 0.5 * dr * r * ring * (kTwoPi / n_angles);
            }
        out.push_back(acc);
    }
    return out;
}

}  // namespace k3c
