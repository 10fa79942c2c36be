#pragma once
// Analytic continuation of period lattices along paths in the base,
// monodromy extraction, quasi-unipotent structure, and the untwisting
// check for the single-valued sections sigma_i(w) = exp(-N log w / 2 pi i) e_i(w).
//
// Continuation never integrates Picard-Fuchs: at each accepted step a fresh
// AGM basis is computed and re-marked onto the transported one by the nearest
// GL(2,Z) match. The re-marking residual (distance of the predicted basis
// from the re-marked one, relative) is the built-in error monitor.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "k3c/fibration.hpp"

namespace k3c {

struct PeriodPoint {
    cplx y{};
    cplx pi1{}, pi2{};
    std::string path_id = "fresh";

    cplx tau() const { return pi2 / pi1; }
    PeriodBasis basis() const { return {pi1, pi2}; }
};

struct MonodromyMatrix {
    std::array<long, 4> m{1, 0, 0, 1};  // row-major, acting on the column (pi1, pi2)
    double residual = 0;                // max distance of the raw matrix from integers

    long det() const { return m[0] * m[3] - m[1] * m[2]; }
    long trace() const { return m[0] + m[3]; }
    bool is_identity() const { return m == std::array<long, 4>{1, 0, 0, 1}; }

    MonodromyMatrix operator*(const MonodromyMatrix& o) const {
        MonodromyMatrix r;
        r.m = {m[0] * o.m[0] + m[1] * o.m[2], m[0] * o.m[1] + m[1] * o.m[3],
               m[2] * o.m[0] + m[3] * o.m[2], m[2] * o.m[1] + m[3] * o.m[3]};
        r.residual = residual + o.residual;
        return r;
    }
};

inline MonodromyMatrix matrix_power(MonodromyMatrix T, int k) {
    MonodromyMatrix r;
    for (int i = 0; i < k; ++i) r = r * T;
    return r;
}

// Multiplicative order in SL(2,Z), or 0 if not of finite order <= bound.
inline int matrix_order(const MonodromyMatrix& T, int bound = 12) {
    MonodromyMatrix p;
    for (int k = 1; k <= bound; ++k) {
        p = p * T;
        if (p.is_identity()) return k;
    }
    return 0;
}

struct QuasiUnipotenceData {
    int beta = 1;
    int d = 1;
    // N = log(T^beta) as an exact rational matrix (integer for rank 2:
    // the series (U-I) - (U-I)^2/2 terminates at the first term).
    std::array<long, 4> N_num{0, 0, 0, 0};
    long N_den = 1;
};

// Minimal (beta, d) with (T^beta - I)^d = 0, beta searched exhaustively
// up to 12, and the nilpotent logarithm of the unipotent part.
inline QuasiUnipotenceData quasi_unipotence(const MonodromyMatrix& T) {
    if (T.det() != 1) throw domain_error("quasi_unipotence: det T != 1");
    for (int beta = 1; beta <= 12; ++beta) {
        MonodromyMatrix U = matrix_power(T, beta);
        std::array<long, 4> D{U.m[0] - 1, U.m[1], U.m[2], U.m[3] - 1};
        std::array<long, 4> D2{D[0] * D[0] + D[1] * D[2], D[0] * D[1] + D[1] * D[3],
                               D[2] * D[0] + D[3] * D[2], D[2] * D[1] + D[3] * D[3]};
        bool d1 = (D == std::array<long, 4>{0, 0, 0, 0});
        bool d2 = (D2 == std::array<long, 4>{0, 0, 0, 0});
        if (d1 || d2) {
            QuasiUnipotenceData q;
            q.beta = beta;
            q.d = d1 ? 1 : 2;
            q.N_num = D;  // log U = (U-I) - (U-I)^2/2 = U-I
            q.N_den = 1;
            return q;
        }
    }
    throw numeric_error("quasi_unipotence: no beta <= 12 works (continuation bug?)");
}

// ---------------------------------------------------------------------------
// continuation engine

struct ContinuationOptions {
    double dtau_max = 0.1;        // |tau step| per accepted step
    double remark_tol = 1e-3;     // relative residual of the GL(2,Z) re-marking
    double min_step = 1e-12;      // relative to segment length
    double disc_margin = 1e-10;   // refusal distance to the discriminant
    bool accumulate = false;      // integrate pi1 dt, pi2 dt along the path
};

struct ContinuationResult {
    PeriodPoint end;
    double worst_residual = 0;
    int steps = 0;
    double closest_root = std::numeric_limits<double>::infinity();
    cplx int_pi1{};  // int pi1 dt along the path (if accumulate)
    cplx int_pi2{};
};

class FibrationPeriods {
  public:
    explicit FibrationPeriods(WeierstrassFibration W)
        : W_(std::move(W)) {
        for (const auto& c : poly_roots(W_.discriminant())) roots_.push_back(c.center);
    }

    const WeierstrassFibration& fibration() const { return W_; }
    const std::vector<cplx>& discriminant_roots() const { return roots_; }

    double distance_to_discriminant(cplx y) const {
        double d = std::numeric_limits<double>::infinity();
        for (cplx r : roots_) d = std::min(d, std::abs(y - r));
        return d;
    }

    // Fresh marked basis at y. Refuses points closer than disc_margin to the
    // discriminant; validates the lattice against g2, g3 internally.
    PeriodPoint fiber_periods(cplx y, const ContinuationOptions& opt = {}) const {
        double d = distance_to_discriminant(y);
        if (d < opt.disc_margin)
            throw domain_error("fiber_periods: point at distance " + std::to_string(d) +
                               " from the discriminant (tolerance " +
                               std::to_string(opt.disc_margin) + ")");
        PeriodBasis basis = curve_periods(W_.a_at(y), W_.b_at(y));
        return {y, basis.p1, basis.p2, "fresh"};
    }

    // Parallel transport of the marked basis along a polyline. Step size is
    // adapted so |delta tau| < dtau_max and the re-marking of the transported
    // basis in the fresh lattice stays within remark_tol (linear prediction
    // from the previous step keeps the residual second order in the step).
    ContinuationResult continue_periods(const PeriodPoint& start,
                                        const std::vector<cplx>& polyline,
                                        const ContinuationOptions& opt = {}) const {
        ContinuationResult res;
        res.end = start;
        cplx cur_y = start.y;
        cplx p1 = start.pi1, p2 = start.pi2;
        cplx prev_p1 = p1, prev_p2 = p2;
        cplx prev_y = cur_y;

        for (cplx target : polyline) {
            if (target == cur_y) continue;
            double seg_len = std::abs(target - cur_y);
            double h = 1.0;  // fraction of remaining segment
            double done = 0.0;
            while (done < 1.0 - 1e-15) {
                h = std::min(h, 1.0 - done);
                cplx next_y = cur_y + (target - cur_y) * (h / (1.0 - done));
                double droot = distance_to_discriminant(next_y);
                res.closest_root = std::min(res.closest_root, droot);
                if (droot < opt.disc_margin) {
                    if (h * seg_len < opt.min_step * std::max(1.0, seg_len))
                        throw numeric_error(
                            "continue_periods: step underflow near discriminant, closest "
                            "approach " + std::to_string(res.closest_root));
                    h *= 0.5;
                    continue;
                }
                PeriodBasis fresh = curve_periods(W_.a_at(next_y), W_.b_at(next_y));
                // predicted transported values (linear extrapolation)
                cplx scale = (std::abs(prev_y - cur_y) > 0)
                                 ? (next_y - cur_y) / (cur_y - prev_y)
                                 : cplx{0};
                cplx pred1 = p1 + (p1 - prev_p1) * scale;
                cplx pred2 = p2 + (p2 - prev_p2) * scale;
                auto [q1, r1] = remark(fresh, pred1);
                auto [q2, r2] = remark(fresh, pred2);
                double resid = std::max(r1, r2);
                double dtau = std::abs(q2 / q1 - p2 / p1);
                if (resid > opt.remark_tol || dtau > opt.dtau_max) {
                    if (h * seg_len < opt.min_step * std::max(1.0, seg_len))
                        throw numeric_error(
                            "continue_periods: step underflow (residual " +
                            std::to_string(resid) + ", dtau " + std::to_string(dtau) + ")");
                    h *= 0.5;
                    continue;
                }
                if (opt.accumulate) {
                    // Gauss-Legendre(4) on the accepted step, nodes re-marked
                    // against linear interpolation of the endpoint bases
                    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                                                 0.3399810435848563, 0.8611363115940526};
                    static const double gw[4] = {0.3478548451374538, 0.6521451548625461,
                                                 0.6521451548625461, 0.3478548451374538};
                    cplx dy = next_y - cur_y;
                    for (int g = 0; g < 4; ++g) {
                        double u = 0.5 * (gx[g] + 1.0);
                        cplx yg = cur_y + dy * u;
                        PeriodBasis fg = curve_periods(W_.a_at(yg), W_.b_at(yg));
                        auto [v1, rr1] = remark(fg, p1 + (q1 - p1) * u);
                        auto [v2, rr2] = remark(fg, p2 + (q2 - p2) * u);
                        if (std::max(rr1, rr2) > opt.remark_tol)
                            throw numeric_error("continue_periods: quadrature node re-marking failed");
                        res.int_pi1 += 0.5 * gw[g] * v1 * dy;
                        res.int_pi2 += 0.5 * gw[g] * v2 * dy;
                    }
                }
                res.worst_residual = std::max(res.worst_residual, resid);
                ++res.steps;
                done += h;
                prev_y = cur_y;
                prev_p1 = p1;
                prev_p2 = p2;
                cur_y = next_y;
                p1 = q1;
                p2 = q2;
                h *= 1.6;
            }
        }
        res.end = {cur_y, p1, p2, start.path_id};
        return res;
    }

    // Monodromy around a counterclockwise circle. The circle must separate
    // this fiber from every other discriminant root. The loop is discretized
    // with at least 64 nodes, doubled until the integer residual stabilizes
    // below tol.
    MonodromyMatrix monodromy(cplx center, double radius,
                              const ContinuationOptions& opt = {},
                              double tol = 1e-6) const {
        for (cplx r : roots_)
            if (std::abs(r - center) > 1e-9 && std::abs(r - center) <= radius * (1.0 + 1e-9))
                throw domain_error("monodromy: circle of radius " + std::to_string(radius) +
                                   " encloses another discriminant root");
        MonodromyMatrix best;
        double best_res = std::numeric_limits<double>::infinity();
        for (int n = 64; n <= 4096; n *= 2) {
            PeriodPoint start = fiber_periods(center + radius, opt);
            std::vector<cplx> loop(n + 1);
            for (int k = 0; k <= n; ++k)
                loop[k] = center + radius * std::exp(kTwoPi * kImag * (double(k) / n));
            ContinuationResult res = continue_periods(start, loop, opt);
            auto [T, resid] = express_in_basis(start, res.end);
            if (resid < best_res) {
                best = T;
                best.residual = resid;
                best_res = resid;
            }
            if (resid < tol) return best;
        }
        throw numeric_error("monodromy: integer residual " + std::to_string(best_res) +
                            " did not reach " + std::to_string(tol) +
                            " (refine radius or steps)");
    }

    // Single-valuedness defect of sigma(w) = exp(-N log w / 2 pi i) e(w) on the
    // base-changed disc y = center + w^beta, after one counterclockwise w-loop.
    // The log w branch starts with imaginary part in [0, 2 pi).
    double untwist_defect(cplx center, int beta, cplx w_sample,
                          const ContinuationOptions& opt = {}) const {
        double rw = std::abs(w_sample);
        if (rw <= 0) throw domain_error("untwist_defect: w_sample must be nonzero");

        // monodromy of the w-loop is T_y^beta, unipotent by construction
        double ry = std::pow(rw, double(beta));
        MonodromyMatrix Ty = monodromy(center, ry, opt);
        MonodromyMatrix U = matrix_power(Ty, beta);
        QuasiUnipotenceData qu = quasi_unipotence(U);
        if (qu.beta != 1)
            throw domain_error("untwist_defect: monodromy not unipotent after base change");
        std::array<double, 4> N{double(U.m[0] - 1), double(U.m[1]), double(U.m[2]),
                                double(U.m[3] - 1)};

        double theta0 = std::arg(w_sample);
        if (theta0 < 0) theta0 += kTwoPi;  // Im log w in [0, 2 pi)
        cplx logw0 = std::log(rw) + kImag * theta0;

        cplx y0 = center + std::pow(w_sample, beta);
        PeriodPoint e0 = fiber_periods(y0, opt);

        // continue e around the w-loop: y winds beta times around the center
        int n = 256 * beta;
        std::vector<cplx> loop(n + 1);
        for (int k = 0; k <= n; ++k) {
            cplx w = rw * std::exp(kImag * (theta0 + kTwoPi * double(k) / n));
            loop[k] = center + std::pow(w, beta);
        }
        ContinuationResult res = continue_periods(e0, loop, opt);

        auto sigma = [&N](cplx xi, cplx e1, cplx e2) -> std::array<cplx, 2> {
            // exp(-N xi) = I - N xi for nilpotent N
            return {e1 - xi * (N[0] * e1 + N[1] * e2), e2 - xi * (N[2] * e1 + N[3] * e2)};
        };
        cplx xi0 = logw0 / (kTwoPi * kImag);
        cplx xi1 = (logw0 + kTwoPi * kImag) / (kTwoPi * kImag);
        auto s_before = sigma(xi0, e0.pi1, e0.pi2);
        auto s_after = sigma(xi1, res.end.pi1, res.end.pi2);
        double scale = std::max({std::abs(s_before[0]), std::abs(s_before[1]), 1e-300});
        return std::max(std::abs(s_after[0] - s_before[0]),
                        std::abs(s_after[1] - s_before[1])) / scale;
    }

    // Lasso monodromy: transport from the basepoint to the circle around the
    // fiber, loop counterclockwise, return, and express in the basepoint basis.
    MonodromyMatrix lasso_monodromy(const PeriodPoint& base, cplx center, double radius,
                                    const ContinuationOptions& opt = {}) const {
        cplx dir = (base.y - center) / std::abs(base.y - center);
        cplx entry = center + radius * dir;
        std::vector<cplx> approach{entry};
        ContinuationResult in = continue_periods(base, approach, opt);

        int n = 256;
        double phase0 = std::arg(dir);
        std::vector<cplx> loop(n + 1);
        for (int k = 0; k <= n; ++k)
            loop[k] = center + radius * std::exp(kImag * (phase0 + kTwoPi * double(k) / n));
        ContinuationResult around = continue_periods(in.end, loop, opt);

        std::vector<cplx> back{base.y};
        ContinuationResult out = continue_periods(around.end, back, opt);

        auto [T, resid] = express_in_basis(base, out.end);
        T.residual = resid;
        if (resid > 1e-6)
            throw numeric_error("lasso_monodromy: residual " + std::to_string(resid));
        return T;
    }

    // Integer coordinates of `point`'s basis in the basis of `ref` (both at
    // the same base point), with the max rounding distance.
    static std::pair<MonodromyMatrix, double> express_in_basis(const PeriodPoint& ref,
                                                               const PeriodPoint& point) {
        MonodromyMatrix T;
        double resid = 0;
        auto solve = [&](cplx target, long& mi, long& ni) {
            double det = ref.pi1.real() * ref.pi2.imag() - ref.pi1.imag() * ref.pi2.real();
            double m = (target.real() * ref.pi2.imag() - target.imag() * ref.pi2.real()) / det;
            double n = (ref.pi1.real() * target.imag() - ref.pi1.imag() * target.real()) / det;
            mi = std::lround(m);
            ni = std::lround(n);
            resid = std::max({resid, std::abs(m - double(mi)), std::abs(n - double(ni))});
        };
        solve(point.pi1, T.m[0], T.m[1]);
        solve(point.pi2, T.m[2], T.m[3]);
        return {T, resid};
    }

  private:
    // nearest integer combination of the fresh basis matching `target`
    static std::pair<cplx, double> remark(const PeriodBasis& fresh, cplx target) {
        double det = fresh.p1.real() * fresh.p2.imag() - fresh.p1.imag() * fresh.p2.real();
        double m = (target.real() * fresh.p2.imag() - target.imag() * fresh.p2.real()) / det;
        double n = (fresh.p1.real() * target.imag() - fresh.p1.imag() * target.real()) / det;
        double mi = std::round(m), ni = std::round(n);
        cplx got = mi * fresh.p1 + ni * fresh.p2;
        return {got, std::abs(got - target) / std::max(std::abs(target), 1e-300)};
    }

    WeierstrassFibration W_;
    std::vector<cplx> roots_;
};

// ---------------------------------------------------------------------------
// period cache records (JSON-lines on disk; see io.hpp for serialization)

struct PeriodCacheRecord {
    cplx y;
    cplx pi1, pi2;
    std::string path_id;
    double residual = 0;
};

}  // namespace k3c
