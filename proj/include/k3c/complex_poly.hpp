#pragma once
// Dense univariate polynomials over C, with the root machinery needed for
// Weierstrass discriminants: scaled companion-matrix eigenvalues, Newton
// polishing, multiplicity-aware clustering, and numeric vanishing orders.

#include <algorithm>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "k3c/common.hpp"

namespace k3c {

// Sentinel order for an identically-zero polynomial ("treated as large").
inline constexpr int kOrderInf = 1 << 20;

class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(cplx v) { return Poly({v}); }

    const std::vector<cplx>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return c_.empty() ? -1 : int(c_.size()) - 1; }
    cplx leading() const { return c_.empty() ? cplx{} : c_.back(); }

    double coeff_scale() const {
        double s = 0;
        for (const cplx& c : c_) s = std::max(s, std::abs(c));
        return s;
    }

    cplx eval(cplx x) const {
        cplx r = 0;
        for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    // Value and first derivative in one Horner pass.
    std::pair<cplx, cplx> eval_d(cplx x) const {
        cplx p = 0, dp = 0;
        for (size_t i = c_.size(); i-- > 0;) {
            dp = dp * x + p;
            p = p * x + c_[i];
        }
        return {p, dp};
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<cplx> d(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = double(i) * c_[i];
        return Poly(std::move(d));
    }

    // Taylor coefficients about t0 (repeated synthetic division).
    std::vector<cplx> taylor_at(cplx t0) const {
        std::vector<cplx> w = c_;
        std::vector<cplx> out(c_.size(), cplx{});
        for (size_t k = 0; k < out.size(); ++k) {
            // divide w by (x - t0); remainder is the k-th Taylor coefficient
            cplx rem = 0;
            for (size_t i = w.size(); i-- > 0;) {
                cplx tmp = w[i];
                w[i] = rem;
                rem = tmp + rem * t0;
            }
            out[k] = rem;
            if (!w.empty()) w.erase(w.begin());
        }
        return out;
    }

    // Numeric vanishing order at t0, judged on the disc |x - t0| <= radius:
    // the first Taylor term that is not negligible against the largest term
    // at that scale. Returns kOrderInf for the zero polynomial.
    int order_at(cplx t0, double radius, double rel_tol = 1e-7) const {
        if (is_zero()) return kOrderInf;
        std::vector<cplx> t = taylor_at(t0);
        double rk = 1.0, peak = 0.0;
        std::vector<double> mag(t.size());
        for (size_t k = 0; k < t.size(); ++k) {
            mag[k] = std::abs(t[k]) * rk;
            peak = std::max(peak, mag[k]);
            rk *= radius;
        }
        if (peak == 0.0) return kOrderInf;
        for (size_t k = 0; k < t.size(); ++k)
            if (mag[k] > rel_tol * peak) return int(k);
        return kOrderInf;
    }

    Poly operator+(const Poly& o) const {
        std::vector<cplx> r(std::max(c_.size(), o.c_.size()), cplx{});
        for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
        return Poly(std::move(r));
    }

    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<cplx> r(c_.size() + o.c_.size() - 1, cplx{});
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return Poly(std::move(r));
    }

    Poly scaled(cplx s) const {
        std::vector<cplx> r = c_;
        for (cplx& v : r) v *= s;
        return Poly(std::move(r));
    }

  private:
    void trim() {
        double s = coeff_scale();
        double tol = s * 1e-14;
        while (!c_.empty() && std::abs(c_.back()) <= tol) c_.pop_back();
        if (!c_.empty() && s == 0.0) c_.clear();
    }

    std::vector<cplx> c_;
};

struct RootCluster {
    cplx center;
    int multiplicity = 1;   // number of eigenvalues merged into this cluster
    double radius = 0;      // spread of the merged eigenvalues
    double residual = 0;    // |p(center)| relative to coefficient scale
    bool resolved = true;   // false: multiplicity could not be confirmed, or
                            // two clusters sit closer than the separation tol
};

struct RootOptions {
    double polish_tol = 1e-12;     // Newton target for |p| / scale
    double cluster_tol = 1e-5;     // single-linkage merge radius (x scale)
    double separation_tol = 1e-8;  // closer distinct clusters are flagged
    int max_newton = 24;
};

namespace detail {

// Coefficient-based root magnitude bound, used to rescale the variable so
// the companion matrix is well conditioned for extreme coefficient ranges.
inline double root_scale(const std::vector<cplx>& c) {
    const double an = std::abs(c.back());
    double s = 0;
    int n = int(c.size()) - 1;
    for (int k = 0; k < n; ++k) {
        double ck = std::abs(c[k]);
        if (ck > 0) s = std::max(s, std::pow(ck / an, 1.0 / double(n - k)));
    }
    return s > 0 ? s : 1.0;
}

}  // namespace detail

// All roots of p via companion-matrix eigenvalues plus Newton polishing,
// grouped into multiplicity clusters. Multiple roots surface as eigenvalue
// clouds of radius ~ eps^(1/m); each cloud is condensed with the modified
// Newton step x -= m f/f' and the claimed multiplicity is verified against
// the Taylor magnitudes at the refined center.
inline std::vector<RootCluster> poly_roots(const Poly& p, const RootOptions& opt = {}) {
    std::vector<RootCluster> out;
    int n = p.degree();
    if (n <= 0) return out;

    const std::vector<cplx>& c = p.coeffs();
    if (n == 1) {
        out.push_back({-c[0] / c[1], 1, 0.0, 0.0, true});
        return out;
    }

    const double s = detail::root_scale(c);
    // companion matrix of the monic rescaled polynomial q(u) = p(s u)/(an s^n)
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    {
        std::vector<cplx> q(c.size());
        double sk = 1.0;
        for (int k = 0; k <= n; ++k) {
            q[k] = c[k] * sk;
            sk *= s;
        }
        for (int k = 0; k < n; ++k) A(k, n - 1) = -q[k] / q[n];
        for (int k = 1; k < n; ++k) A(k, k - 1) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw numeric_error("poly_roots: eigenvalue iteration did not converge");

    std::vector<cplx> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()(i) * s;

    // plain Newton polish (stalls harmlessly on multiple roots)
    const double fscale = p.coeff_scale();
    for (cplx& r : roots) {
        for (int it = 0; it < opt.max_newton; ++it) {
            auto [f, df] = p.eval_d(r);
            double fs = fscale * std::max(1.0, std::pow(std::abs(r), double(n)));
            if (std::abs(f) <= opt.polish_tol * fs) break;
            if (std::abs(df) == 0.0) break;
            cplx step = f / df;
            if (std::abs(step) > 0.5 * s + 0.5 * std::abs(r)) break;
            r -= step;
        }
    }

    // single-linkage clustering
    std::vector<int> comp(n, -1);
    const double merge_r = opt.cluster_tol * s;
    int ncomp = 0;
    for (int i = 0; i < n; ++i) {
        if (comp[i] >= 0) continue;
        comp[i] = ncomp;
        std::vector<int> stack{i};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v)
                if (comp[v] < 0 && std::abs(roots[u] - roots[v]) < merge_r) {
                    comp[v] = ncomp;
                    stack.push_back(v);
                }
        }
        ++ncomp;
    }

    for (int g = 0; g < ncomp; ++g) {
        RootCluster cl;
        cplx sum = 0;
        int m = 0;
        for (int i = 0; i < n; ++i)
            if (comp[i] == g) {
                sum += roots[i];
                ++m;
            }
        cl.center = sum / double(m);
        cl.multiplicity = m;
        for (int i = 0; i < n; ++i)
            if (comp[i] == g) cl.radius = std::max(cl.radius, std::abs(roots[i] - cl.center));

        if (m > 1) {
            // modified Newton, quadratic for an exact m-fold root
            for (int it = 0; it < opt.max_newton; ++it) {
                auto [f, df] = p.eval_d(cl.center);
                if (std::abs(df) == 0.0) break;
                cplx step = double(m) * f / df;
                if (std::abs(step) > merge_r * 64) break;
                cl.center -= step;
                if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(cl.center))) break;
            }
        }

        double fs = fscale * std::max(1.0, std::pow(std::abs(cl.center), double(n)));
        cl.residual = std::abs(p.eval(cl.center)) / fs;

        // confirm the multiplicity from the Taylor magnitudes at the center
        double rv = std::max(10.0 * cl.radius, 1e-6 * s);
        int ord = p.order_at(cl.center, rv, 1e-4);
        cl.resolved = (ord == m);
        out.push_back(cl);
    }

    std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
        return a.center.imag() < b.center.imag();
    });

    // distinct clusters closer than the separation tolerance: flag, never merge
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = i + 1; j < out.size(); ++j)
            if (std::abs(out[i].center - out[j].center) < opt.separation_tol * std::max(1.0, s)) {
                out[i].resolved = false;
                out[j].resolved = false;
            }
    return out;
}

}  // namespace k3c
