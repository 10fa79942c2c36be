#pragma once
// Weierstrass elliptic fibrations w^2 = x^3 + a(t) x + b(t) over the
// projective line: discriminant, singular fibers, Kodaira classification
// from vanishing orders, and the per-type invariant tables.

#include <optional>
#include <string>
#include <vector>

#include "k3c/complex_poly.hpp"
#include "k3c/elliptic.hpp"

namespace k3c {

// ---------------------------------------------------------------------------
// Kodaira types

enum class KodairaClass { Ik, II, III, IV, I0star, Ikstar, IVstar, IIIstar, IIstar,
                          Smooth, NonMinimal, Unknown };

struct KodairaType {
    KodairaClass cls = KodairaClass::Unknown;
    int k = 0;  // the index for Ik / Ik*

    bool operator==(const KodairaType&) const = default;

    std::string name() const {
        switch (cls) {
            case KodairaClass::Ik: return "I" + std::to_string(k);
            case KodairaClass::II: return "II";
            case KodairaClass::III: return "III";
            case KodairaClass::IV: return "IV";
            case KodairaClass::I0star: return "I0*";
            case KodairaClass::Ikstar: return "I" + std::to_string(k) + "*";
            case KodairaClass::IVstar: return "IV*";
            case KodairaClass::IIIstar: return "III*";
            case KodairaClass::IIstar: return "II*";
            case KodairaClass::Smooth: return "smooth";
            case KodairaClass::NonMinimal: return "non-minimal";
            default: return "unknown";
        }
    }
};

// Classification of a minimal Weierstrass model by the vanishing orders
// (ord a, ord b, ord Delta); pure function of the triple.
inline KodairaType classify_orders(int orda, int ordb, int ordd) {
    if (ordd <= 0) return {KodairaClass::Smooth, 0};
    if (orda == 0 && ordb == 0) return {KodairaClass::Ik, ordd};
    if (orda >= 4 && ordb >= 6) return {KodairaClass::NonMinimal, 0};
    if (orda >= 1 && ordb == 1) return {KodairaClass::II, 0};
    if (orda == 1 && ordb >= 2) return {KodairaClass::III, 0};
    if (orda >= 2 && ordb == 2) return {KodairaClass::IV, 0};
    if (orda >= 2 && ordb >= 3) {
        if (ordd == 6) return {KodairaClass::I0star, 0};
        if (orda == 2 && ordb == 3 && ordd >= 7) return {KodairaClass::Ikstar, ordd - 6};
        if (orda >= 3 && ordb == 4) return {KodairaClass::IVstar, 0};
        if (orda == 3 && ordb >= 5) return {KodairaClass::IIIstar, 0};
        if (orda >= 4 && ordb == 5) return {KodairaClass::IIstar, 0};
    }
    return {KodairaClass::Unknown, 0};
}

// Exact rational, used for the predicted volume exponents.
struct Rational {
    long num = 0, den = 1;
    double value() const { return double(num) / double(den); }
    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

// Largest component multiplicity of the normal-crossings model of the fiber.
inline int multiplicity_max(KodairaType t) {
    switch (t.cls) {
        case KodairaClass::Ik: return 1;
        case KodairaClass::II: return 6;
        case KodairaClass::III: return 4;
        case KodairaClass::IV: return 3;
        case KodairaClass::I0star: return 2;
        case KodairaClass::Ikstar: return 2;
        case KodairaClass::IVstar: return 3;
        case KodairaClass::IIIstar: return 4;
        case KodairaClass::IIstar: return 6;
        default: return 1;
    }
}

// Predicted decay exponents (alpha, d) of the fiberwise volume density
// phi ~ C |y|^alpha (1 - log|y|)^d near each fiber type, from the scaling
// analysis of the Weierstrass form. All satisfy alpha > -2 and
// alpha >= -2(l-1)/l for l = multiplicity_max.
inline std::pair<Rational, int> predicted_exponents(KodairaType t) {
    switch (t.cls) {
        case KodairaClass::Ik: return {{0, 1}, 1};
        case KodairaClass::II: return {{-1, 3}, 0};
        case KodairaClass::III: return {{-1, 2}, 0};
        case KodairaClass::IV: return {{-2, 3}, 0};
        case KodairaClass::I0star: return {{-1, 1}, 0};
        case KodairaClass::Ikstar: return {{-1, 1}, 1};
        case KodairaClass::IVstar: return {{-4, 3}, 0};
        case KodairaClass::IIIstar: return {{-3, 2}, 0};
        case KodairaClass::IIstar: return {{-5, 3}, 0};
        default: return {{0, 1}, 0};
    }
}

// Minimal quasi-unipotence pair: smallest beta with (T^beta - I)^d = 0.
inline std::pair<int, int> quasi_unipotence_signature(KodairaType t) {
    switch (t.cls) {
        case KodairaClass::Ik: return {1, t.k == 0 ? 1 : 2};
        case KodairaClass::II: return {6, 1};
        case KodairaClass::III: return {4, 1};
        case KodairaClass::IV: return {3, 1};
        case KodairaClass::I0star: return {2, 1};
        case KodairaClass::Ikstar: return {2, 2};
        case KodairaClass::IVstar: return {3, 1};
        case KodairaClass::IIIstar: return {4, 1};
        case KodairaClass::IIstar: return {6, 1};
        default: return {1, 1};
    }
}

// Trace of the local monodromy representative; together with det = 1 and the
// quasi-unipotence pair this pins the conjugacy class in SL(2,Z).
inline int monodromy_trace(KodairaType t) {
    switch (t.cls) {
        case KodairaClass::Ik: return 2;
        case KodairaClass::II: return 1;
        case KodairaClass::III: return 0;
        case KodairaClass::IV: return -1;
        case KodairaClass::I0star: return -2;
        case KodairaClass::Ikstar: return -2;
        case KodairaClass::IVstar: return -1;
        case KodairaClass::IIIstar: return 0;
        case KodairaClass::IIstar: return 1;
        default: return 2;
    }
}

// ---------------------------------------------------------------------------
// fibration

struct FibrationDiagnostics {
    std::vector<std::string> warnings;
};

class WeierstrassFibration {
  public:
    // a: coefficients of a(t) ascending, deg <= 8; b: deg <= 12.
    WeierstrassFibration(Poly a, Poly b, std::string label = "")
        : a_(std::move(a)), b_(std::move(b)), label_(std::move(label)) {
        if (a_.degree() > 8)
            throw config_error("fibration '" + label_ + "': deg a = " +
                               std::to_string(a_.degree()) + " exceeds 8");
        if (b_.degree() > 12)
            throw config_error("fibration '" + label_ + "': deg b = " +
                               std::to_string(b_.degree()) + " exceeds 12");
        delta_ = (Poly::constant(4.0) * a_ * a_ * a_) + (Poly::constant(27.0) * b_ * b_);
        if (delta_.is_zero())
            throw config_error("fibration '" + label_ +
                               "': discriminant is identically zero (not elliptic)");
    }

    const Poly& a() const { return a_; }
    const Poly& b() const { return b_; }
    const Poly& discriminant() const { return delta_; }
    const std::string& label() const { return label_; }

    cplx a_at(cplx t) const { return a_.eval(t); }
    cplx b_at(cplx t) const { return b_.eval(t); }
    cplx delta_at(cplx t) const { return delta_.eval(t); }

    // Chart at infinity: s = 1/t with weights (8, 12),
    //   a~(s) = s^8 a(1/s),  b~(s) = s^12 b(1/s).
    // Involutive up to degree padding by construction.
    WeierstrassFibration infinity_chart() const {
        std::vector<cplx> at(9, cplx{}), bt(13, cplx{});
        for (int i = 0; i <= a_.degree(); ++i) at[8 - i] = a_.coeffs()[i];
        for (int i = 0; i <= b_.degree(); ++i) bt[12 - i] = b_.coeffs()[i];
        return WeierstrassFibration(Poly(std::move(at)), Poly(std::move(bt)),
                                    label_.empty() ? "" : label_ + "@inf");
    }

  private:
    Poly a_, b_, delta_;
    std::string label_;
};

// One discriminant point with everything the classification knows about it.
struct SingularFiberRecord {
    bool at_infinity = false;
    cplx location{};            // meaningless when at_infinity
    int ord_a = 0, ord_b = 0, ord_delta = 0;
    KodairaType type;
    int multiplicity_max = 1;
    Rational alpha_pred;
    int d_pred = 0;
    bool resolved = true;       // from the root clustering
    double root_residual = 0;

    // filled by downstream modules
    std::optional<std::array<long, 4>> monodromy;     // row-major 2x2
    std::optional<std::pair<int, int>> quasi;         // (beta, d)
    std::optional<double> alpha_fit;
    std::optional<int> d_fit;
};

namespace detail {

inline SingularFiberRecord classify_at(const WeierstrassFibration& W, cplx t0,
                                       int mult, double sep, double residual, bool resolved) {
    SingularFiberRecord rec;
    rec.location = t0;
    rec.ord_delta = mult;
    double rv = std::max(1e-6, std::min(0.25 * sep, 0.05 * (1.0 + std::abs(t0))));
    rec.ord_a = W.a().order_at(t0, rv);
    rec.ord_b = W.b().order_at(t0, rv);
    rec.type = classify_orders(rec.ord_a, rec.ord_b, rec.ord_delta);
    rec.multiplicity_max = multiplicity_max(rec.type);
    auto [ap, dp] = predicted_exponents(rec.type);
    rec.alpha_pred = ap;
    rec.d_pred = dp;
    rec.resolved = resolved;
    rec.root_residual = residual;
    return rec;
}

}  // namespace detail

// Locate and classify all singular fibers: the roots of Delta on the affine
// chart, plus a record at t = infinity when the infinity chart vanishes at
// s = 0. Unresolved root clusters are reported, never merged away.
inline std::vector<SingularFiberRecord> singular_fibers(const WeierstrassFibration& W,
                                                        FibrationDiagnostics* diag = nullptr) {
    std::vector<SingularFiberRecord> out;
    auto clusters = poly_roots(W.discriminant());

    for (size_t i = 0; i < clusters.size(); ++i) {
        double sep = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < clusters.size(); ++j)
            if (j != i) sep = std::min(sep, std::abs(clusters[i].center - clusters[j].center));
        if (!std::isfinite(sep)) sep = 1.0 + std::abs(clusters[i].center);
        auto rec = detail::classify_at(W, clusters[i].center, clusters[i].multiplicity, sep,
                                       clusters[i].residual, clusters[i].resolved);
        if (diag && !rec.resolved)
            diag->warnings.push_back("unresolved root cluster near (" +
                                     std::to_string(rec.location.real()) + "," +
                                     std::to_string(rec.location.imag()) + ")");
        if (diag && rec.type.cls == KodairaClass::NonMinimal)
            diag->warnings.push_back("non-minimal fiber at finite t");
        out.push_back(std::move(rec));
    }

    // fiber at infinity
    WeierstrassFibration Winf = W.infinity_chart();
    int ordd_inf = Winf.discriminant().order_at(0.0, 1e-3);
    if (ordd_inf >= 1 && ordd_inf < kOrderInf) {
        SingularFiberRecord rec;
        rec.at_infinity = true;
        rec.ord_delta = ordd_inf;
        rec.ord_a = Winf.a().order_at(0.0, 1e-3);
        rec.ord_b = Winf.b().order_at(0.0, 1e-3);
        rec.type = classify_orders(rec.ord_a, rec.ord_b, rec.ord_delta);
        rec.multiplicity_max = multiplicity_max(rec.type);
        auto [ap, dp] = predicted_exponents(rec.type);
        rec.alpha_pred = ap;
        rec.d_pred = dp;
        if (diag && rec.type.cls == KodairaClass::NonMinimal)
            diag->warnings.push_back("non-minimal fiber at t = infinity");
        out.push_back(std::move(rec));
    }
    return out;
}

// Sum of ord Delta over both charts; equals 24 for a K3 model.
inline int total_discriminant_degree(const WeierstrassFibration& W) {
    int total = 0;
    for (const auto& r : singular_fibers(W)) total += r.ord_delta;
    return total;
}

// Minimality of the model at a finite point: not both ord a >= 4, ord b >= 6.
inline bool minimal_at(const WeierstrassFibration& W, cplx t0, double radius = 1e-4) {
    return !(W.a().order_at(t0, radius) >= 4 && W.b().order_at(t0, radius) >= 6);
}

inline bool minimal_at_infinity(const WeierstrassFibration& W) {
    WeierstrassFibration Winf = W.infinity_chart();
    return !(Winf.a().order_at(0.0, 1e-3) >= 4 && Winf.b().order_at(0.0, 1e-3) >= 6);
}

}  // namespace k3c
