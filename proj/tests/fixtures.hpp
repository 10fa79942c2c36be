#pragma once
// Shared fibration fixtures: one engineered model per Kodaira type (singular
// fiber at t = 0 unless noted) and a generic 24-I1 K3 model with a fixed seed.

#include <random>

#include "k3c/fibration.hpp"

namespace fixtures {

using k3c::Poly;
using k3c::WeierstrassFibration;
using k3c::cplx;

inline Poly P(std::initializer_list<double> c) {
    std::vector<cplx> v;
    for (double x : c) v.push_back(cplx{x, 0.0});
    return Poly(std::move(v));
}

// a = -3, b = 1 + t: Delta = 27 (t - 1)(t + 3), I1 fibers at t = 1 and t = -3
inline WeierstrassFibration i1() { return {P({-3}), P({1, 1}), "i1"}; }

// a = -3, b = 2 - t^2: Delta = 27 t^2 (t^2 - 4), I2 at t = 0, I1 at t = +-2
inline WeierstrassFibration i2() { return {P({-3}), P({2, 0, -1}), "i2"}; }

// a = 0, b = t: type II at t = 0
inline WeierstrassFibration type_II() { return {P({}), P({0, 1}), "II"}; }

// a = t, b = 0: type III at t = 0
inline WeierstrassFibration type_III() { return {P({0, 1}), P({}), "III"}; }

// a = 0, b = t^2: type IV at t = 0
inline WeierstrassFibration type_IV() { return {P({}), P({0, 0, 1}), "IV"}; }

// a = t^2, b = t^3: Delta = 31 t^6, I0* at t = 0
inline WeierstrassFibration type_I0star() { return {P({0, 0, 1}), P({0, 0, 0, 1}), "I0*"}; }

// a = -3 t^2, b = 2 t^3 + t^4: Delta = 27 t^7 (t + 4), I1* at t = 0
inline WeierstrassFibration type_I1star() { return {P({0, 0, -3}), P({0, 0, 0, 2, 1}), "I1*"}; }

// a = 0, b = t^4: type IV* at t = 0
inline WeierstrassFibration type_IVstar() { return {P({}), P({0, 0, 0, 0, 1}), "IV*"}; }

// a = t^3, b = 0: type III* at t = 0
inline WeierstrassFibration type_IIIstar() { return {P({0, 0, 0, 1}), P({}), "III*"}; }

// a = 0, b = t^5: type II* at t = 0
inline WeierstrassFibration type_IIstar() { return {P({}), P({0, 0, 0, 0, 0, 1}), "II*"}; }

struct TypedFixture {
    WeierstrassFibration W;
    k3c::KodairaType type;
    cplx at;
    double rho0;  // safe fitting radius around `at`
};

inline std::vector<TypedFixture> all_types() {
    using k3c::KodairaClass;
    return {
        {i1(), {KodairaClass::Ik, 1}, cplx{1, 0}, 0.5},
        {i2(), {KodairaClass::Ik, 2}, cplx{0, 0}, 0.5},
        {type_II(), {KodairaClass::II, 0}, cplx{0, 0}, 0.5},
        {type_III(), {KodairaClass::III, 0}, cplx{0, 0}, 0.5},
        {type_IV(), {KodairaClass::IV, 0}, cplx{0, 0}, 0.5},
        {type_I0star(), {KodairaClass::I0star, 0}, cplx{0, 0}, 0.5},
        {type_I1star(), {KodairaClass::Ikstar, 1}, cplx{0, 0}, 0.5},
        {type_IVstar(), {KodairaClass::IVstar, 0}, cplx{0, 0}, 0.5},
        {type_IIIstar(), {KodairaClass::IIIstar, 0}, cplx{0, 0}, 0.5},
        {type_IIstar(), {KodairaClass::IIstar, 0}, cplx{0, 0}, 0.5},
    };
}

// Generic K3 model: random degree-(8,12) coefficient pair from a fixed seed,
// chosen so all 24 discriminant roots are simple and well separated.
inline WeierstrassFibration generic_k3(uint64_t seed = 2024) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<cplx> ac(9), bc(13);
    for (auto& c : ac) c = cplx{U(rng), U(rng)};
    for (auto& c : bc) c = cplx{U(rng), U(rng)};
    return {Poly(std::move(ac)), Poly(std::move(bc)), "genericK3"};
}

}  // namespace fixtures
