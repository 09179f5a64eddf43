#pragma once

#include <cmath>
#include <cstdint>

#include "topokin/errors.hpp"

namespace topokin {

// Value and first three derivatives of a scalar function of t, propagated
// through arithmetic (truncated Taylor / forward-mode AD at order 3).
struct ScalarJet {
    double c0 = 0.0; // f(t)
    double c1 = 0.0; // f'(t)
    double c2 = 0.0; // f''(t)
    double c3 = 0.0; // f'''(t)

    static ScalarJet constant(double v) { return {v, 0.0, 0.0, 0.0}; }
    static ScalarJet variable(double t) { return {t, 1.0, 0.0, 0.0}; }

    bool is_constant() const { return c1 == 0.0 && c2 == 0.0 && c3 == 0.0; }
};

inline ScalarJet operator+(const ScalarJet& a, const ScalarJet& b) {
    return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2, a.c3 + b.c3};
}

inline ScalarJet operator-(const ScalarJet& a, const ScalarJet& b) {
    return {a.c0 - b.c0, a.c1 - b.c1, a.c2 - b.c2, a.c3 - b.c3};
}

inline ScalarJet operator-(const ScalarJet& a) { return {-a.c0, -a.c1, -a.c2, -a.c3}; }

inline ScalarJet operator*(const ScalarJet& a, const ScalarJet& b) {
    return {a.c0 * b.c0,
            a.c1 * b.c0 + a.c0 * b.c1,
            a.c2 * b.c0 + 2.0 * a.c1 * b.c1 + a.c0 * b.c2,
            a.c3 * b.c0 + 3.0 * a.c2 * b.c1 + 3.0 * a.c1 * b.c2 + a.c0 * b.c3};
}

inline ScalarJet operator/(const ScalarJet& a, const ScalarJet& b) {
    if (b.c0 == 0.0) throw DomainError("division by zero");
    ScalarJet q;
    q.c0 = a.c0 / b.c0;
    q.c1 = (a.c1 - q.c0 * b.c1) / b.c0;
    q.c2 = (a.c2 - q.c0 * b.c2 - 2.0 * q.c1 * b.c1) / b.c0;
    q.c3 = (a.c3 - q.c0 * b.c3 - 3.0 * q.c1 * b.c2 - 3.0 * q.c2 * b.c1) / b.c0;
    return q;
}

// Chain rule (Faa di Bruno up to order 3) for an outer function with
// derivatives u1,u2,u3 evaluated at g.c0.
inline ScalarJet compose(const ScalarJet& g, double u0, double u1, double u2, double u3) {
    ScalarJet r;
    r.c0 = u0;
    r.c1 = u1 * g.c1;
    r.c2 = u1 * g.c2 + u2 * g.c1 * g.c1;
    r.c3 = u1 * g.c3 + 3.0 * u2 * g.c1 * g.c2 + u3 * g.c1 * g.c1 * g.c1;
    return r;
}

inline ScalarJet sin(const ScalarJet& g) {
    const double s = std::sin(g.c0), c = std::cos(g.c0);
    return compose(g, s, c, -s, -c);
}

inline ScalarJet cos(const ScalarJet& g) {
    const double s = std::sin(g.c0), c = std::cos(g.c0);
    return compose(g, c, -s, -c, s);
}

inline ScalarJet tan(const ScalarJet& g) {
    const double v = std::tan(g.c0);
    const double w = 1.0 + v * v; // sec^2
    return compose(g, v, w, 2.0 * v * w, 2.0 * w * (1.0 + 3.0 * v * v));
}

inline ScalarJet exp(const ScalarJet& g) {
    const double e = std::exp(g.c0);
    return compose(g, e, e, e, e);
}

inline ScalarJet log(const ScalarJet& g) {
    if (!(g.c0 > 0.0)) throw DomainError("log of non-positive value");
    const double x = g.c0;
    return compose(g, std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}

inline ScalarJet sqrt(const ScalarJet& g) {
    if (!(g.c0 > 0.0)) throw DomainError("sqrt of non-positive value");
    const double r = std::sqrt(g.c0);
    return compose(g, r, 0.5 / r, -0.25 / (r * g.c0), 0.375 / (r * g.c0 * g.c0));
}

inline ScalarJet atan(const ScalarJet& g) {
    const double x = g.c0;
    const double d = 1.0 + x * x;
    return compose(g, std::atan(x), 1.0 / d, -2.0 * x / (d * d), (6.0 * x * x - 2.0) / (d * d * d));
}

inline ScalarJet sinh(const ScalarJet& g) {
    const double s = std::sinh(g.c0), c = std::cosh(g.c0);
    return compose(g, s, c, s, c);
}

inline ScalarJet cosh(const ScalarJet& g) {
    const double s = std::sinh(g.c0), c = std::cosh(g.c0);
    return compose(g, c, s, c, s);
}

// base^p for a real constant exponent, via the power rule (base > 0 required).
inline ScalarJet pow(const ScalarJet& g, double p) {
    if (!(g.c0 > 0.0)) throw DomainError("fractional power of non-positive base");
    const double x = g.c0;
    const double u0 = std::pow(x, p);
    const double u1 = p * std::pow(x, p - 1.0);
    const double u2 = p * (p - 1.0) * std::pow(x, p - 2.0);
    const double u3 = p * (p - 1.0) * (p - 2.0) * std::pow(x, p - 3.0);
    return compose(g, u0, u1, u2, u3);
}

inline ScalarJet pow_int(const ScalarJet& g, std::int64_t n) {
    if (n == 0) return ScalarJet::constant(1.0);
    if (n < 0) {
        if (g.c0 == 0.0) throw DomainError("zero raised to a negative power");
        return ScalarJet::constant(1.0) / pow_int(g, -n);
    }
    ScalarJet acc = g;
    for (std::int64_t i = 1; i < n; ++i) acc = acc * g;
    return acc;
}

inline ScalarJet pow(const ScalarJet& base, const ScalarJet& expo) {
    if (expo.is_constant()) {
        const double p = expo.c0;
        const double r = std::round(p);
        if (r == p && std::fabs(p) <= 64.0) return pow_int(base, static_cast<std::int64_t>(r));
        return pow(base, p);
    }
    // variable exponent: base^e = exp(e * log(base)), base > 0 required
    return exp(expo * log(base));
}

} // namespace topokin
