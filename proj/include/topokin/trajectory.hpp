#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "topokin/errors.hpp"
#include "topokin/expr.hpp"
#include "topokin/vec3.hpp"

namespace topokin {

// Position and time derivatives of a curve at one instant. `order` is the
// highest derivative that is valid; components above it are unspecified.
struct Jet {
    double t = 0.0;
    Vec3 d0, d1, d2, d3;
    int order = 0;

    bool has(int k) const { return k <= order; }
};

// A C^2 curve on a closed time interval [a,b]. The evaluator always fills
// derivatives up to max_jet_order; evaluate_jet masks them down on request.
struct Trajectory {
    double a = 0.0;
    double b = 1.0;
    int max_jet_order = 3;
    std::string label;
    std::function<Jet(double)> eval;

    double span() const { return b - a; }
};

inline bool in_domain(const Trajectory& traj, double t) {
    const double slack = 1e-12 * (std::fabs(traj.a) + std::fabs(traj.b) + 1.0);
    return t >= traj.a - slack && t <= traj.b + slack;
}

inline Jet evaluate_jet(const Trajectory& traj, double t, int order) {
    if (!in_domain(traj, t))
        throw Error("time " + std::to_string(t) + " outside domain [" + std::to_string(traj.a) +
                    ", " + std::to_string(traj.b) + "] of trajectory '" + traj.label + "'");
    if (order > traj.max_jet_order)
        throw Error("jet order " + std::to_string(order) + " exceeds max order " +
                    std::to_string(traj.max_jet_order) + " of trajectory '" + traj.label + "'");
    Jet j = traj.eval(t);
    j.order = order;
    return j;
}

inline Vec3 position(const Trajectory& traj, double t) { return evaluate_jet(traj, t, 0).d0; }

namespace detail {

inline void require_interval(double a, double b) {
    if (!(a < b)) throw Error("interval requires a < b");
}

} // namespace detail

// Catalog of closed-form test curves, with hand-written jets up to order 3.
inline Trajectory make_catalog_trajectory(const std::string& name,
                                          const std::vector<double>& params,
                                          double a, double b) {
    detail::require_interval(a, b);
    auto arity = [&](std::size_t n) {
        if (params.size() != n)
            throw Error("catalog entry '" + name + "' expects " + std::to_string(n) +
                        " parameter(s), got " + std::to_string(params.size()));
    };

    Trajectory traj;
    traj.a = a;
    traj.b = b;
    traj.max_jet_order = 3;
    traj.label = name;

    if (name == "circle" || name == "double_circle") {
        arity(1);
        const double R = params[0];
        traj.eval = [R](double t) {
            const double c = std::cos(t), s = std::sin(t);
            Jet j;
            j.t = t;
            j.d0 = {R * c, R * s, 0.0};
            j.d1 = {-R * s, R * c, 0.0};
            j.d2 = {-R * c, -R * s, 0.0};
            j.d3 = {R * s, -R * c, 0.0};
            j.order = 3;
            return j;
        };
    } else if (name == "helix") {
        arity(2);
        const double R = params[0], c = params[1];
        traj.eval = [R, c](double t) {
            const double ct = std::cos(t), st = std::sin(t);
            Jet j;
            j.t = t;
            j.d0 = {R * ct, R * st, c * t};
            j.d1 = {-R * st, R * ct, c};
            j.d2 = {-R * ct, -R * st, 0.0};
            j.d3 = {R * st, -R * ct, 0.0};
            j.order = 3;
            return j;
        };
    } else if (name == "cubic_line") {
        arity(0);
        traj.eval = [](double t) {
            Jet j;
            j.t = t;
            j.d0 = {t * t * t, 0.0, 0.0};
            j.d1 = {3.0 * t * t, 0.0, 0.0};
            j.d2 = {6.0 * t, 0.0, 0.0};
            j.d3 = {6.0, 0.0, 0.0};
            j.order = 3;
            return j;
        };
    } else if (name == "gerono") {
        arity(1);
        const double A = params[0];
        traj.eval = [A](double t) {
            const double s = std::sin(t), c = std::cos(t);
            const double s2 = std::sin(2.0 * t), c2 = std::cos(2.0 * t);
            Jet j;
            j.t = t;
            // y = A sin t cos t = (A/2) sin 2t
            j.d0 = {A * s, 0.5 * A * s2, 0.0};
            j.d1 = {A * c, A * c2, 0.0};
            j.d2 = {-A * s, -2.0 * A * s2, 0.0};
            j.d3 = {-A * c, -4.0 * A * c2, 0.0};
            j.order = 3;
            return j;
        };
    } else if (name == "accelerating_circle") {
        arity(0);
        traj.eval = [](double t) {
            const double pi = std::numbers::pi;
            const double th = t * t / (2.0 * pi);
            const double d1 = t / pi, d2 = 1.0 / pi; // theta', theta''
            const double s = std::sin(th), c = std::cos(th);
            Jet j;
            j.t = t;
            j.d0 = {c, s, 0.0};
            j.d1 = {-s * d1, c * d1, 0.0};
            j.d2 = {-c * d1 * d1 - s * d2, -s * d1 * d1 + c * d2, 0.0};
            j.d3 = {s * d1 * d1 * d1 - 3.0 * c * d1 * d2,
                    -c * d1 * d1 * d1 - 3.0 * s * d1 * d2, 0.0};
            j.order = 3;
            return j;
        };
    } else {
        throw Error("unknown catalog trajectory '" + name + "'");
    }
    return traj;
}

// Trajectory from three scalar expressions of t; jets come from forward-mode
// jet arithmetic, so derivatives are exact to roundoff.
inline Trajectory make_expression_trajectory(const std::string& x_src,
                                             const std::string& y_src,
                                             const std::string& z_src,
                                             double a, double b,
                                             std::string label = "expr") {
    detail::require_interval(a, b);
    ExprPtr x = parse_expression(x_src);
    ExprPtr y = parse_expression(y_src);
    ExprPtr z = parse_expression(z_src);

    Trajectory traj;
    traj.a = a;
    traj.b = b;
    traj.max_jet_order = 3;
    traj.label = std::move(label);
    traj.eval = [x, y, z](double t) {
        const ScalarJet jx = eval_scalar_jet(x, t);
        const ScalarJet jy = eval_scalar_jet(y, t);
        const ScalarJet jz = eval_scalar_jet(z, t);
        Jet j;
        j.t = t;
        j.d0 = {jx.c0, jy.c0, jz.c0};
        j.d1 = {jx.c1, jy.c1, jz.c1};
        j.d2 = {jx.c2, jy.c2, jz.c2};
        j.d3 = {jx.c3, jy.c3, jz.c3};
        j.order = 3;
        return j;
    };

    // smoke check: evaluation must succeed at both ends and the midpoint
    for (double t : {a, 0.5 * (a + b), b}) traj.eval(t);
    return traj;
}

// The velocity curve zeta' viewed as a trajectory in its own right.
inline Trajectory derived_trajectory(const Trajectory& traj) {
    if (traj.max_jet_order < 3)
        throw Error("derived trajectory requires jets of order 3 on '" + traj.label + "'");
    Trajectory d;
    d.a = traj.a;
    d.b = traj.b;
    d.max_jet_order = 2;
    d.label = traj.label + "'";
    auto base = traj.eval;
    d.eval = [base](double t) {
        Jet j = base(t);
        Jet r;
        r.t = t;
        r.d0 = j.d1;
        r.d1 = j.d2;
        r.d2 = j.d3;
        r.order = 2;
        return r;
    };
    return d;
}

} // namespace topokin
