#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "topokin/errors.hpp"
#include "topokin/interval_set.hpp"
#include "topokin/measure.hpp"
#include "topokin/trajectory.hpp"
#include "topokin/vec3.hpp"

namespace topokin {

// How the numerator of a neighborhood speed is measured: `set` counts the
// image as a point set (retraced portions once); `traversal` counts arc
// length with multiplicity, which recovers classical speed at retraced points.
enum class MeasureMode { set, traversal };

struct NetOptions {
    double eps0 = 0.0; // <= 0: auto, 0.1 * min(1, curve diameter)
    double ratio = 0.5;
    int max_rungs = 30;
    double conv_tol = 1e-4; // relative, consecutive rungs
    bool extrapolate = true;
};

struct SpeedRung {
    double eps = 0.0;
    double speed = 0.0;
    double image_meas = 0.0;
    double preimage_meas = 0.0;
};

struct SpeedEstimate {
    double value = 0.0;
    std::vector<SpeedRung> rungs;
    bool converged = false;
    double inf_over_rungs = 0.0;
    double oracle_speed = 0.0; // |zeta'(t)| when first-order jets exist
    bool extrapolated = false;
};

struct NeighborhoodSpeed {
    double speed = 0.0;
    double image_meas = 0.0;
    double preimage_meas = 0.0;
    bool converged = false;
};

struct AverageSpeed {
    double value = 0.0;
    bool converged = false;
};

// <v> = m(zeta([a,b])) / (b - a); the denominator is the whole time interval
// since [a,b] is the preimage of the full image.
inline AverageSpeed average_speed(const Trajectory& traj, const MeasureOptions& opts = {},
                                  MeasureMode mode = MeasureMode::set) {
    AverageSpeed out;
    if (mode == MeasureMode::set) {
        const ImageMeasure im = image_measure_whole(traj, opts);
        out.value = im.value / traj.span();
        out.converged = im.converged;
    } else {
        const LengthEstimate le = partition_arc_length_whole(traj, opts);
        out.value = le.value / traj.span();
        out.converged = le.converged;
    }
    return out;
}

namespace detail {

inline NeighborhoodSpeed speed_over_intervals(const Trajectory& traj, const IntervalSet& pre,
                                              const MeasureOptions& opts, MeasureMode mode) {
    NeighborhoodSpeed out;
    out.preimage_meas = lebesgue_measure_1d(pre);
    if (!(out.preimage_meas > 0.0))
        throw Error("empty ball preimage for an on-curve center (internal error)");
    if (mode == MeasureMode::set) {
        const ImageMeasure im = image_measure(traj, pre, opts);
        out.image_meas = im.value;
        out.converged = im.converged;
    } else {
        const LengthEstimate le = partition_arc_length(traj, pre, opts);
        out.image_meas = le.value;
        out.converged = le.converged;
    }
    out.speed = out.image_meas / out.preimage_meas;
    return out;
}

// Makes sure the component of the preimage containing t is present even when
// the ball is too small for the global scan to see it.
inline void ensure_component_at(const Trajectory& traj, double t, const Vec3& center,
                                double radius, const MeasureOptions& opts, IntervalSet& set) {
    for (const auto& iv : set.intervals)
        if (t >= iv.lo && t <= iv.hi) return;
    auto g = [&](double tt) { return ball_gap(traj, tt, center, radius); };
    if (!(g(t) < 0.0)) return;
    // march outward with doubling steps until the ball is left, then bisect
    auto expand = [&](int dir) {
        const double end = dir > 0 ? traj.b : traj.a;
        double cur = t;
        double s = std::max(opts.root_tol, traj.span() * 1e-12);
        for (;;) {
            double nxt = t + dir * s;
            if ((dir > 0 && nxt >= end) || (dir < 0 && nxt <= end)) nxt = end;
            if (g(nxt) < 0.0) {
                if (nxt == end) return end;
                cur = nxt;
                s *= 2.0;
            } else {
                return dir > 0 ? bisect_root(g, cur, nxt, true, opts.root_tol)
                               : bisect_root(g, nxt, cur, false, opts.root_tol);
            }
        }
    };
    set.add(expand(-1), expand(+1));
    set.normalize();
}

inline double estimate_diameter(const Trajectory& traj) {
    const int n = 256;
    std::vector<Vec3> p;
    p.reserve(n);
    for (int i = 0; i < n; ++i) p.push_back(position(traj, traj.a + traj.span() * i / (n - 1)));
    double d = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) d = std::max(d, dist(p[i], p[j]));
    return d;
}

} // namespace detail

// <v_x, V> with V = B(zeta(t), eps) intersected with the image.
inline NeighborhoodSpeed neighborhood_speed(const Trajectory& traj, double t, double eps,
                                            const MeasureOptions& opts = {},
                                            MeasureMode mode = MeasureMode::set) {
    if (!in_domain(traj, t)) throw Error("neighborhood_speed: t outside trajectory domain");
    if (!(eps > 0.0)) throw Error("neighborhood_speed: eps must be positive");
    const Vec3 center = position(traj, t);
    IntervalSet pre = preimage_ball_intervals(traj, center, eps, opts);
    detail::ensure_component_at(traj, t, center, eps, opts, pre);
    return detail::speed_over_intervals(traj, pre, opts, mode);
}

// Instantaneous speed as the limit of neighborhood speeds along the shrinking
// ball ladder eps_k = eps0 * ratio^k. Reports the ladder infimum alongside the
// limit; the two are distinct quantities and neither is silently substituted.
inline SpeedEstimate instantaneous_speed(const Trajectory& traj, double t,
                                         const NetOptions& net = {},
                                         const MeasureOptions& opts = {},
                                         MeasureMode mode = MeasureMode::set) {
    if (!in_domain(traj, t)) throw Error("instantaneous_speed: t outside trajectory domain");
    if (!(net.ratio > 0.0 && net.ratio < 1.0)) throw Error("net ratio must be in (0,1)");
    if (net.max_rungs < 3) throw Error("net needs at least 3 rungs");

    SpeedEstimate est;
    if (traj.max_jet_order >= 1) est.oracle_speed = norm(evaluate_jet(traj, t, 1).d1);

    double eps0 = net.eps0;
    if (!(eps0 > 0.0)) {
        const double diam = detail::estimate_diameter(traj);
        eps0 = 0.1 * std::min(1.0, diam > 0.0 ? diam : 1.0);
    }

    const Vec3 center = position(traj, t);
    IntervalSet pre = preimage_ball_intervals(traj, center, eps0, opts);
    detail::ensure_component_at(traj, t, center, eps0, opts, pre);

    bool agreed = false;
    bool last_measure_ok = false;
    double eps = eps0;
    for (int k = 0; k < net.max_rungs; ++k) {
        if (k > 0) {
            eps *= net.ratio;
            pre = refine_ball_intervals(traj, center, eps, pre, opts);
            if (pre.empty()) break; // cannot happen for an on-curve center
        }
        const NeighborhoodSpeed ns = detail::speed_over_intervals(traj, pre, opts, mode);
        est.rungs.push_back({eps, ns.speed, ns.image_meas, ns.preimage_meas});
        last_measure_ok = ns.converged;
        const std::size_t n = est.rungs.size();
        if (n >= 2) {
            const double va = est.rungs[n - 2].speed, vb = est.rungs[n - 1].speed;
            if (std::fabs(va - vb) <= net.conv_tol * std::max({std::fabs(va), std::fabs(vb), 1e-300})) {
                agreed = true;
                break;
            }
        }
    }

    if (est.rungs.empty()) throw Error("speed ladder produced no rungs (internal error)");

    est.inf_over_rungs = est.rungs[0].speed;
    for (const auto& r : est.rungs) est.inf_over_rungs = std::min(est.inf_over_rungs, r.speed);

    est.value = est.rungs.back().speed;

    // Power-law extrapolation v(eps) = v* + c * eps^p, p fitted from the tail.
    bool extrap_ok = false;
    const std::size_t n = est.rungs.size();
    if (net.extrapolate && n >= 4) {
        auto fit = [&](std::size_t last) -> std::pair<bool, double> {
            const double v0 = est.rungs[last - 2].speed;
            const double v1 = est.rungs[last - 1].speed;
            const double v2 = est.rungs[last].speed;
            const double d1 = v0 - v1, d2 = v1 - v2;
            if (d1 == 0.0 || d2 == 0.0 || (d1 > 0.0) != (d2 > 0.0)) return {false, 0.0};
            const double q = d2 / d1; // ratio^p
            if (!(q > 0.0 && q < 1.0)) return {false, 0.0};
            const double p = std::log(q) / std::log(net.ratio);
            if (p < 0.25 || p > 3.0) return {false, 0.0};
            return {true, (v2 - q * v1) / (1.0 - q)};
        };
        const auto [ok_a, va] = fit(n - 1);
        const auto [ok_b, vb] = fit(n - 2);
        if (ok_a && ok_b) {
            const double scale = std::max({std::fabs(va), std::fabs(est.value), 1.0});
            if (std::fabs(va - vb) <= net.conv_tol * scale) {
                est.value = va;
                est.extrapolated = true;
                extrap_ok = true;
            }
        }
    }

    est.converged = (agreed || extrap_ok) && last_measure_ok;
    return est;
}

// Acceleration magnitude: the same ladder applied to the velocity curve.
inline SpeedEstimate acceleration_magnitude(const Trajectory& traj, double t,
                                            const NetOptions& net = {},
                                            const MeasureOptions& opts = {},
                                            MeasureMode mode = MeasureMode::set) {
    return instantaneous_speed(derived_trajectory(traj), t, net, opts, mode);
}

// F = mass * zeta''(t), defined on the open interval (a,b).
inline Vec3 newton_force(const Trajectory& traj, double mass, double t) {
    if (!(mass > 0.0)) throw Error("newton_force: mass must be positive");
    if (!(t > traj.a && t < traj.b))
        throw Error("newton_force: t must lie strictly inside (a,b)");
    return mass * evaluate_jet(traj, t, 2).d2;
}

} // namespace topokin
