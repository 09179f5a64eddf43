#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "topokin/errors.hpp"
#include "topokin/trajectory.hpp"
#include "topokin/vec3.hpp"

namespace topokin {

enum class SurfaceKind { sphere, cylinder, torus, plane, none };

inline std::string to_string(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::sphere: return "sphere";
        case SurfaceKind::cylinder: return "cylinder";
        case SurfaceKind::torus: return "torus";
        case SurfaceKind::plane: return "plane";
        case SurfaceKind::none: return "none";
    }
    return "?";
}

// Implicit surface described by a signed membership residual (zero on the
// surface). Local 2D structure of the catalog surfaces holds by construction
// and is not checked at runtime.
struct Surface {
    SurfaceKind kind = SurfaceKind::none;
    std::vector<double> params;
    std::function<double(const Vec3&)> residual = [](const Vec3&) { return 0.0; };

    static Surface sphere(double radius, Vec3 center = {}) {
        Surface s;
        s.kind = SurfaceKind::sphere;
        s.params = {radius, center.x, center.y, center.z};
        s.residual = [radius, center](const Vec3& p) {
            return dist_sq(p, center) - radius * radius;
        };
        return s;
    }

    // axis fixed to z
    static Surface cylinder(double radius) {
        Surface s;
        s.kind = SurfaceKind::cylinder;
        s.params = {radius};
        s.residual = [radius](const Vec3& p) { return p.x * p.x + p.y * p.y - radius * radius; };
        return s;
    }

    static Surface torus(double major, double minor) {
        Surface s;
        s.kind = SurfaceKind::torus;
        s.params = {major, minor};
        s.residual = [major, minor](const Vec3& p) {
            const double q = std::sqrt(p.x * p.x + p.y * p.y) - major;
            return q * q + p.z * p.z - minor * minor;
        };
        return s;
    }

    static Surface plane(double z0) {
        Surface s;
        s.kind = SurfaceKind::plane;
        s.params = {z0};
        s.residual = [z0](const Vec3& p) { return p.z - z0; };
        return s;
    }

    static Surface none() { return Surface{}; }
};

struct ValidationReport {
    bool passed = false;
    double max_residual = 0.0;
    double worst_t = 0.0;
    int samples_checked = 0;
    std::vector<std::string> messages;
};

// Checks zeta([a,b]) subset of M by sampling |residual| at n equally spaced
// times, endpoints included.
inline ValidationReport validate_on_surface(const Trajectory& traj, const Surface& surf,
                                            int n_samples, double tol) {
    if (n_samples < 2) throw Error("validate_on_surface requires at least 2 samples");
    if (!(tol > 0.0)) throw Error("validate_on_surface requires tol > 0");

    ValidationReport rep;
    rep.worst_t = traj.a;
    for (int i = 0; i < n_samples; ++i) {
        const double t = traj.a + traj.span() * i / (n_samples - 1);
        const double r = std::fabs(surf.residual(position(traj, t)));
        if (!std::isfinite(r)) throw Error("non-finite surface residual at t=" + std::to_string(t));
        if (r > rep.max_residual) {
            rep.max_residual = r;
            rep.worst_t = t;
        }
    }
    rep.samples_checked = n_samples;
    rep.passed = rep.max_residual <= tol;
    if (!rep.passed)
        rep.messages.push_back("max |residual| " + std::to_string(rep.max_residual) + " at t=" +
                               std::to_string(rep.worst_t) + " exceeds tol " + std::to_string(tol));
    return rep;
}

// Cross-checks reported d1 against a central difference of d0, and d2 against
// a central difference of d1, at interior sample points.
inline ValidationReport validate_smoothness(const Trajectory& traj, int n_samples,
                                            double fd_step, double fd_tol) {
    if (n_samples < 3) throw Error("validate_smoothness requires at least 3 samples");
    if (!(fd_step > 0.0) || !(fd_tol > 0.0)) throw Error("fd_step and fd_tol must be positive");
    if (traj.span() <= 4.0 * fd_step)
        throw Error("domain too short for fd_step " + std::to_string(fd_step));

    ValidationReport rep;
    rep.worst_t = traj.a;
    const double lo = traj.a + 2.0 * fd_step;
    const double hi = traj.b - 2.0 * fd_step;
    for (int i = 0; i < n_samples; ++i) {
        const double t = lo + (hi - lo) * i / (n_samples - 1);
        const Jet jm = evaluate_jet(traj, t - fd_step, 2);
        const Jet j0 = evaluate_jet(traj, t, 2);
        const Jet jp = evaluate_jet(traj, t + fd_step, 2);
        const Vec3 fd1 = (1.0 / (2.0 * fd_step)) * (jp.d0 - jm.d0);
        const Vec3 fd2 = (1.0 / (2.0 * fd_step)) * (jp.d1 - jm.d1);
        const Vec3 e1 = fd1 - j0.d1;
        const Vec3 e2 = fd2 - j0.d2;
        const double err = std::max({std::fabs(e1.x), std::fabs(e1.y), std::fabs(e1.z),
                                     std::fabs(e2.x), std::fabs(e2.y), std::fabs(e2.z)});
        if (err > rep.max_residual) {
            rep.max_residual = err;
            rep.worst_t = t;
        }
    }
    rep.samples_checked = n_samples;
    rep.passed = rep.max_residual <= fd_tol;
    if (!rep.passed)
        rep.messages.push_back("finite-difference mismatch " + std::to_string(rep.max_residual) +
                               " at t=" + std::to_string(rep.worst_t));
    return rep;
}

} // namespace topokin
