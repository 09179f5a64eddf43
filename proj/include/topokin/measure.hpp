#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "topokin/errors.hpp"
#include "topokin/interval_set.hpp"
#include "topokin/trajectory.hpp"
#include "topokin/vec3.hpp"

namespace topokin {

struct MeasureOptions {
    int scan_points_per_unit_time = 4096;
    double root_tol = 1e-12;        // in t
    double rel_tol = 1e-8;
    int max_refinement_depth = 40;
    double coincide_tol = 1e-7;     // ambient length
    double discretization_step = 1e-3; // in t
};

struct LengthEstimate {
    double value = 0.0;
    double lower_bound = 0.0;
    int refinement_depth = 0;
    bool converged = false;
};

struct ImageMeasure {
    double value = 0.0;
    bool converged = false;
};

namespace detail {

inline double ball_gap(const Trajectory& traj, double t, const Vec3& center, double radius) {
    return dist_sq(position(traj, t), center) - radius * radius;
}

// Bisect a sign change of g on [lo,hi] (g(lo), g(hi) of opposite strict/weak
// sign classes: one side has g<0, the other g>=0) down to root_tol in t.
template <class G>
double bisect_root(G&& g, double lo, double hi, bool lo_inside, double root_tol) {
    for (int i = 0; i < 200 && hi - lo > root_tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) < 0.0) == lo_inside)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Sublevel set {g < 0} on [lo,hi] from a scan of n+1 equally spaced samples.
template <class G>
void assemble_sublevel(G&& g, double lo, double hi, int n, double root_tol, IntervalSet& out) {
    const double h = (hi - lo) / n;
    double prev_t = lo;
    double prev_g = g(lo);
    if (!std::isfinite(prev_g)) throw Error("non-finite trajectory evaluation during preimage scan");
    bool open = prev_g < 0.0;
    double start = lo;
    for (int i = 1; i <= n; ++i) {
        const double t = (i == n) ? hi : lo + i * h;
        const double gi = g(t);
        if (!std::isfinite(gi)) throw Error("non-finite trajectory evaluation during preimage scan");
        const bool inside = gi < 0.0;
        if (inside && !open) {
            start = bisect_root(g, prev_t, t, false, root_tol);
            open = true;
        } else if (!inside && open) {
            out.add(start, bisect_root(g, prev_t, t, true, root_tol));
            open = false;
        }
        prev_t = t;
        prev_g = gi;
    }
    if (open) out.add(start, hi);
}

} // namespace detail

// Preimage of the open ball B(center, radius) under the trajectory, as a set
// of parameter intervals. Scan-and-bisect: tangential contacts without a sign
// change carry no measure and are ignored.
inline IntervalSet preimage_ball_intervals(const Trajectory& traj, const Vec3& center,
                                           double radius, const MeasureOptions& opts = {}) {
    if (!(radius > 0.0)) throw Error("preimage ball radius must be positive");
    auto g = [&](double t) { return detail::ball_gap(traj, t, center, radius); };
    const int n = std::max(1, (int)std::ceil(opts.scan_points_per_unit_time * traj.span()));
    IntervalSet out;
    detail::assemble_sublevel(g, traj.a, traj.b, n, opts.root_tol, out);
    out.normalize();
    return out;
}

// Same sublevel set, but searched only inside a previously known superset
// (the preimage at any larger radius). Resolves arbitrarily small balls
// without a full-domain rescan.
inline IntervalSet refine_ball_intervals(const Trajectory& traj, const Vec3& center,
                                         double radius, const IntervalSet& superset,
                                         const MeasureOptions& opts = {},
                                         int samples_per_interval = 64) {
    if (!(radius > 0.0)) throw Error("preimage ball radius must be positive");
    auto g = [&](double t) { return detail::ball_gap(traj, t, center, radius); };
    IntervalSet out;
    for (const auto& iv : superset.intervals)
        detail::assemble_sublevel(g, iv.lo, iv.hi, samples_per_interval, opts.root_tol, out);
    out.normalize();
    return out;
}

// Traversal arc length: supremum over partitions of summed chord lengths,
// approached by repeated bisection. Chord sums are monotone non-decreasing
// under refinement and always bound the length from below.
inline LengthEstimate partition_arc_length(const Trajectory& traj, const IntervalSet& restrict_to,
                                           const MeasureOptions& opts = {}) {
    std::vector<std::vector<Vec3>> pts;
    for (const auto& iv : restrict_to.intervals)
        pts.push_back({position(traj, iv.lo), position(traj, iv.hi)});

    auto chord_sum = [&]() {
        double total = 0.0;
        for (const auto& poly : pts)
            for (std::size_t i = 1; i < poly.size(); ++i) total += dist(poly[i - 1], poly[i]);
        return total;
    };

    LengthEstimate est;
    est.value = chord_sum();
    constexpr std::size_t kMaxPoints = std::size_t(1) << 21;
    for (int depth = 1; depth <= opts.max_refinement_depth; ++depth) {
        std::size_t total_pts = 0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const auto& iv = restrict_to.intervals[k];
            const auto& old_poly = pts[k];
            const std::size_t n = old_poly.size() - 1;
            std::vector<Vec3> next;
            next.reserve(2 * n + 1);
            for (std::size_t i = 0; i < n; ++i) {
                const double tl = iv.lo + iv.length() * i / n;
                const double tr = iv.lo + iv.length() * (i + 1) / n;
                next.push_back(old_poly[i]);
                next.push_back(position(traj, 0.5 * (tl + tr)));
            }
            next.push_back(old_poly.back());
            pts[k] = std::move(next);
            total_pts += pts[k].size();
        }
        const double prev = est.value;
        est.value = chord_sum();
        est.refinement_depth = depth;
        if (!std::isfinite(est.value)) throw Error("non-finite chord sum");
        if (depth >= 3 && est.value - prev <= opts.rel_tol * std::max(est.value, 1e-300)) {
            est.converged = true;
            break;
        }
        if (total_pts > kMaxPoints) break;
    }
    est.lower_bound = est.value;
    return est;
}

inline LengthEstimate partition_arc_length_whole(const Trajectory& traj,
                                                 const MeasureOptions& opts = {}) {
    return partition_arc_length(traj, IntervalSet::whole(traj.a, traj.b), opts);
}

namespace detail {

template <class F>
double adaptive_simpson(F&& f, double lo, double hi, double flo, double fmid, double fhi,
                        double whole, double tol, int depth, int max_depth, bool& ok) {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm), frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth) {
        ok = false;
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth + 1, max_depth, ok) +
           adaptive_simpson(f, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth + 1, max_depth, ok);
}

} // namespace detail

// Arc length by adaptive quadrature of |zeta'(t)|; serves as an independent
// cross-check of the partition supremum.
inline double quadrature_arc_length(const Trajectory& traj, const IntervalSet& restrict_to,
                                    const MeasureOptions& opts = {}) {
    auto speed = [&](double t) {
        const Vec3 v = evaluate_jet(traj, t, 1).d1;
        const double s = norm(v);
        if (!std::isfinite(s)) throw Error("non-finite speed during quadrature");
        return s;
    };
    double total = 0.0;
    bool ok = true;
    for (const auto& iv : restrict_to.intervals) {
        // coarse pass to pick an absolute tolerance scale
        double coarse = 0.0;
        const int m = 32;
        for (int i = 0; i < m; ++i) {
            const double l = iv.lo + iv.length() * i / m;
            const double r = iv.lo + iv.length() * (i + 1) / m;
            coarse += (r - l) / 6.0 * (speed(l) + 4.0 * speed(0.5 * (l + r)) + speed(r));
        }
        const double tol = opts.rel_tol * std::max(std::fabs(coarse), 1e-12);
        const double flo = speed(iv.lo), fhi = speed(iv.hi), fmid = speed(0.5 * (iv.lo + iv.hi));
        const double whole = iv.length() / 6.0 * (flo + 4.0 * fmid + fhi);
        total += detail::adaptive_simpson(speed, iv.lo, iv.hi, flo, fmid, fhi, whole, tol, 0,
                                          opts.max_refinement_depth, ok);
    }
    if (!ok) throw ConvergenceError("adaptive quadrature hit max depth", total);
    return total;
}

inline double quadrature_arc_length_whole(const Trajectory& traj, const MeasureOptions& opts = {}) {
    return quadrature_arc_length(traj, IntervalSet::whole(traj.a, traj.b), opts);
}

namespace detail {

struct PolySegment {
    Vec3 p, q;
    double t0, t1;
    double len;
};

// Uniform spatial hash over segment endpoints, for coincidence queries.
class SegmentGrid {
public:
    SegmentGrid(double cell) : cell_(std::max(cell, 1e-300)) {}

    void insert(int idx, const PolySegment& s) {
        const std::int64_t kp = key(s.p), kq = key(s.q);
        cells_[kp].push_back(idx);
        if (kq != kp) cells_[kq].push_back(idx);
    }

    template <class Fn>
    void for_candidates(const Vec3& p, Fn&& fn) const {
        const std::int64_t ix = coord(p.x), iy = coord(p.y), iz = coord(p.z);
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy)
                for (std::int64_t dz = -1; dz <= 1; ++dz) {
                    auto it = cells_.find(pack(ix + dx, iy + dy, iz + dz));
                    if (it == cells_.end()) continue;
                    for (int idx : it->second) fn(idx);
                }
    }

private:
    double cell_;
    std::unordered_map<std::int64_t, std::vector<int>> cells_;

    std::int64_t coord(double v) const { return (std::int64_t)std::floor(v / cell_); }
    static std::int64_t pack(std::int64_t x, std::int64_t y, std::int64_t z) {
        const std::int64_t m = (std::int64_t(1) << 21) - 1;
        return ((x & m) << 42) | ((y & m) << 21) | (z & m);
    }
    std::int64_t key(const Vec3& p) const { return pack(coord(p.x), coord(p.y), coord(p.z)); }
};

// One multiplicity-1 polyline length pass at a fixed discretization step.
// A segment is dropped as a retrace when both of its endpoints lie within the
// coincidence tolerance of earlier, parameter-distant segments. The per-
// candidate tolerance widens by len^2 to absorb chord sag of the earlier pass.
inline double image_measure_pass(const Trajectory& traj, const IntervalSet& restrict_to,
                                 double step, double coincide_tol) {
    std::vector<PolySegment> segs;
    double max_len = 0.0;
    for (const auto& iv : restrict_to.intervals) {
        const int n = std::max((int)std::ceil(iv.length() / step), 24);
        Vec3 prev = position(traj, iv.lo);
        double prev_t = iv.lo;
        for (int i = 1; i <= n; ++i) {
            const double t = (i == n) ? iv.hi : iv.lo + iv.length() * i / n;
            const Vec3 p = position(traj, t);
            PolySegment s{prev, p, prev_t, t, dist(prev, p)};
            max_len = std::max(max_len, s.len);
            segs.push_back(s);
            prev = p;
            prev_t = t;
        }
    }

    SegmentGrid grid(max_len + coincide_tol + max_len * max_len + 1e-12);
    std::vector<int> accepted;
    accepted.reserve(segs.size());

    auto near_accepted = [&](const PolySegment& s, const Vec3& pt) {
        bool hit = false;
        grid.for_candidates(pt, [&](int idx) {
            if (hit) return;
            const PolySegment& c = segs[idx];
            // skip parameter-adjacent segments (they share endpoints by construction)
            const double span = (s.t1 - s.t0) + (c.t1 - c.t0);
            const double gap = std::max(s.t0, c.t0) - std::min(s.t1, c.t1);
            if (gap < 2.0 * span) return;
            const double tol = coincide_tol + c.len * c.len;
            if (dist_to_segment(pt, c.p, c.q) <= tol) hit = true;
        });
        return hit;
    };

    double total = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const PolySegment& s = segs[i];
        if (!(is_finite(s.p) && is_finite(s.q))) throw Error("non-finite point in image polyline");
        const bool coincident = near_accepted(s, s.p) && near_accepted(s, s.q);
        if (!coincident) {
            total += s.len;
            grid.insert((int)i, s);
        }
    }
    return total;
}

} // namespace detail

// Measure of the image set zeta(restrict_to) counted without multiplicity
// (1-dimensional Hausdorff measure of the point set). For injective curves
// this equals the traversal arc length; for retraced curves it does not.
inline ImageMeasure image_measure(const Trajectory& traj, const IntervalSet& restrict_to,
                                  const MeasureOptions& opts = {}) {
    ImageMeasure out;
    double span = 0.0;
    for (const auto& iv : restrict_to.intervals) span += iv.length();
    double step = opts.discretization_step;
    double prev = detail::image_measure_pass(traj, restrict_to, step, opts.coincide_tol);
    for (int level = 0; level < 2; ++level) {
        step *= 0.5;
        const double cur = detail::image_measure_pass(traj, restrict_to, step, opts.coincide_tol);
        const double scale = std::max(std::fabs(cur), std::fabs(prev));
        out.value = cur;
        // Retrace seams quantize to the discretization grid, so agreement can
        // only be certified down to one segment length (step times the mean
        // speed) on top of the requested relative tolerance.
        const double seam_slack = span > 0.0 ? step * (cur / span) : 0.0;
        if (scale == 0.0 || std::fabs(cur - prev) <= 10.0 * opts.rel_tol * scale + seam_slack) {
            out.converged = true;
            return out;
        }
        prev = cur;
    }
    return out;
}

inline ImageMeasure image_measure_whole(const Trajectory& traj, const MeasureOptions& opts = {}) {
    return image_measure(traj, IntervalSet::whole(traj.a, traj.b), opts);
}

} // namespace topokin
