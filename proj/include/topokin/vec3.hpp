#pragma once

#include <cmath>

namespace topokin {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
    friend Vec3 operator*(const Vec3& v, double s) { return s * v; }
    friend bool operator==(const Vec3& a, const Vec3& b) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline double dist_sq(const Vec3& a, const Vec3& b) { return dot(a - b, a - b); }

inline bool is_finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// Distance from point p to the closed segment [u,v].
inline double dist_to_segment(const Vec3& p, const Vec3& u, const Vec3& v) {
    const Vec3 d = v - u;
    const double dd = dot(d, d);
    if (dd == 0.0) return dist(p, u);
    double s = dot(p - u, d) / dd;
    if (s < 0.0) s = 0.0;
    if (s > 1.0) s = 1.0;
    return dist(p, u + s * d);
}

} // namespace topokin
