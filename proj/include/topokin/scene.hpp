#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "topokin/errors.hpp"
#include "topokin/surface.hpp"
#include "topokin/trajectory.hpp"

namespace topokin {

struct Scene {
    Surface surface;
    Trajectory trajectory;
    double mass = 1.0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_num(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SceneError(line, "bad number '" + s + "'");
    }
}

inline std::vector<double> parse_num_list(const std::string& s, int line) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_num(trim(item), line));
    return out;
}

// key=value tokens after the surface kind
inline Surface parse_surface(std::istringstream& rest, int line) {
    std::string kind;
    rest >> kind;
    std::string tok;
    double radius = std::nan(""), major = std::nan(""), minor = std::nan(""), zz = std::nan("");
    Vec3 center{};
    while (rest >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw SceneError(line, "expected key=value, got '" + tok + "'");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "radius") radius = parse_num(val, line);
        else if (key == "major") major = parse_num(val, line);
        else if (key == "minor") minor = parse_num(val, line);
        else if (key == "z") zz = parse_num(val, line);
        else if (key == "center") {
            const auto c = parse_num_list(val, line);
            if (c.size() != 3) throw SceneError(line, "center requires three components");
            center = {c[0], c[1], c[2]};
        } else {
            throw SceneError(line, "unknown surface parameter '" + key + "'");
        }
    }
    auto need = [&](double v, const char* name) {
        if (std::isnan(v)) throw SceneError(line, std::string("surface requires ") + name);
        return v;
    };
    if (kind == "sphere") return Surface::sphere(need(radius, "radius=R"), center);
    if (kind == "cylinder") return Surface::cylinder(need(radius, "radius=R"));
    if (kind == "torus") return Surface::torus(need(major, "major=R"), need(minor, "minor=r"));
    if (kind == "plane") return Surface::plane(need(zz, "z=z0"));
    if (kind == "none") return Surface::none();
    throw SceneError(line, "unknown surface kind '" + kind + "'");
}

} // namespace detail

// Line-oriented scene format: one `surface`, one `interval a b`, and either
// the three component expressions `x = ...`, `y = ...`, `z = ...` or a single
// `trajectory <catalog-name> p1,p2,...`. `mass = m` is optional. `#` starts a
// comment; blank lines are ignored.
inline Scene load_scene(std::istream& in, const std::string& origin = "<stream>") {
    std::optional<Surface> surface;
    std::optional<std::pair<double, double>> interval;
    std::optional<std::string> xs, ys, zs;
    std::optional<std::pair<std::string, std::vector<double>>> catalog;
    std::optional<double> mass;

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string s = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;

        std::istringstream iss(s);
        std::string head;
        iss >> head;

        auto once = [&](bool already, const char* what) {
            if (already) throw SceneError(line, std::string("duplicate directive '") + what + "'");
        };

        if (head == "surface") {
            once(surface.has_value(), "surface");
            surface = detail::parse_surface(iss, line);
        } else if (head == "interval") {
            once(interval.has_value(), "interval");
            std::string sa, sb, extra;
            iss >> sa >> sb;
            if (sb.empty()) throw SceneError(line, "interval requires two numbers");
            if (iss >> extra) throw SceneError(line, "interval takes exactly two numbers");
            const double a = detail::parse_num(sa, line), b = detail::parse_num(sb, line);
            if (!(a < b)) throw SceneError(line, "interval requires a < b");
            interval = {a, b};
        } else if (head == "trajectory") {
            once(catalog.has_value(), "trajectory");
            std::string name, plist;
            iss >> name >> plist;
            if (name.empty()) throw SceneError(line, "trajectory requires a catalog name");
            std::vector<double> params;
            if (!plist.empty()) params = detail::parse_num_list(plist, line);
            catalog = {name, params};
        } else if (head == "x" || head == "y" || head == "z" || head == "mass" ||
                   head.starts_with("x=") || head.starts_with("y=") || head.starts_with("z=") ||
                   head.starts_with("mass=")) {
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw SceneError(line, "expected '=' after '" + head + "'");
            const std::string key = detail::trim(s.substr(0, eq));
            const std::string val = detail::trim(s.substr(eq + 1));
            if (val.empty()) throw SceneError(line, "missing value after '='");
            auto set = [&](std::optional<std::string>& slot) {
                once(slot.has_value(), key.c_str());
                slot = val;
            };
            if (key == "x") set(xs);
            else if (key == "y") set(ys);
            else if (key == "z") set(zs);
            else if (key == "mass") {
                once(mass.has_value(), "mass");
                mass = detail::parse_num(val, line);
            } else {
                throw SceneError(line, "unknown directive '" + key + "'");
            }
        } else {
            throw SceneError(line, "unknown directive '" + head + "'");
        }
    }

    if (!surface) throw SceneError(line, "missing 'surface' directive");
    if (!interval) throw SceneError(line, "missing 'interval' directive");

    Scene scene;
    scene.surface = *surface;
    scene.mass = mass.value_or(1.0);
    try {
        if (catalog) {
            if (xs || ys || zs)
                throw SceneError(line, "'trajectory' conflicts with x/y/z expressions");
            scene.trajectory = make_catalog_trajectory(catalog->first, catalog->second,
                                                       interval->first, interval->second);
        } else {
            if (!xs || !ys || !zs)
                throw SceneError(line, "missing x/y/z expressions (or a 'trajectory' line)");
            scene.trajectory = make_expression_trajectory(*xs, *ys, *zs, interval->first,
                                                          interval->second, origin);
        }
    } catch (const SceneError&) {
        throw;
    } catch (const Error& e) {
        throw SceneError(line, e.what());
    }
    return scene;
}

inline Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scene file '" + path + "'");
    return load_scene(in, path);
}

} // namespace topokin
