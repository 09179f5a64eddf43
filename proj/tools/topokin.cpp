// topokin — scene-driven CLI for measure-theoretic curve kinematics.
//
// Exit codes: 0 success, 1 surface validation failure, 2 usage/parse error,
// 3 numeric non-convergence in a requested result.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topokin/topokin.hpp"

namespace {

using namespace topokin;

std::string num(double v) {
    if (v == 0.0) v = 0.0; // normalize -0
    char b[40];
    std::snprintf(b, sizeof(b), "%.12g", v);
    return b;
}

struct CommonFlags {
    std::string scene_path;
    std::string measure = "set";
    double eps0 = 0.0;
    double ratio = 0.5;
    int max_rungs = 30;
    double conv_tol = 1e-4;
    double rel_tol = 1e-8;
    int samples = 50;
    std::string out_path;
    bool skip_validate = false;
    double tol = 1e-9;
    double at = std::nan("");
    std::string quantity = "both";

    MeasureMode mode() const {
        if (measure == "set") return MeasureMode::set;
        if (measure == "traversal") return MeasureMode::traversal;
        throw Error("--measure must be 'set' or 'traversal'");
    }

    NetOptions net() const {
        NetOptions n;
        n.eps0 = eps0;
        n.ratio = ratio;
        n.max_rungs = max_rungs;
        n.conv_tol = conv_tol;
        return n;
    }

    MeasureOptions measure_opts() const {
        MeasureOptions m;
        m.rel_tol = rel_tol;
        return m;
    }
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_at, bool has_samples) {
    cmd->add_option("scene", f.scene_path, "scene file")->required();
    cmd->add_option("--measure", f.measure, "image measure semantics: set|traversal");
    cmd->add_option("--eps0", f.eps0, "initial ball radius (default: 0.1*min(1,diameter))");
    cmd->add_option("--ratio", f.ratio, "ladder shrink ratio in (0,1)");
    cmd->add_option("--max-rungs", f.max_rungs, "maximum ladder rungs");
    cmd->add_option("--conv-tol", f.conv_tol, "relative rung agreement tolerance");
    cmd->add_option("--rel-tol", f.rel_tol, "relative tolerance for measures");
    cmd->add_option("--out", f.out_path, "write output to file instead of stdout");
    cmd->add_flag("--skip-validate", f.skip_validate, "skip the surface containment check");
    cmd->add_option("--tol", f.tol, "surface validation tolerance");
    if (needs_at) cmd->add_option("--at", f.at, "time at which to evaluate")->required();
    if (has_samples) cmd->add_option("--samples", f.samples, "number of profile samples");
}

std::ostream& open_out(const CommonFlags& f, std::ofstream& file) {
    if (f.out_path.empty()) return std::cout;
    file.open(f.out_path, std::ios::binary);
    if (!file) throw Error("cannot open output file '" + f.out_path + "'");
    return file;
}

// Returns false (exit 1) when a surface is declared and containment fails.
bool gate_validation(const Scene& scene, const CommonFlags& f) {
    if (f.skip_validate || scene.surface.kind == SurfaceKind::none) return true;
    const ValidationReport rep = validate_on_surface(scene.trajectory, scene.surface, 1000, f.tol);
    if (!rep.passed)
        std::cerr << "validation failed: max |residual| " << num(rep.max_residual) << " at t="
                  << num(rep.worst_t) << " (tol " << num(f.tol) << ")\n";
    return rep.passed;
}

void print_speed_row(std::ostream& os, double t, const SpeedEstimate& est) {
    os << num(t) << "," << num(est.value) << "," << (est.converged ? 1 : 0) << ","
       << num(est.oracle_speed) << "," << num(est.inf_over_rungs) << "," << est.rungs.size()
       << "\n";
}

constexpr const char* kSpeedHeader = "t,speed,converged,oracle_speed,inf_over_rungs,rungs_used\n";

int run_validate(const Scene& scene, const CommonFlags& f) {
    std::ofstream file;
    std::ostream& os = open_out(f, file);
    const ValidationReport surf =
        scene.surface.kind == SurfaceKind::none
            ? ValidationReport{true, 0.0, scene.trajectory.a, 0, {}}
            : validate_on_surface(scene.trajectory, scene.surface, 1000, f.tol);
    const ValidationReport smooth = validate_smoothness(
        scene.trajectory, 200, 1e-4 * std::min(1.0, scene.trajectory.span()), 1e-5);
    os << "check,passed,max_residual,worst_t,samples\n";
    os << "surface," << (surf.passed ? 1 : 0) << "," << num(surf.max_residual) << ","
       << num(surf.worst_t) << "," << surf.samples_checked << "\n";
    os << "smoothness," << (smooth.passed ? 1 : 0) << "," << num(smooth.max_residual) << ","
       << num(smooth.worst_t) << "," << smooth.samples_checked << "\n";
    return (surf.passed && smooth.passed) ? 0 : 1;
}

int run_arclength(const Scene& scene, const CommonFlags& f) {
    std::ofstream file;
    std::ostream& os = open_out(f, file);
    const MeasureOptions m = f.measure_opts();
    bool all_converged = true;
    if (f.quantity == "traversal" || f.quantity == "both") {
        const LengthEstimate le = partition_arc_length_whole(scene.trajectory, m);
        os << "traversal_length," << num(le.value) << "\n";
        all_converged = all_converged && le.converged;
    }
    if (f.quantity == "image" || f.quantity == "both") {
        const ImageMeasure im = image_measure_whole(scene.trajectory, m);
        os << "image_measure," << num(im.value) << "\n";
        all_converged = all_converged && im.converged;
    }
    if (f.quantity != "traversal" && f.quantity != "image" && f.quantity != "both")
        throw Error("--quantity must be traversal|image|both");
    return all_converged ? 0 : 3;
}

int run_avgspeed(const Scene& scene, const CommonFlags& f) {
    std::ofstream file;
    std::ostream& os = open_out(f, file);
    const AverageSpeed avg = average_speed(scene.trajectory, f.measure_opts(), f.mode());
    os << "average_speed," << num(avg.value) << "\n";
    return avg.converged ? 0 : 3;
}

int run_speed(const Scene& scene, const CommonFlags& f, bool accel) {
    std::ofstream file;
    std::ostream& os = open_out(f, file);
    const SpeedEstimate est =
        accel ? acceleration_magnitude(scene.trajectory, f.at, f.net(), f.measure_opts(), f.mode())
              : instantaneous_speed(scene.trajectory, f.at, f.net(), f.measure_opts(), f.mode());
    os << kSpeedHeader;
    print_speed_row(os, f.at, est);
    return est.converged ? 0 : 3;
}

int run_force(const Scene& scene, const CommonFlags& f) {
    std::ofstream file;
    std::ostream& os = open_out(f, file);
    const Vec3 F = newton_force(scene.trajectory, scene.mass, f.at);
    os << "t,Fx,Fy,Fz\n";
    os << num(f.at) << "," << num(F.x) << "," << num(F.y) << "," << num(F.z) << "\n";
    return 0;
}

int run_profile(const Scene& scene, const CommonFlags& f) {
    if (f.samples < 2) throw Error("--samples must be at least 2");
    std::ofstream file;
    std::ostream& os = open_out(f, file);
    const Trajectory& traj = scene.trajectory;
    bool all_converged = true;
    os << kSpeedHeader;
    for (int i = 0; i < f.samples; ++i) {
        const double t = traj.a + traj.span() * i / (f.samples - 1);
        const SpeedEstimate est = instantaneous_speed(traj, t, f.net(), f.measure_opts(), f.mode());
        print_speed_row(os, t, est);
        all_converged = all_converged && est.converged;
    }
    return all_converged ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"measure-theoretic kinematics of curves on surfaces"};
    app.require_subcommand(1);

    CommonFlags flags;
    CLI::App* c_validate = app.add_subcommand("validate", "check surface containment and smoothness");
    CLI::App* c_arclength = app.add_subcommand("arclength", "traversal length and image measure");
    CLI::App* c_avgspeed = app.add_subcommand("avgspeed", "average speed over the whole domain");
    CLI::App* c_speed = app.add_subcommand("speed", "instantaneous speed at --at");
    CLI::App* c_accel = app.add_subcommand("accel", "acceleration magnitude at --at");
    CLI::App* c_force = app.add_subcommand("force", "Newton force mass*zeta'' at --at");
    CLI::App* c_profile = app.add_subcommand("profile", "speed profile CSV over N samples");

    add_common(c_validate, flags, false, false);
    add_common(c_arclength, flags, false, false);
    c_arclength->add_option("--quantity", flags.quantity, "traversal|image|both");
    add_common(c_avgspeed, flags, false, false);
    add_common(c_speed, flags, true, false);
    add_common(c_accel, flags, true, false);
    add_common(c_force, flags, true, false);
    add_common(c_profile, flags, false, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const Scene scene = topokin::load_scene(flags.scene_path);
        if (!app.got_subcommand(c_validate) && !gate_validation(scene, flags)) return 1;

        if (app.got_subcommand(c_validate)) return run_validate(scene, flags);
        if (app.got_subcommand(c_arclength)) return run_arclength(scene, flags);
        if (app.got_subcommand(c_avgspeed)) return run_avgspeed(scene, flags);
        if (app.got_subcommand(c_speed)) return run_speed(scene, flags, false);
        if (app.got_subcommand(c_accel)) return run_speed(scene, flags, true);
        if (app.got_subcommand(c_force)) return run_force(scene, flags);
        if (app.got_subcommand(c_profile)) return run_profile(scene, flags);
        return 2;
    } catch (const topokin::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
