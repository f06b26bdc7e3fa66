#include "micz/run_config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "micz/errors.hpp"
#include "micz/log.hpp"

namespace micz {

using nlohmann::json;

namespace {

Vec3 parse_vec3(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(std::string(what) + " must be an array of 3 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Family parse_family(const std::string& name) {
    if (name == "flat_multi_center") return Family::FlatMultiCenter;
    if (name == "two_center_elliptic") return Family::TwoCenterElliptic;
    if (name == "stark_zeeman_parabolic") return Family::StarkZeemanParabolic;
    if (name == "curved_multi_center") return Family::CurvedMultiCenter;
    throw ConfigError("unknown family \"" + name + "\"");
}

MetricProfile parse_profile(const json& j) {
    if (j.is_null()) return MetricProfile::flat();
    const std::string kind = j.value("kind", "flat");
    if (kind == "flat") return MetricProfile::flat();
    if (kind == "sphere") return MetricProfile::sphere(j.value("r0", 1.0));
    if (kind == "pseudosphere") return MetricProfile::pseudosphere(j.value("r0", 1.0));
    if (kind == "custom") {
        if (!j.contains("r") || !j.contains("G"))
            throw ConfigError("custom profile needs sampled \"r\" and \"G\" arrays");
        return MetricProfile::custom(j["r"].get<std::vector<double>>(),
                                     j["G"].get<std::vector<double>>());
    }
    throw ConfigError("unknown profile kind \"" + kind + "\"");
}

SystemSpec parse_system(const json& j) {
    if (!j.is_object()) throw ConfigError("\"system\" must be an object");
    SystemSpec spec;
    if (!j.contains("family")) throw ConfigError("system.family is required");
    spec.family = parse_family(j["family"].get<std::string>());
    spec.cfg.e = j.value("e", 1.0);
    spec.a = j.value("a", 1.0);
    spec.cfg.B0 = {0, 0, j.value("B0", 0.0)};
    spec.cfg.E0 = {0, 0, j.value("E0", 0.0)};
    spec.profile = parse_profile(j.contains("profile") ? j["profile"] : json());
    if (!j.contains("dyons") || !j["dyons"].is_array() || j["dyons"].empty())
        throw ConfigError("system.dyons must be a non-empty array");
    int index = 0;
    for (const json& dj : j["dyons"]) {
        Dyon dy;
        dy.position = parse_vec3(dj.at("position"), "dyon position");
        dy.g = dj.value("g", 0.0);
        dy.q = dj.value("q", 0.0);
        dy.string = dj.contains("string") ? parse_vec3(dj["string"], "dyon string").normalized()
                                          : default_string_direction(index);
        if (dy.string.norm() < 0.5) throw ConfigError("dyon string direction must be nonzero");
        spec.cfg.dyons.push_back(dy);
        ++index;
    }
    try {
        validate_spec(spec);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

RunConfig parse_run_config(const json& j) {
    RunConfig rc;
    if (j.contains("mode")) rc.mode = parse_mode(j["mode"].get<std::string>());
    rc.spec = parse_system(j.at("system"));
    if (j.contains("initial_state")) {
        const json& s = j["initial_state"];
        rc.initial.t = s.value("t", 0.0);
        rc.initial.r = parse_vec3(s.at("position"), "initial position");
        rc.initial.v = parse_vec3(s.at("velocity"), "initial velocity");
    }
    if (j.contains("integrator")) {
        const json& ij = j["integrator"];
        rc.controls.rel_tol = ij.value("rel_tol", rc.controls.rel_tol);
        rc.controls.abs_tol = ij.value("abs_tol", rc.controls.abs_tol);
        rc.controls.max_step = ij.value("max_step", rc.controls.max_step);
        rc.controls.fixed_step = ij.value("fixed_step", rc.controls.fixed_step);
        rc.controls.sample_dt = ij.value("sample_dt", rc.controls.sample_dt);
        rc.controls.r_collide = ij.value("r_collide", rc.controls.r_collide);
        rc.controls.curved_canonical = ij.value("curved_canonical", false);
        rc.t_end = ij.value("t_end", rc.t_end);
        const std::string method = ij.value("method", "dopri5");
        if (method == "dopri5") {
            rc.controls.method = IntegratorMethod::Dopri5;
        } else if (method == "implicit_midpoint") {
            rc.controls.method = IntegratorMethod::ImplicitMidpoint;
        } else {
            throw ConfigError("unknown integrator method \"" + method + "\"");
        }
    }
    if (j.contains("output")) {
        const json& oj = j["output"];
        rc.output.trajectory_csv = oj.value("trajectory_csv", rc.output.trajectory_csv);
        rc.output.report_json = oj.value("report_json", rc.output.report_json);
        rc.output.validation_json = oj.value("validation_json", rc.output.validation_json);
        rc.output.green_csv = oj.value("green_csv", rc.output.green_csv);
        rc.output.sweep_csv = oj.value("sweep_csv", rc.output.sweep_csv);
    }
    rc.stride = j.value("stride", 1);
    if (rc.stride < 1) throw ConfigError("stride must be >= 1");
    rc.flag_threshold = j.value("flag_threshold", 1e-6);
    if (j.contains("green")) {
        const json& gj = j["green"];
        rc.green.r_min = gj.value("r_min", rc.green.r_min);
        rc.green.r_max = gj.value("r_max", rc.green.r_max);
        rc.green.count = gj.value("count", rc.green.count);
        if (!(rc.green.r_min > 0) || !(rc.green.r_max > rc.green.r_min) || rc.green.count < 2)
            throw ConfigError("green table needs 0 < r_min < r_max and count >= 2");
    }
    if (j.contains("sweep")) {
        SweepParams sp;
        sp.pointer = j["sweep"].at("pointer").get<std::string>();
        sp.values = j["sweep"].at("values").get<std::vector<double>>();
        if (sp.values.empty()) throw ConfigError("sweep.values must be non-empty");
        rc.sweep = sp;
    }
    return rc;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return j;
}

std::string join_path(const std::string& dir, const std::string& file) {
    if (dir.empty()) return file;
    return (std::filesystem::path(dir) / file).string();
}

struct SweepRowResult {
    std::size_t samples = 0;
    Termination termination = Termination::Completed;
    double e_rel_drift = 0.0;
    double pphi_abs_drift = 0.0;
    double sep_rel_drift = 0.0;
    bool has_sep = false;
    std::string error;
};

SweepRowResult run_sweep_point(const RunConfig& rc) {
    SweepRowResult row;
    try {
        Trajectory traj = integrate(rc.initial, rc.spec, rc.t_end, rc.controls);
        const ConservationReport rep = monitor(traj, rc.spec, rc.flag_threshold);
        row.samples = traj.samples.size();
        row.termination = traj.termination;
        if (rep.quantities.count("E")) row.e_rel_drift = rep.quantities.at("E").max_rel_drift;
        if (rep.quantities.count("p_phi"))
            row.pphi_abs_drift = rep.quantities.at("p_phi").max_abs_drift;
        for (const char* key : {"I_e", "I_p"}) {
            if (rep.quantities.count(key)) {
                row.sep_rel_drift = rep.quantities.at(key).max_rel_drift;
                row.has_sep = true;
            }
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

}  // namespace

RunMode parse_mode(const std::string& name) {
    if (name == "simulate") return RunMode::Simulate;
    if (name == "validate") return RunMode::Validate;
    if (name == "sweep") return RunMode::Sweep;
    if (name == "green") return RunMode::Green;
    throw ConfigError("unknown mode \"" + name + "\"");
}

const char* mode_name(RunMode m) {
    switch (m) {
        case RunMode::Simulate: return "simulate";
        case RunMode::Validate: return "validate";
        case RunMode::Sweep: return "sweep";
        case RunMode::Green: return "green";
    }
    return "?";
}

RunConfig parse_run_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_run_config(j);
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_json_file(path)); }

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj, const SystemSpec& spec,
                          int stride) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    const char* sep_col = spec.family == Family::TwoCenterElliptic      ? ",I_e"
                          : spec.family == Family::StarkZeemanParabolic ? ",I_p"
                                                                        : "";
    out << "t,x,y,z,vx,vy,vz,E,p_phi" << sep_col << "\n";
    const GreenFunction green = spec.family == Family::CurvedMultiCenter
                                    ? GreenFunction(spec.profile)
                                    : GreenFunction();
    const GreenFunction* gp = spec.family == Family::CurvedMultiCenter ? &green : nullptr;
    for (std::size_t k = 0; k < traj.samples.size(); k += stride) {
        const PhaseState& s = traj.samples[k];
        Vec3 vel = s.v;
        if (spec.family == Family::CurvedMultiCenter) vel = s.v / spec.profile.G(s.r.norm());
        const ConservedSet c = conserved_quantities(s, spec, gp);
        out << format_g17(s.t) << ',' << format_g17(s.r.x) << ',' << format_g17(s.r.y) << ','
            << format_g17(s.r.z) << ',' << format_g17(vel.x) << ',' << format_g17(vel.y) << ','
            << format_g17(vel.z) << ',' << format_g17(c.E) << ','
            << format_g17(axial_momentum(s, spec));
        if (*sep_col) out << ',' << format_g17(c.separation ? *c.separation : 0.0);
        out << "\n";
    }
}

void write_report_json(const std::string& path, const ConservationReport& report,
                       const Trajectory& traj) {
    json j;
    for (const auto& [name, st] : report.quantities) {
        j[name] = {{"max_abs_drift", st.max_abs_drift},
                   {"max_rel_drift", st.max_rel_drift},
                   {"flagged", st.flagged}};
    }
    j["termination"] = {{"reason", termination_name(traj.termination)},
                        {"steps", traj.steps},
                        {"rejected_steps", traj.rejected_steps},
                        {"collision_dyon", traj.collision_dyon},
                        {"t_final", traj.samples.empty() ? 0.0 : traj.samples.back().t}};
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

void write_validation_json(const std::string& path, const ValidationReport& report) {
    json j;
    j["max_dt_residual"] = report.max_dt_residual;
    j["max_dphi_residual"] = report.max_dphi_residual;
    j["turning_points"] = {
        {"xi", {report.xi_interval.lo, report.xi_interval.hi}},
        {"eta", {report.eta_interval.lo, report.eta_interval.hi}},
    };
    j["samples_compared"] = report.samples_compared;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

void write_green_csv(const std::string& path, const MetricProfile& profile,
                     const GreenTableParams& params) {
    const GreenFunction green(profile);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << "r,phi_C\n";
    for (int i = 0; i < params.count; ++i) {
        const double r =
            params.r_min + (params.r_max - params.r_min) * i / (params.count - 1.0);
        out << format_g17(r) << ',' << format_g17(green(r)) << "\n";
    }
}

int run(RunMode mode, const std::string& config_path, const std::string& out_dir, int stride,
        bool quiet) {
    json raw;
    RunConfig rc;
    try {
        raw = read_json_file(config_path);
        rc = parse_run_config(raw);
        if (rc.mode && *rc.mode != mode)
            throw ConfigError(std::string("config declares mode \"") + mode_name(*rc.mode) +
                              "\" but \"" + mode_name(mode) + "\" was requested");
        if (mode == RunMode::Validate && rc.spec.family != Family::TwoCenterElliptic &&
            rc.spec.family != Family::StarkZeemanParabolic)
            throw ConfigError("validate mode needs a separable family "
                              "(two_center_elliptic or stark_zeeman_parabolic)");
        if (mode == RunMode::Sweep && !rc.sweep)
            throw ConfigError("sweep mode needs a \"sweep\" section");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "micz: config error: %s\n", e.what());
        return 2;
    }
    if (stride > 0) rc.stride = stride;
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    try {
        switch (mode) {
            case RunMode::Green: {
                const std::string path = join_path(out_dir, rc.output.green_csv);
                write_green_csv(path, rc.spec.profile, rc.green);
                if (!quiet) log_msg(LogLevel::Info, "green table written to %s", path.c_str());
                return 0;
            }
            case RunMode::Simulate: {
                Trajectory traj = integrate(rc.initial, rc.spec, rc.t_end, rc.controls);
                const ConservationReport rep = monitor(traj, rc.spec, rc.flag_threshold);
                write_trajectory_csv(join_path(out_dir, rc.output.trajectory_csv), traj, rc.spec,
                                     rc.stride);
                write_report_json(join_path(out_dir, rc.output.report_json), rep, traj);
                if (traj.termination == Termination::StepUnderflow ||
                    traj.termination == Termination::MaxSteps) {
                    std::fprintf(stderr, "micz: numerical failure: %s (partial outputs written)\n",
                                 termination_name(traj.termination));
                    return 3;
                }
                if (!quiet && traj.termination == Termination::Collision)
                    log_msg(LogLevel::Warn, "trajectory terminated by collision with dyon #%d",
                            traj.collision_dyon);
                return 0;
            }
            case RunMode::Validate: {
                Trajectory traj = integrate(rc.initial, rc.spec, rc.t_end, rc.controls);
                if (traj.termination != Termination::Completed) {
                    std::fprintf(stderr, "micz: numerical failure: %s before t_end\n",
                                 termination_name(traj.termination));
                    return 3;
                }
                const ValidationReport report = validate_quadrature(traj, rc.spec);
                write_validation_json(join_path(out_dir, rc.output.validation_json), report);
                if (!quiet)
                    log_msg(LogLevel::Info, "max residuals: dt %.3e, dphi %.3e",
                            report.max_dt_residual, report.max_dphi_residual);
                return 0;
            }
            case RunMode::Sweep: {
                const SweepParams& sp = *rc.sweep;
                std::vector<std::future<SweepRowResult>> futures;
                std::vector<RunConfig> configs;
                for (double v : sp.values) {
                    json mutated = raw;
                    try {
                        mutated[json::json_pointer{sp.pointer}] = v;
                        configs.push_back(parse_run_config(mutated));
                    } catch (const std::exception& e) {
                        std::fprintf(stderr, "micz: config error at sweep value %s: %s\n",
                                     format_g17(v).c_str(), e.what());
                        return 2;
                    }
                }
                futures.reserve(configs.size());
                for (const RunConfig& cfg : configs)
                    futures.push_back(std::async(std::launch::async,
                                                 [cfg]() { return run_sweep_point(cfg); }));
                std::ofstream out(join_path(out_dir, rc.output.sweep_csv));
                if (!out) throw ConfigError("cannot open sweep output");
                out << "index,value,samples,termination,E_max_rel_drift,p_phi_max_abs_drift,"
                       "sep_max_rel_drift,error\n";
                bool numerical_failure = false;
                for (std::size_t i = 0; i < futures.size(); ++i) {
                    const SweepRowResult row = futures[i].get();
                    std::string err = row.error;
                    for (char& c : err)
                        if (c == ',' || c == '"' || c == '\n') c = ';';
                    out << i << ',' << format_g17(sp.values[i]) << ',' << row.samples << ','
                        << termination_name(row.termination) << ',' << format_g17(row.e_rel_drift)
                        << ',' << format_g17(row.pphi_abs_drift) << ','
                        << (row.has_sep ? format_g17(row.sep_rel_drift) : "") << ','
                        << err << "\n";
                    if (!row.error.empty() || row.termination == Termination::StepUnderflow)
                        numerical_failure = true;
                }
                return numerical_failure ? 3 : 0;
            }
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "micz: config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "micz: numerical failure: %s\n", e.what());
        return 3;
    }
    return 0;
}

}  // namespace micz
