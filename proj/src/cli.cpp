#include "wpk/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wpk/coeffs.hpp"
#include "wpk/detector.hpp"
#include "wpk/errors.hpp"
#include "wpk/flow.hpp"
#include "wpk/io.hpp"
#include "wpk/propagator.hpp"
#include "wpk/signals.hpp"
#include "wpk/transport.hpp"
#include "wpk/windows.hpp"
#include "wpk/wpt.hpp"

namespace wpk::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"model",
     {"family", "n", "rho", "epsilon", "vepsilon", "offdiag", "time_modulation", "omega"}},
    {"window", {"kind", "lambda", "time", "coeffs"}},
    {"grid", {"L", "N"}},
    {"signal", {"kind", "center", "width", "momentum", "gridded"}},
    {"solver", {"dt_factor", "norm_tolerance"}},
    {"flow",
     {"task", "t0", "x", "xi", "lambda", "samples", "ball_radius", "gamma", "a", "lambda_min",
      "lambda_max", "lambda_count", "y", "eta", "t"}},
    {"wpt", {"x_min", "x_max", "x_count", "xi_min", "xi_max", "xi_count"}},
    {"transport", {"t", "lambdas", "x", "xi"}},
    {"query",
     {"t", "x0", "xi0", "radius", "gamma", "a", "lambda_min", "lambda_max", "lambda_count",
      "order", "margin", "mode", "points_per_axis", "directions", "radii", "times"}},
    {"validate", {"alpha_max", "r_max", "per_decade"}},
};

void check_keys(const json& cfg) {
    for (const auto& [section, body] : cfg.items()) {
        if (section == "output" || section == "seed") continue;
        auto it = kSchema.find(section);
        if (it == kSchema.end()) throw ConfigError("unknown config section: " + section);
        if (!body.is_object()) throw ConfigError("config section must be an object: " + section);
        for (const auto& [key, _] : body.items())
            if (!it->second.count(key))
                throw ConfigError("unknown config key: " + section + "." + key);
    }
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config root must be an object");
    check_keys(cfg);
    return cfg;
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for config key: " + key);
    }
}

Vec get_vec(const json& j, const std::string& key, const Vec& fallback) {
    if (!j.contains(key)) return fallback;
    if (j.at(key).is_number()) return Vec{j.at(key).get<double>()};
    try {
        return j.at(key).get<Vec>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for config key: " + key);
    }
}

CoefficientModel model_from_config(const json& cfg) {
    if (!cfg.contains("model")) throw ConfigError("missing config section: model");
    const json& m = cfg.at("model");
    const std::string family = get_or<std::string>(m, "family", "flat");
    const int n = get_or<int>(m, "n", 1);
    const double rho = get_or<double>(m, "rho", 1.5);
    const double eps = get_or<double>(m, "epsilon", 0.1);
    const double veps = get_or<double>(m, "vepsilon", 0.1);
    const double off = get_or<double>(m, "offdiag", 0.0);
    CoefficientModel model;
    try {
        if (family == "flat")
            model = CoefficientModel::flat(n);
        else if (family == "metric-gaussian")
            model = CoefficientModel::metric_gaussian(n, rho, eps, off);
        else if (family == "metric-algebraic")
            model = CoefficientModel::metric_algebraic(n, rho, eps, off);
        else if (family == "potential-gaussian")
            model = CoefficientModel::potential_gaussian(n, rho, veps);
        else if (family == "potential-algebraic")
            model = CoefficientModel::potential_algebraic(n, rho, veps);
        else if (family == "potential-cross")
            model = CoefficientModel::potential_cross(rho, veps);
        else if (family == "potential-quadratic")
            model = CoefficientModel::potential_quadratic(n, veps);
        else if (family == "bump")
            model = CoefficientModel::bump(n, rho, eps, veps);
        else
            throw ConfigError("unknown model.family: " + family);
        const std::string tm = get_or<std::string>(m, "time_modulation", "none");
        if (tm == "cosine") {
            model.tmod = TimeModulation::Cosine;
            model.tmod_omega = get_or<double>(m, "omega", 1.0);
        } else if (tm != "none") {
            throw ConfigError("unknown model.time_modulation: " + tm);
        }
        model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    return model;
}

WindowSpec window_from_config(const json& cfg, int n) {
    WindowSpec w = WindowSpec::gaussian(n);
    if (!cfg.contains("window")) return w;
    const json& jw = cfg.at("window");
    const std::string kind = get_or<std::string>(jw, "kind", "gaussian");
    try {
        if (kind == "gaussian")
            w = WindowSpec::gaussian(n);
        else if (kind == "hermite")
            w = WindowSpec::poly_gaussian(n, {0.0, 1.0});
        else if (kind == "poly")
            w = WindowSpec::poly_gaussian(n,
                                          get_or<std::vector<double>>(jw, "coeffs", {0.0, 1.0}));
        else
            throw ConfigError("unknown window.kind: " + kind);
        const double lambda = get_or<double>(jw, "lambda", 1.0);
        w = scaled_window(w, lambda);
        w.time = get_or<double>(jw, "time", 0.0);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("window: ") + e.what());
    }
    return w;
}

UniformGrid grid_from_config(const json& cfg, int n) {
    if (!cfg.contains("grid")) throw ConfigError("missing config section: grid");
    const json& g = cfg.at("grid");
    try {
        return UniformGrid(n, get_or<double>(g, "L", 40.0),
                           get_or<std::size_t>(g, "N", 2048));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
}

AnalyticSignal signal_from_config(const json& cfg) {
    AnalyticSignal s = AnalyticSignal::gaussian();
    if (!cfg.contains("signal")) return s;
    const json& js = cfg.at("signal");
    const std::string kind = get_or<std::string>(js, "kind", "gaussian");
    if (kind == "gaussian")
        s = AnalyticSignal::gaussian(get_or<double>(js, "center", 0.0),
                                     get_or<double>(js, "width", 1.0));
    else if (kind == "heaviside")
        s = AnalyticSignal::heaviside(get_or<double>(js, "center", 0.0));
    else if (kind == "modulated")
        s = AnalyticSignal::modulated_gaussian(get_or<double>(js, "center", 0.0),
                                               get_or<double>(js, "width", 1.0),
                                               get_or<double>(js, "momentum", 0.0));
    else
        throw ConfigError("unknown signal.kind: " + kind);
    return s;
}

SolverConfig solver_from_config(const json& cfg) {
    SolverConfig sc;
    if (cfg.contains("solver")) {
        const json& s = cfg.at("solver");
        sc.dt_factor = get_or<double>(s, "dt_factor", 0.5);
        sc.norm_tolerance = get_or<double>(s, "norm_tolerance", 1e-5);
    }
    try {
        sc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("solver: ") + e.what());
    }
    return sc;
}

fs::path output_dir(const json& cfg, const std::string& flag_out) {
    fs::path dir = flag_out.empty() ? fs::path(get_or<std::string>(cfg, "output", "."))
                                    : fs::path(flag_out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) throw ConfigError("output directory not writable: " + dir.string());
    return dir;
}

int cmd_validate(const json& cfg, const fs::path& out) {
    const CoefficientModel model = model_from_config(cfg);
    int alpha_max = 2;
    double r_max = 1e3;
    int per_decade = 12;
    if (cfg.contains("validate")) {
        const json& v = cfg.at("validate");
        alpha_max = get_or<int>(v, "alpha_max", 2);
        r_max = get_or<double>(v, "r_max", 1e3);
        per_decade = get_or<int>(v, "per_decade", 12);
    }
    DecayReport rep;
    try {
        rep = validate_decay(model, alpha_max, radial_log_samples(model.dim, r_max, per_decade));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("validate: ") + e.what());
    }
    io::write_decay_report(out / "decay_report.json", rep, model);
    std::cout << (rep.pass ? "decay validation: pass" : "decay validation: FAIL") << "\n";
    return rep.pass ? 0 : 1;
}

int cmd_flow(const json& cfg, const fs::path& out) {
    const CoefficientModel model = model_from_config(cfg);
    if (!cfg.contains("flow")) throw ConfigError("missing config section: flow");
    const json& f = cfg.at("flow");
    const std::string task = get_or<std::string>(f, "task", "orbit");
    const Vec zero(static_cast<std::size_t>(model.dim), 0.0);
    Vec unit(static_cast<std::size_t>(model.dim), 0.0);
    unit[0] = 1.0;

    if (task == "orbit") {
        const double t0 = get_or<double>(f, "t0", 1.0);
        const Vec x = get_vec(f, "x", zero), xi = get_vec(f, "xi", unit);
        const int samples = get_or<int>(f, "samples", 101);
        std::vector<double> s_eval;
        for (int i = 0; i < samples; ++i)
            s_eval.push_back(t0 - t0 * static_cast<double>(i) / std::max(1, samples - 1));
        const Trajectory tr = solve_bicharacteristics(model, t0, x, xi, s_eval);
        io::write_trajectory(out / "trajectory", tr);
        return 0;
    }
    if (task == "bounds") {
        const double t0 = get_or<double>(f, "t0", 1.0);
        const Ball K{get_vec(f, "x", zero), get_or<double>(f, "ball_radius", 0.4)};
        const Cone G{get_vec(f, "xi", unit), get_or<double>(f, "gamma", 0.3)};
        const auto grid = geometric_grid(get_or<double>(f, "lambda_min", 2.0),
                                         get_or<double>(f, "lambda_max", 1024.0),
                                         get_or<int>(f, "lambda_count", 10));
        const BoundReport rep =
            orbit_bound_sweep(model, t0, K, G, get_or<double>(f, "a", 2.0), grid);
        io::write_bound_report(out / "bound_report.json", rep);
        return 0;
    }
    if (task == "rate") {
        const double t = get_or<double>(f, "t", 1.0);
        const auto grid = geometric_grid(get_or<double>(f, "lambda_min", 8.0),
                                         get_or<double>(f, "lambda_max", 1024.0),
                                         get_or<int>(f, "lambda_count", 8));
        const RateSweep sweep =
            forward_shift_rate(model, t, get_vec(f, "y", zero), get_vec(f, "eta", unit), grid);
        io::write_rate_sweep(out / "rate_sweep.csv", sweep);
        return 0;
    }
    if (task == "roundtrip") {
        const double t = get_or<double>(f, "t", 1.0);
        const RoundtripResidual rr =
            roundtrip_residual(model, t, get_vec(f, "y", zero), get_vec(f, "eta", unit));
        std::cout << "roundtrip residuals: dx=" << io::format_double(rr.dx)
                  << " dxi=" << io::format_double(rr.dxi) << "\n";
        return 0;
    }
    throw ConfigError("unknown flow.task: " + task);
}

int cmd_wpt(const json& cfg, const fs::path& out) {
    const json& jw = cfg.contains("wpt") ? cfg.at("wpt") : json::object();
    const AnalyticSignal sig = signal_from_config(cfg);
    const UniformGrid grid = grid_from_config(cfg, 1);
    const WindowSpec wspec = window_from_config(cfg, 1);
    const WaveField f = WaveField::from_signal(grid, sig, true);
    const EvolvedWindow w = free_evolve_window(wspec, wspec.time);

    const double x_min = get_or<double>(jw, "x_min", -2.0);
    const double x_max = get_or<double>(jw, "x_max", 2.0);
    const int x_count = get_or<int>(jw, "x_count", 41);
    const double xi_min = get_or<double>(jw, "xi_min", -8.0);
    const double xi_max = get_or<double>(jw, "xi_max", 8.0);
    const int xi_count = get_or<int>(jw, "xi_count", 65);
    std::vector<Vec> xs, xis;
    for (int i = 0; i < x_count; ++i)
        xs.push_back({x_min + (x_max - x_min) * static_cast<double>(i) /
                              std::max(1, x_count - 1)});
    for (int i = 0; i < xi_count; ++i)
        xis.push_back({xi_min + (xi_max - xi_min) * static_cast<double>(i) /
                               std::max(1, xi_count - 1)});
    WptSlice slice = wpt_grid(f, w, xs, xis);
    slice.window_descriptor = "lambda=" + io::format_double(wspec.lambda);
    slice.signal_descriptor = sig.describe();
    io::write_slice(out / "wpt_slice", slice, grid);
    return 0;
}

int cmd_propagate(const json& cfg, const fs::path& out) {
    const CoefficientModel model = model_from_config(cfg);
    const UniformGrid grid = grid_from_config(cfg, model.dim);
    const AnalyticSignal sig = signal_from_config(cfg);
    const SolverConfig sc = solver_from_config(cfg);
    const json& f = cfg.contains("flow") ? cfg.at("flow") : json::object();
    const double t0 = get_or<double>(f, "t0", 0.0);
    const double t1 = get_or<double>(f, "t", 1.0);
    if (model.dim != 1) throw ConfigError("propagate: configuration front end is 1-D");
    const WaveField u0 = WaveField::from_signal(grid, sig, true);
    PropagationLog log;
    const WaveField ut = propagate(model, u0, t0, t1, sc, &log);
    io::write_field(out / "field_final", ut);
    io::write_norm_log(out / "norm_log.csv", log);
    return 0;
}

int cmd_transport(const json& cfg, const fs::path& out) {
    const CoefficientModel model = model_from_config(cfg);
    const UniformGrid grid = grid_from_config(cfg, model.dim);
    const AnalyticSignal sig = signal_from_config(cfg);
    const SolverConfig sc = solver_from_config(cfg);
    const WindowSpec wspec = window_from_config(cfg, model.dim);
    if (!cfg.contains("transport")) throw ConfigError("missing config section: transport");
    const json& tj = cfg.at("transport");
    const double t = get_or<double>(tj, "t", 0.5);
    const std::vector<double> lambdas = get_or<std::vector<double>>(tj, "lambdas", {16, 64, 256});
    const Vec zero(static_cast<std::size_t>(model.dim), 0.0);
    Vec unit(static_cast<std::size_t>(model.dim), 0.0);
    unit[0] = 1.0;
    const Vec x = get_vec(tj, "x", zero), xi = get_vec(tj, "xi", unit);
    const WaveField u0 = WaveField::from_signal(grid, sig, true);
    const WaveField ut = (t == 0.0) ? u0 : propagate(model, u0, 0.0, t, sc);
    std::vector<std::vector<double>> rows;
    for (double lam : lambdas) {
        const auto res = transport_residual_given(model, u0, ut, wspec, lam, t, x, xi);
        std::vector<double> row{lam, t};
        row.insert(row.end(), x.begin(), x.end());
        row.insert(row.end(), xi.begin(), xi.end());
        row.push_back(res.residual);
        rows.push_back(row);
    }
    io::write_residual_sweep(out / "transport_residuals.csv", rows, model.dim);
    return 0;
}

int cmd_detect(const json& cfg, const fs::path& out, const std::string& mode_flag, int jobs) {
    const CoefficientModel model = model_from_config(cfg);
    if (!cfg.contains("query")) throw ConfigError("missing config section: query");
    const json& qj = cfg.at("query");
    DetectionQuery q;
    q.t = get_or<double>(qj, "t", 0.0);
    const Vec zero(static_cast<std::size_t>(model.dim), 0.0);
    Vec unit(static_cast<std::size_t>(model.dim), 0.0);
    unit[0] = 1.0;
    q.x0 = get_vec(qj, "x0", zero);
    q.xi0 = get_vec(qj, "xi0", unit);
    q.radius = get_or<double>(qj, "radius", 0.25);
    q.gamma = get_or<double>(qj, "gamma", 0.3);
    q.a = get_or<double>(qj, "a", 2.0);
    q.lambda_min = get_or<double>(qj, "lambda_min", 8.0);
    q.lambda_max = get_or<double>(qj, "lambda_max", 1024.0);
    q.lambda_count = get_or<int>(qj, "lambda_count", 16);
    q.order = get_or<int>(qj, "order", 4);
    q.margin = get_or<double>(qj, "margin", 0.5);
    q.counts.points_per_axis = get_or<int>(qj, "points_per_axis", 5);
    q.counts.directions = get_or<int>(qj, "directions", 5);
    q.counts.radii = get_or<int>(qj, "radii", 3);
    std::string mode = mode_flag.empty() ? get_or<std::string>(qj, "mode", "full-flow")
                                         : mode_flag;
    if (mode == "full-flow")
        q.mode = DetectMode::FullFlow;
    else if (mode == "free-shift")
        q.mode = DetectMode::FreeShift;
    else
        throw ConfigError("unknown detection mode: " + mode);
    q.window = window_from_config(cfg, model.dim);
    if (cfg.contains("seed")) q.jitter_seed = cfg.at("seed").get<unsigned long long>();
    try {
        q.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("query: ") + e.what());
    }

    DetectorSignal u0 = signal_from_config(cfg);
    const json& js = cfg.contains("signal") ? cfg.at("signal") : json::object();
    if (get_or<bool>(js, "gridded", false)) {
        const UniformGrid grid = grid_from_config(cfg, model.dim);
        u0 = WaveField::from_signal(grid, std::get<AnalyticSignal>(u0), true);
    }
    const DetectionResult res = run_detection(u0, model, q, jobs);
    io::write_detection(out / "detect", res);
    std::cout << "verdict: " << to_string(res.verdict.cls)
              << " (slope=" << io::format_double(res.verdict.slope) << ")\n";
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"wave packet toolkit: transforms, classical flows, propagation, detection"};
    app.require_subcommand(1);
    std::string config_path, out_flag, mode_flag;
    int jobs = 1;
    app.add_option("--config", config_path, "configuration file (JSON)")->required();
    app.add_option("--out", out_flag, "output directory (overrides config)");
    app.add_option("--jobs", jobs, "worker threads for sweeps");
    app.add_option("--mode", mode_flag, "detection mode: full-flow or free-shift");
    auto* sub_validate = app.add_subcommand("validate", "check coefficient decay bounds");
    auto* sub_flow = app.add_subcommand("flow", "classical orbit computations");
    auto* sub_wpt = app.add_subcommand("wpt", "wave packet transform slice");
    auto* sub_prop = app.add_subcommand("propagate", "variable-coefficient evolution");
    auto* sub_trans = app.add_subcommand("transport", "transport identity residuals");
    auto* sub_detect = app.add_subcommand("detect", "decay-criterion classification");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const json cfg = load_config(config_path);
        const fs::path out = output_dir(cfg, out_flag);
        if (sub_validate->parsed()) return cmd_validate(cfg, out);
        if (sub_flow->parsed()) return cmd_flow(cfg, out);
        if (sub_wpt->parsed()) return cmd_wpt(cfg, out);
        if (sub_prop->parsed()) return cmd_propagate(cfg, out);
        if (sub_trans->parsed()) return cmd_transport(cfg, out);
        if (sub_detect->parsed()) return cmd_detect(cfg, out, mode_flag, jobs);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace wpk::cli
