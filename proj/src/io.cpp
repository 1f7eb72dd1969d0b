#include "wpk/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "wpk/errors.hpp"

namespace wpk::io {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "field container assumes a little-endian host");

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path) {
    buffer_ += "# units: dimensionless model units\n";
}

void CsvWriter::comment(const std::string& key, const std::string& value) {
    buffer_ += "# " + key + ": " + value + "\n";
}

void CsvWriter::columns(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) buffer_ += ",";
        buffer_ += names[i];
    }
    buffer_ += "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buffer_ += ",";
        buffer_ += format_double(values[i]);
    }
    buffer_ += "\n";
}

void CsvWriter::close() {
    if (!open_) return;
    write_text(path_, buffer_);
    open_ = false;
}

void write_trajectory(const std::filesystem::path& stem, const Trajectory& tr) {
    const int n = static_cast<int>(tr.anchor_point.x.size());
    CsvWriter csv(std::filesystem::path(stem).concat(".csv"));
    std::vector<std::string> cols{"s"};
    for (int d = 0; d < n; ++d) cols.push_back("x" + std::to_string(d));
    for (int d = 0; d < n; ++d) cols.push_back("xi" + std::to_string(d));
    csv.columns(cols);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        std::vector<double> row{tr.times[i]};
        row.insert(row.end(), tr.states[i].x.begin(), tr.states[i].x.end());
        row.insert(row.end(), tr.states[i].xi.begin(), tr.states[i].xi.end());
        csv.row(row);
    }
    csv.close();
    json meta;
    meta["anchor"] = tr.anchor == OrbitAnchor::TerminalAtT ? "terminal" : "initial-shifted";
    meta["anchor_time"] = tr.anchor_time;
    meta["anchor_x"] = tr.anchor_point.x;
    meta["anchor_xi"] = tr.anchor_point.xi;
    meta["rtol"] = tr.rtol;
    meta["atol"] = tr.atol;
    meta["closed_form"] = tr.closed_form;
    meta["steps_accepted"] = tr.stats.steps_accepted;
    meta["steps_rejected"] = tr.stats.steps_rejected;
    meta["rhs_evals"] = tr.stats.rhs_evals;
    write_json(std::filesystem::path(stem).concat(".json"), meta);
}

void write_decay_report(const std::filesystem::path& path, const DecayReport& rep,
                        const CoefficientModel& model) {
    json j;
    j["pass"] = rep.pass;
    j["alpha_max"] = rep.alpha_max;
    j["samples"] = rep.sample_descriptor;
    j["sample_count"] = rep.sample_count;
    j["rho"] = model.rho;
    j["model"] = model.label;
    json entries = json::array();
    for (const DecayEntry& e : rep.entries) {
        json je;
        je["alpha"] = multi_to_string(e.alpha);
        je["metric_sup"] = e.metric_sup;
        je["metric_bound"] = e.metric_bound;
        je["potential_sup"] = e.potential_sup;
        je["potential_bound"] = e.potential_bound;
        je["pass"] = e.pass;
        entries.push_back(je);
    }
    j["entries"] = entries;
    write_json(path, j);
}

void write_slice(const std::filesystem::path& stem, const WptSlice& slice,
                 const UniformGrid& signal_grid) {
    const int n = signal_grid.dim;
    CsvWriter csv(std::filesystem::path(stem).concat(".csv"));
    std::vector<std::string> cols;
    for (int d = 0; d < n; ++d) cols.push_back("x" + std::to_string(d));
    for (int d = 0; d < n; ++d) cols.push_back("xi" + std::to_string(d));
    cols.push_back("re");
    cols.push_back("im");
    csv.columns(cols);
    for (std::size_t ix = 0; ix < slice.x_points.size(); ++ix) {
        for (std::size_t ik = 0; ik < slice.xi_points.size(); ++ik) {
            std::vector<double> row;
            row.insert(row.end(), slice.x_points[ix].begin(), slice.x_points[ix].end());
            row.insert(row.end(), slice.xi_points[ik].begin(), slice.xi_points[ik].end());
            const Complex v = slice.at(ix, ik);
            row.push_back(v.real());
            row.push_back(v.imag());
            csv.row(row);
        }
    }
    csv.close();
    json meta;
    meta["dim"] = n;
    meta["signal_grid"] = {{"L", signal_grid.half_width}, {"N", signal_grid.points}};
    meta["x_count"] = slice.x_points.size();
    meta["xi_count"] = slice.xi_points.size();
    meta["window"] = slice.window_descriptor;
    meta["signal"] = slice.signal_descriptor;
    meta["fast_path"] = slice.fast_path;
    write_json(std::filesystem::path(stem).concat(".json"), meta);
}

void write_field(const std::filesystem::path& stem, const WaveField& field) {
    json meta;
    meta["n"] = field.grid.dim;
    meta["L"] = field.grid.half_width;
    meta["N"] = field.grid.points;
    meta["t"] = field.time;
    meta["dtype"] = "complex128";
    meta["layout"] = "row-major, interleaved re/im, little-endian";
    write_json(std::filesystem::path(stem).concat(".json"), meta);

    std::ofstream bin(std::filesystem::path(stem).concat(".bin"), std::ios::binary);
    if (!bin) throw ConfigError("cannot write " + stem.string() + ".bin");
    bin.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(Complex)));

    if (field.grid.dim == 1) {
        CsvWriter csv(std::filesystem::path(stem).concat(".csv"));
        csv.comment("t", format_double(field.time));
        csv.columns({"x", "re", "im"});
        for (std::size_t i = 0; i < field.values.size(); ++i)
            csv.row({field.grid.coord(i), field.values[i].real(), field.values[i].imag()});
        csv.close();
    }
}

WaveField read_field(const std::filesystem::path& stem) {
    std::ifstream meta_in(std::filesystem::path(stem).concat(".json"));
    if (!meta_in) throw ConfigError("cannot read " + stem.string() + ".json");
    json meta = json::parse(meta_in);
    WaveField f;
    f.grid = UniformGrid(meta.at("n").get<int>(), meta.at("L").get<double>(),
                         meta.at("N").get<std::size_t>());
    f.time = meta.at("t").get<double>();
    f.values.resize(f.grid.total_points());
    std::ifstream bin(std::filesystem::path(stem).concat(".bin"), std::ios::binary);
    if (!bin) throw ConfigError("cannot read " + stem.string() + ".bin");
    bin.read(reinterpret_cast<char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(Complex)));
    if (static_cast<std::size_t>(bin.gcount()) != f.values.size() * sizeof(Complex))
        throw ConfigError("field container truncated: " + stem.string() + ".bin");
    return f;
}

void write_norm_log(const std::filesystem::path& path, const PropagationLog& log) {
    CsvWriter csv(path);
    csv.comment("steps", std::to_string(log.steps));
    csv.columns({"t", "l2_norm"});
    for (std::size_t i = 0; i < log.times.size(); ++i) csv.row({log.times[i], log.norms[i]});
    csv.close();
}

void write_detection(const std::filesystem::path& stem, const DetectionResult& r) {
    CsvWriter csv(std::filesystem::path(stem).concat(".csv"));
    csv.comment("mode", r.query.mode == DetectMode::FullFlow ? "full-flow" : "free-shift");
    csv.comment("window", r.window_descriptor);
    csv.comment("signal", r.signal_descriptor);
    csv.columns({"lambda", "sup", "delta1", "delta2"});
    for (const SweepRow& row : r.rows) csv.row({row.lambda, row.sup, row.delta1, row.delta2});
    csv.close();

    json j;
    j["query"] = {{"t", r.query.t},
                  {"x0", r.query.x0},
                  {"xi0", r.query.xi0},
                  {"radius", r.query.radius},
                  {"gamma", r.query.gamma},
                  {"a", r.query.a},
                  {"order", r.query.order},
                  {"margin", r.query.margin},
                  {"mode", r.query.mode == DetectMode::FullFlow ? "full-flow" : "free-shift"},
                  {"lambda_min", r.query.lambda_min},
                  {"lambda_max", r.query.lambda_max},
                  {"lambda_count", r.query.lambda_count},
                  {"lattice",
                   {{"points_per_axis", r.query.counts.points_per_axis},
                    {"directions", r.query.counts.directions},
                    {"radii", r.query.counts.radii}}}};
    j["window"] = r.window_descriptor;
    j["signal"] = r.signal_descriptor;
    j["fit"] = {{"slope", r.fit.slope},
                {"intercept", r.fit.intercept},
                {"residual_rms", r.fit.residual_rms},
                {"zero_decay", r.fit.zero_decay},
                {"points_used", r.fit.used}};
    j["verdict"] = {{"class", to_string(r.verdict.cls)},
                    {"order", r.verdict.order},
                    {"margin", r.verdict.margin},
                    {"slope", r.verdict.slope},
                    {"reason", r.verdict.reason}};
    j["diagnostics"] = {{"delta1_slope", r.delta1_fit.slope},
                        {"delta2_slope", r.delta2_fit.slope},
                        {"inclusion_lambda", r.lambda1}};
    json rows = json::array();
    for (const SweepRow& row : r.rows)
        rows.push_back({{"lambda", row.lambda},
                        {"sup", row.sup},
                        {"delta1", row.delta1},
                        {"delta2", row.delta2},
                        {"arg_x", row.arg_x},
                        {"arg_xi", row.arg_xi}});
    j["sweep"] = rows;
    write_json(std::filesystem::path(stem).concat(".json"), j);
}

void write_residual_sweep(const std::filesystem::path& path,
                          const std::vector<std::vector<double>>& rows, int dim) {
    CsvWriter csv(path);
    std::vector<std::string> cols{"lambda", "t"};
    for (int d = 0; d < dim; ++d) cols.push_back("x" + std::to_string(d));
    for (int d = 0; d < dim; ++d) cols.push_back("xi" + std::to_string(d));
    cols.push_back("residual");
    csv.columns(cols);
    for (const auto& r : rows) csv.row(r);
    csv.close();
}

void write_bound_report(const std::filesystem::path& path, const BoundReport& rep) {
    json j;
    j["lambda"] = rep.lambda;
    if (rep.lambda0) j["lambda0"] = *rep.lambda0;
    j["pass"] = rep.pass;
    j["worst_position_low"] = rep.worst_position_low;
    j["worst_position_high"] = rep.worst_position_high;
    j["worst_momentum_low"] = rep.worst_momentum_low;
    j["worst_momentum_high"] = rep.worst_momentum_high;
    j["samples"] = rep.samples;
    if (rep.violation) {
        j["violation"] = {{"x", rep.violation->sample.x},
                          {"xi", rep.violation->sample.xi},
                          {"s", rep.violation->s},
                          {"ratio", rep.violation->ratio},
                          {"which", rep.violation->which}};
    }
    write_json(path, j);
}

void write_rate_sweep(const std::filesystem::path& path, const RateSweep& sweep) {
    CsvWriter csv(path);
    csv.comment("displacement_slope", format_double(sweep.displacement_fit.slope));
    csv.columns({"lambda", "displacement", "momentum_residual"});
    for (std::size_t i = 0; i < sweep.lambdas.size(); ++i)
        csv.row({sweep.lambdas[i], sweep.displacement[i], sweep.momentum_residual[i]});
    csv.close();
}

}  // namespace wpk::io
