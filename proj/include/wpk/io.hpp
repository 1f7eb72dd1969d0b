#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wpk/coeffs.hpp"
#include "wpk/detector.hpp"
#include "wpk/flow.hpp"
#include "wpk/propagator.hpp"
#include "wpk/transport.hpp"
#include "wpk/wpt.hpp"

namespace wpk::io {

/// Full-precision, locale-independent double formatting ("%.17g").
std::string format_double(double v);

/// CSV with "# key: value" comment headers followed by a column header row.
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);
    void comment(const std::string& key, const std::string& value);
    void columns(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);
    void close();

private:
    std::string buffer_;
    std::filesystem::path path_;
    bool open_ = true;
};

// artifact writers; each writes <stem>.csv (+ <stem>.json metadata)
void write_trajectory(const std::filesystem::path& stem, const Trajectory& tr);
void write_decay_report(const std::filesystem::path& path, const DecayReport& rep,
                        const CoefficientModel& model);
void write_slice(const std::filesystem::path& stem, const WptSlice& slice,
                 const UniformGrid& signal_grid);
void write_field(const std::filesystem::path& stem, const WaveField& field);
WaveField read_field(const std::filesystem::path& stem);
void write_norm_log(const std::filesystem::path& path, const PropagationLog& log);
void write_detection(const std::filesystem::path& stem, const DetectionResult& result);
void write_residual_sweep(const std::filesystem::path& path,
                          const std::vector<std::vector<double>>& rows, int dim);
void write_bound_report(const std::filesystem::path& path, const BoundReport& rep);
void write_rate_sweep(const std::filesystem::path& path, const RateSweep& sweep);

}  // namespace wpk::io
