#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wpk/coeffs.hpp"
#include "wpk/flow.hpp"
#include "wpk/numerics.hpp"
#include "wpk/propagator.hpp"
#include "wpk/signals.hpp"
#include "wpk/windows.hpp"

namespace wpk {

enum class DetectMode { FullFlow, FreeShift };

/// Candidate phase-space point with neighborhoods and sweep parameters.
struct DetectionQuery {
    double t = 0.0;
    Vec x0;
    Vec xi0;             // nonzero
    double radius = 0.25;   // K = ball around x0
    double gamma = 0.3;     // cone parameter in (0,1)
    double a = 2.0;         // annulus 1/a <= |xi| <= a
    double lambda_min = 8.0;
    double lambda_max = 1024.0;
    int lambda_count = 16;
    int order = 4;          // target decay order N
    double margin = 0.5;
    DetectMode mode = DetectMode::FullFlow;
    LatticeCounts counts;
    WindowSpec window = WindowSpec::gaussian(1);
    std::optional<unsigned long long> jitter_seed;  // optional lattice jitter
    double jitter_frac = 0.25;

    void validate() const;
    std::vector<double> lambda_grid() const;
};

/// Signal under test: closed-form 1-D data or a sampled field.
using DetectorSignal = std::variant<AnalyticSignal, WaveField>;

struct SweepRow {
    double lambda = 0.0;
    double sup = 0.0;
    double delta1 = 0.0;  // max |x(0) - (x - t lambda xi)| over the lattice
    double delta2 = 0.0;  // max |xi(0) - lambda xi|
    Vec arg_x, arg_xi;    // lattice point attaining the supremum
};

struct DecayFit {
    std::vector<double> log_lambda;
    std::vector<double> log_sup;
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    bool zero_decay = false;  // some sup underflowed to zero
    std::size_t used = 0;
};

enum class WfClass { NotInWF, InWF, Inconclusive };
std::string to_string(WfClass c);

struct Verdict {
    WfClass cls = WfClass::Inconclusive;
    double slope = 0.0;
    double margin = 0.5;
    int order = 4;
    double residual = 0.0;
    bool zero_decay = false;
    std::string reason;
};

struct DetectionResult {
    DetectionQuery query;
    std::vector<SweepRow> rows;
    DecayFit fit;
    Verdict verdict;
    LinearFit delta1_fit, delta2_fit;  // slopes of the flow-vs-shift gaps
    double lambda1 = 0.0;  // smallest grid lambda meeting the inclusion bounds
    std::string window_descriptor;
    std::string signal_descriptor;
};

/// Lattice supremum of |W_{phi_lambda(-t)} u0| at back-propagated points
/// (full-flow) or at (x - t lambda xi, lambda xi) (free-shift).
SweepRow criterion_sup(const DetectorSignal& u0, const CoefficientModel& model,
                       const DetectionQuery& q, double lambda, int jobs = 1);

/// Least squares on (log lambda, log sup). Nonpositive sups are dropped;
/// if fewer than 4 positive pairs remain the fit reports zero decay.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& pairs);

/// Order-qualified classification:
///   NotInWF     slope <= -N - margin (good fit, or consistently
///               super-polynomial local slopes), or exact zero decay
///   InWF        slope >= -N + margin
///   Inconclusive otherwise.
Verdict classify(const DecayFit& fit, int order, double margin = 0.5);

/// Full sweep: sup per lambda, decay fit, classification, flow diagnostics.
DetectionResult run_detection(const DetectorSignal& u0, const CoefficientModel& model,
                              const DetectionQuery& q, int jobs = 1);

/// Shrunken neighborhoods that transfer the criterion between the flowed
/// and the free-shifted sampling: K1 = half-radius ball, Gamma1 with cosine
/// threshold sqrt((2 - gamma)/2).
struct ShrunkenNeighborhoods {
    Ball K1;
    Vec axis;  // xi0
    double cosine_threshold = 0.0;
    Cone Gamma1() const;  // cone with cos > cosine_threshold
};
ShrunkenNeighborhoods shrink_neighborhoods(double r, double gamma, const Vec& x0, const Vec& xi0);

/// Smallest grid lambda with delta1 <= r/2 and delta2 <= |xi0| sqrt(gamma/2)
/// for every larger grid value (0 if never met).
double inclusion_lambda(const DetectionResult& result);

}  // namespace wpk
