#include "wpk/detector.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "wpk/errors.hpp"
#include "wpk/wpt.hpp"

namespace wpk {

void DetectionQuery::validate() const {
    if (x0.empty() || xi0.size() != x0.size())
        throw std::invalid_argument("query: x0/xi0 dimension mismatch");
    if (norm2(xi0) == 0.0) throw std::invalid_argument("query: xi0 must be nonzero");
    if (!(radius > 0.0)) throw std::invalid_argument("query: radius must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("query: gamma must be in (0,1)");
    if (!(a >= 1.0)) throw std::invalid_argument("query: a must be >= 1");
    if (!(lambda_min >= 1.0) || !(lambda_max >= lambda_min) || lambda_count < 1)
        throw std::invalid_argument("query: lambda grid must be increasing with min >= 1");
    if (!(margin > 0.0)) throw std::invalid_argument("query: margin must be positive");
    window.validate();
}

std::vector<double> DetectionQuery::lambda_grid() const {
    return geometric_grid(lambda_min, lambda_max, lambda_count);
}

std::string to_string(WfClass c) {
    switch (c) {
        case WfClass::NotInWF: return "not-in-wf-up-to-order";
        case WfClass::InWF: return "in-wf-at-order";
        case WfClass::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

std::vector<PhasePoint> query_lattice(const DetectionQuery& q) {
    Ball K{q.x0, q.radius};
    Cone G{q.xi0, q.gamma};
    auto lattice = phase_lattice(K, G, q.a, q.counts);
    if (q.jitter_seed) {
        std::mt19937_64 rng(*q.jitter_seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double dx = q.jitter_frac * q.radius / std::max(1, q.counts.points_per_axis - 1);
        for (PhasePoint& p : lattice) {
            for (double& c : p.x) c += dx * u(rng);
            // keep within the ball
            const double d = dist2(p.x, q.x0);
            if (d > q.radius)
                for (std::size_t i = 0; i < p.x.size(); ++i)
                    p.x[i] = q.x0[i] + (p.x[i] - q.x0[i]) * q.radius / d;
        }
    }
    return lattice;
}

struct CellEval {
    double magnitude = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
};

CellEval eval_cell(const DetectorSignal& u0, const CoefficientModel& model,
                   const DetectionQuery& q, const EvolvedWindow& w, double lambda,
                   const PhasePoint& cell) {
    const Vec lxi = scaled(cell.xi, lambda);
    Vec px = axpy(cell.x, -q.t * lambda, cell.xi);  // x - t lambda xi
    Vec pxi = lxi;
    CellEval out;
    if (q.t != 0.0 && !model.is_exactly_flat()) {
        const Trajectory tr = solve_bicharacteristics(model, q.t, cell.x, lxi, {q.t, 0.0});
        const PhasePoint& z0 = tr.at_time(0.0, 1e-9);
        out.delta1 = dist2(z0.x, px);
        out.delta2 = dist2(z0.xi, lxi);
        if (q.mode == DetectMode::FullFlow) {
            px = z0.x;
            pxi = z0.xi;
        }
    }
    if (std::holds_alternative<AnalyticSignal>(u0)) {
        if (px.size() != 1)
            throw std::invalid_argument("detector: analytic signals are 1-D");
        out.magnitude =
            std::abs(wpt_point_analytic(std::get<AnalyticSignal>(u0), w, px[0], pxi[0]));
    } else {
        out.magnitude = std::abs(wpt_point(std::get<WaveField>(u0), w, px, pxi));
    }
    return out;
}

void check_budget(const DetectorSignal& u0, const DetectionQuery& q) {
    if (!std::holds_alternative<WaveField>(u0)) return;
    const WaveField& f = std::get<WaveField>(u0);
    const double need = 2.0 * q.a * q.lambda_max;
    const double have = 2.0 * f.grid.nyquist();  // pi N / L
    if (need > have)
        throw NumericError("detector: Nyquist budget exceeded: 2 a lambda_max = " +
                           std::to_string(need) + " > pi N / L = " + std::to_string(have));
}

}  // namespace

SweepRow criterion_sup(const DetectorSignal& u0, const CoefficientModel& model,
                       const DetectionQuery& q, double lambda, int jobs) {
    q.validate();
    model.validate();
    check_budget(u0, q);
    const auto lattice = query_lattice(q);
    const EvolvedWindow w = free_evolve_window(scaled_window(q.window, lambda), -q.t);
    std::vector<CellEval> evals(lattice.size());
    parallel_for(lattice.size(), jobs,
                 [&](std::size_t i) { evals[i] = eval_cell(u0, model, q, w, lambda, lattice[i]); });
    SweepRow row;
    row.lambda = lambda;
    std::size_t best = 0;
    for (std::size_t i = 0; i < evals.size(); ++i) {
        if (evals[i].magnitude > row.sup) {
            row.sup = evals[i].magnitude;
            best = i;
        }
        row.delta1 = std::max(row.delta1, evals[i].delta1);
        row.delta2 = std::max(row.delta2, evals[i].delta2);
    }
    row.arg_x = lattice[best].x;
    row.arg_xi = lattice[best].xi;
    return row;
}

DecayFit fit_decay(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 4) throw std::invalid_argument("fit_decay: need at least 4 pairs");
    DecayFit fit;
    for (const auto& [lam, sup] : pairs) {
        if (!(sup > 0.0)) {
            fit.zero_decay = true;
            continue;
        }
        fit.log_lambda.push_back(std::log(lam));
        fit.log_sup.push_back(std::log(sup));
    }
    fit.used = fit.log_lambda.size();
    if (fit.used < 4) {
        // effectively exact zero beyond machine range
        fit.zero_decay = true;
        return fit;
    }
    const LinearFit lf = fit_line(fit.log_lambda, fit.log_sup);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.residual_rms = lf.residual_rms;
    return fit;
}

Verdict classify(const DecayFit& fit, int order, double margin) {
    if (!(margin > 0.0)) throw std::invalid_argument("classify: margin must be positive");
    Verdict v;
    v.order = order;
    v.margin = margin;
    v.zero_decay = fit.zero_decay;
    v.slope = fit.slope;
    v.residual = fit.residual_rms;
    if (fit.zero_decay && fit.used < 4) {
        v.cls = WfClass::NotInWF;
        v.reason = "supremum vanishes to machine zero";
        return v;
    }
    const double threshold_not = -static_cast<double>(order) - margin;
    const double threshold_in = -static_cast<double>(order) + margin;
    // acceptably linear, or decaying faster than any fitted line everywhere
    const double range = std::abs(fit.log_sup.front() - fit.log_sup.back());
    const bool fit_ok = fit.residual_rms <= std::max(0.5, 0.08 * range);
    bool super_decay = fit.log_sup.size() >= 2;
    for (std::size_t i = 0; i + 1 < fit.log_sup.size(); ++i) {
        const double local = (fit.log_sup[i + 1] - fit.log_sup[i]) /
                             (fit.log_lambda[i + 1] - fit.log_lambda[i]);
        super_decay = super_decay && local <= threshold_not;
    }
    if (fit.slope <= threshold_not && (fit_ok || super_decay)) {
        v.cls = WfClass::NotInWF;
        v.reason = super_decay && !fit_ok ? "super-polynomial decay" : "rapid decay";
    } else if (fit.slope >= threshold_in && fit_ok) {
        v.cls = WfClass::InWF;
        v.reason = "slow decay";
    } else {
        v.cls = WfClass::Inconclusive;
        v.reason = fit_ok ? "slope within the margin band" : "fit residual too large";
    }
    return v;
}

DetectionResult run_detection(const DetectorSignal& u0, const CoefficientModel& model,
                              const DetectionQuery& q, int jobs) {
    q.validate();
    DetectionResult res;
    res.query = q;
    const auto lambdas = q.lambda_grid();
    for (double lam : lambdas) res.rows.push_back(criterion_sup(u0, model, q, lam, jobs));

    std::vector<std::pair<double, double>> pairs;
    for (const SweepRow& r : res.rows) pairs.emplace_back(r.lambda, r.sup);
    res.fit = fit_decay(pairs);
    res.verdict = classify(res.fit, q.order, q.margin);

    // flow-vs-shift diagnostics
    std::vector<double> ll, l1, l2;
    for (const SweepRow& r : res.rows) {
        if (r.delta1 > 0.0 && r.delta2 > 0.0) {
            ll.push_back(std::log(r.lambda));
            l1.push_back(std::log(r.delta1));
            l2.push_back(std::log(r.delta2));
        }
    }
    if (ll.size() >= 2) {
        res.delta1_fit = fit_line(ll, l1);
        res.delta2_fit = fit_line(ll, l2);
    }
    res.lambda1 = inclusion_lambda(res);
    res.window_descriptor =
        (q.window.kind == WindowKind::Gaussian
             ? std::string("gaussian")
             : (q.window.kind == WindowKind::PolyGaussian ? "poly-gaussian" : "sampled"));
    if (std::holds_alternative<AnalyticSignal>(u0))
        res.signal_descriptor = std::get<AnalyticSignal>(u0).describe();
    else
        res.signal_descriptor = "sampled field";
    return res;
}

Cone ShrunkenNeighborhoods::Gamma1() const { return Cone{axis, 1.0 - cosine_threshold}; }

ShrunkenNeighborhoods shrink_neighborhoods(double r, double gamma, const Vec& x0, const Vec& xi0) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("shrink_neighborhoods: gamma must be in (0,1)");
    if (!(r > 0.0)) throw std::invalid_argument("shrink_neighborhoods: r must be positive");
    ShrunkenNeighborhoods s;
    s.K1 = Ball{x0, r / 2.0};
    s.axis = xi0;
    s.cosine_threshold = std::sqrt((2.0 - gamma) / 2.0);
    return s;
}

double inclusion_lambda(const DetectionResult& result) {
    const DetectionQuery& q = result.query;
    const double bound1 = q.radius / 2.0;
    const double bound2 = norm2(q.xi0) * std::sqrt(q.gamma / 2.0);
    double lam = 0.0;
    for (std::size_t i = result.rows.size(); i-- > 0;) {
        const SweepRow& r = result.rows[i];
        if (r.delta1 <= bound1 && r.delta2 <= bound2)
            lam = r.lambda;
        else
            break;
    }
    return lam;
}

}  // namespace wpk
