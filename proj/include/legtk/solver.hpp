#pragma once

#include <functional>
#include <vector>

#include "legtk/errors.hpp"
#include "legtk/expr.hpp"
#include "legtk/raster.hpp"

namespace legtk {

using PeriodEvaluator = std::function<std::vector<cplx>(const std::vector<cplx>&)>;

struct PolydiscSpec {
    double delta = 0.1;
    int l = 1;
    int samples_per_facet = 32;  // boundary samples per facet circle
    int off_facet_samples = 3;   // radial/angular samples for the other coordinates
    unsigned seed = 7;
};

struct CertificateResult {
    bool certified = false;
    double margin = 0.0;          // delta - sup ||P(t) - t|| - guard
    double sup_deviation = 0.0;   // sup over boundary samples of ||P(t) - t||_inf
    double margin_guard = 0.0;    // Lipschitz estimate x sample spacing
    int samples_used = 0;
};

// Certifies degree one on the polydisc boundary by proximity to the identity:
// true iff sup ||P(t) - t||_inf < delta - margin_guard, which keeps the
// straight-line homotopy (1-s) t + s P(t) away from 0 on the boundary.
CertificateResult degree_certificate(const PeriodEvaluator& P, const PolydiscSpec& spec,
                                     Exec exec = Exec::Parallel);

struct SolveReport {
    std::vector<cplx> t0;
    double residual = 0.0;
    bool certified = false;
    double boundary_margin = 0.0;
    int iterations = 0;
    double delta_used = 0.0;
};

struct SolveConfig {
    double delta_start = 0.1;
    double delta_floor = 1e-4;
    double target = 1e-10;
    int max_iterations = 200;
    Exec exec = Exec::Parallel;
};

// Damped fixed-point iteration t <- t - P(t) with a finite-difference Newton
// fallback; iterates stay in the certified polydisc.
SolveReport solve_periods(const PeriodEvaluator& P, int l, const SolveConfig& cfg = {});

}  // namespace legtk
