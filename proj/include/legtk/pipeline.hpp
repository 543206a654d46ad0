#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "legtk/contact.hpp"
#include "legtk/homology.hpp"
#include "legtk/ode.hpp"
#include "legtk/rational.hpp"
#include "legtk/solver.hpp"

namespace legtk {

// Contact form with rational-in-z coefficients on fiber monomials of degree
// <= 2: the holomorphically approximated analogue of the reduced form.
struct TaylorForm {
    int n = 1;
    std::vector<std::vector<int>> monomials;           // exponents over the 2n fiber vars
    std::vector<std::vector<RationalFunction>> c;      // c[diff][mono], diff 0 = dz
    std::vector<double> fit_residuals;                 // per differential, sup over monomials

    cplx coeff(int diff, cplx z, std::span<const cplx> zeta) const;
};

struct PipelineConfig {
    AdmissibleSet set;
    ContactForm form;
    std::vector<cplx> interp_points;

    double contact_threshold = 1e-6;
    double ode_tol = 1e-11;
    double fit_target = 1e-6;
    double period_target = 1e-10;
    double delta_start = 0.1;
    double delta_floor = 1e-4;
    int quad_samples = 2048;
    int traversal_samples = 256;
    unsigned seed = 1;
    HomologyConfig homology;
    Exec exec = Exec::Parallel;
};

struct OutputMember {
    LegendrianSample trace;  // reduced-coordinate solution along the member
    bool is_cycle = true;
};

struct PipelineReport {
    int rank_l = 0;
    double spray_defect = 0.0;
    double normal_form_axis_defect = 0.0;
    std::map<std::string, double> normal_form_residuals;
    std::vector<double> fit_residuals;
    std::optional<SolveReport> solve;
    std::vector<cplx> t0;
    std::vector<OutputMember> members;

    double isotropy_residual = 0.0;       // Hermite-defect residual against gamma
    double quadrature_agreement = 0.0;    // ODE vs direct quadrature of V
    double closeness_c0 = 0.0;            // sup fiber modulus of the output
    double closeness_c1 = 0.0;            // sup tangential fiber derivative
    double interpolation_defect = 0.0;    // max |w| over arc terminal values
    double min_output_separation = 0.0;   // sampled self-intersection proxy

    std::map<std::string, double> tolerances;  // every metric's test threshold
};

PipelineReport mergelyan_pipeline(const PipelineConfig& cfg);

// Legendrian loop S^1 -> C^3 given by samples of (w, y) at equispaced angles.
struct LoopSamples {
    std::vector<cplx> w;
    std::vector<cplx> y;
    double isotropy_tol = 1e-6;
};

struct AnnulusReport {
    cplx t0 = 0.0;
    double rho_used = 0.0;
    RationalFunction w_out, y_out;
    double isotropy_residual = 0.0;  // standard form, on annulus samples
    double closeness_c0 = 0.0;       // against the input loop on S^1
    double closeness_c1 = 0.0;
    double fit_residual = 0.0;
};

AnnulusReport annulus_demo(const LoopSamples& loop, double rho, const FitConfig& fit = {});

}  // namespace legtk
