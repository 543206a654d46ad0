#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "legtk/errors.hpp"
#include "legtk/expr.hpp"
#include "legtk/geometry.hpp"
#include "legtk/rational.hpp"

namespace legtk {

// One-form on the tube S x rho*B^{2n} in coordinates (z, w, y, zeta3..zeta2n).
// Differential index 0 = dz, then fiber differentials dw, dy, dzeta3, ...
struct ContactForm {
    int n = 1;
    double rho = 1.0;
    int smoothness_class = 9;
    std::vector<ExprPtr> coeffs;  // size 2n + 1

    int dim() const { return 2 * n + 1; }
    cplx coeff(int k, std::span<const cplx> vars) const;
    cplx coeff_partial(int k, int var, std::span<const cplx> vars) const;

  private:
    mutable std::vector<std::vector<ExprPtr>> partials_;  // lazy diff cache
};

ContactForm standard_contact(int n);

struct ContactGrid {
    std::vector<cplx> base_points;
    double fiber_radius = 0.5;
    int fiber_count = 32;  // deterministic pseudo-random fiber points plus the origin
    unsigned seed = 12345;
};

// Minimum modulus of the eta ^ (d eta)^n coefficient against the coordinate
// volume form, normalized by n! so the standard form scores exactly 1.
// Throws NotContact below the threshold.
double contact_check(const ContactForm& form, const ContactGrid& grid,
                     double threshold = 1e-6);

struct MappedCurveSamples {
    // per sample: position and velocity in C^{2n+1}, ordered (z, w, y, zeta...)
    std::vector<std::vector<cplx>> pos;
    std::vector<std::vector<cplx>> vel;
};

double isotropy_residual(const MappedCurveSamples& f, const ContactForm& form);

struct FrameCompletion {
    std::vector<Eigen::MatrixXcd> B;  // p x p, A(k) * B(k) = (I_m, 0)
    std::vector<Eigen::MatrixXcd> inverse;
    double identity_defect = 0.0;
    double holonomy_repair = 0.0;  // norm of the loop-closure twist, 0 if open
    double lipschitz = 0.0;        // max step-to-step variation of B
};

FrameCompletion matrix_completion(const std::vector<Eigen::MatrixXcd>& A, bool closed,
                                  double sv_floor = 1e-8, double holonomy_cap = 2.5);

struct ArensResult {
    std::vector<RationalFunction> g_tilde;
    std::vector<std::function<cplx(cplx)>> G;
    double identity_residual = 0.0;  // max |sum f_i G_i - 1| on samples
    double h_min = 0.0;              // min |sum f_j g_tilde_j| on samples
};

ArensResult arens_identity(const std::vector<std::function<cplx(cplx)>>& f,
                           const std::vector<cplx>& samples, const std::vector<cplx>& anchors,
                           const FitConfig& cfg = {}, double floor = 1e-8);

struct TubeExtension {
    std::vector<Eigen::VectorXcd> base;   // f(x_k)
    std::vector<Eigen::MatrixXcd> frame;  // (2n+1) x 2n, complementary to df(V)
    double min_rank_sv = 0.0;             // full-Jacobian rank certificate
    double radius = 1.0;

    Eigen::VectorXcd eval(size_t k, const Eigen::VectorXcd& zeta) const {
        return base[k] + frame[k] * zeta;
    }
};

TubeExtension tube_extension(const std::vector<Eigen::VectorXcd>& f,
                             const std::vector<Eigen::VectorXcd>& dfV, bool closed,
                             double floor = 1e-8);

// Reduced form sampled along a traversal: dw - y dz + second-order remainder.
struct ReducedFormSamples {
    int n = 1;
    std::vector<cplx> base_z;
    std::vector<cplx> base_dz;  // dz/ds along the traversal
    bool closed = true;
    // coefficient at traversal sample k, fiber point zeta-hat (size 2n);
    // diff: 0 = dz, 1 = dw, 2 = dy, 3.. = dzeta
    std::function<cplx(size_t k, int diff, const std::vector<cplx>& zeta)> coeff;
};

struct NormalFormResult {
    std::vector<cplx> h;                   // divisor along the traversal
    std::vector<Eigen::MatrixXcd> change;  // zeta_old = change(k) * zeta_new
    ReducedFormSamples reduced;
    std::map<std::string, double> residual_terms;
    int smoothness_class = 0;
    double axis_defect = 0.0;  // max non-dw coefficient modulus on zeta = 0
};

NormalFormResult normal_form(const ContactForm& beta, const AdmissibleSet& S,
                             int nsamples = 256, double contact_threshold = 1e-6);

}  // namespace legtk
