#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "legtk/errors.hpp"
#include "legtk/geometry.hpp"
#include "legtk/raster.hpp"

namespace legtk {

// Polynomial-plus-principal-parts rational function.
// The polynomial is stored in the scaled variable u = (z - center)/scale for
// conditioning; pole groups hold coefficients of (z - anchor)^{-k}, k = 1..K.
struct RationalFunction {
    struct PoleGroup {
        cplx anchor;
        std::vector<cplx> coeffs;  // coeffs[k-1] multiplies (z - anchor)^{-k}
    };
    std::vector<cplx> poly;  // poly[k] * u^k
    cplx center = 0.0;
    double scale = 1.0;
    std::vector<PoleGroup> poles;

    cplx eval(cplx z) const;
    cplx deriv(cplx z) const;
    RationalFunction derivative() const;
    // Log-free antiderivative. Simple-pole coefficients below residue_tol are
    // dropped; larger ones throw (the primitive would be multivalued).
    RationalFunction primitive(double residue_tol = 1e-9) const;

    double min_pole_distance(const std::vector<cplx>& pts) const;

    RationalFunction& operator+=(const RationalFunction& other);
    RationalFunction& operator*=(cplx a);
};

RationalFunction operator*(cplx a, RationalFunction f);
RationalFunction operator+(RationalFunction a, const RationalFunction& b);

struct Spray {
    std::vector<RationalFunction> xi;
    Eigen::MatrixXcd period_matrix;  // measured functionals, expected ~ I
    double defect = 0.0;             // max |period_matrix - I|
};

// Composite Gauss-Legendre quadrature of the path integral of f dz over the
// sampled curve, with a Richardson-style error estimate from a coarser rule.
cplx contour_integral(const std::function<cplx(cplx)>& f, const CurveSamples& cycle,
                      double* error_estimate = nullptr);
// RationalFunction overload guards against poles near the path.
cplx contour_integral(const RationalFunction& f, const CurveSamples& cycle,
                      double* error_estimate = nullptr, double exclusion_radius = 1e-6);

// One functional per member: the path integral of xi dz. Closed members give
// periods; open members give terminal values of the primitive.
struct SprayMember {
    CurveSamples samples;
    bool is_cycle = true;
};

struct SprayConfig {
    int pole_order_cap = 12;
    double condition_cap = 1e10;
    double identity_tol = 1e-8;
};

Spray build_spray(const std::vector<SprayMember>& members, const std::vector<cplx>& anchors,
                  const SprayConfig& cfg = {});

struct FitConfig {
    int poly_degree = 24;
    int pole_order = 12;
    double condition_cap = 1e12;
    double derivative_weight = 1.0;
    Exec exec = Exec::Parallel;
};

struct FitResult {
    RationalFunction fn;
    double value_residual = 0.0;  // sup |fn - f| on samples
    double deriv_residual = 0.0;  // sup |fn' - f'| where derivative data given
    double condition = 0.0;
};

// Least-squares fit of sampled data in the mixed basis {u^k} u {(z-a_j)^{-k}}.
// deriv_values (df/dz at the same points) may be empty.
FitResult holomorphic_approximate(const std::vector<cplx>& points,
                                  const std::vector<cplx>& values,
                                  const std::vector<cplx>& deriv_values,
                                  const std::vector<cplx>& anchors, const FitConfig& cfg = {});

}  // namespace legtk
