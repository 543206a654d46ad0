#pragma once

#include <functional>
#include <string>
#include <vector>

#include "legtk/errors.hpp"
#include "legtk/geometry.hpp"
#include "legtk/raster.hpp"

namespace legtk {

// dw = V(z, w, t) dz restricted to the admissible set, fiber disc, parameter box.
struct LegendrianODE {
    std::function<cplx(cplx z, cplx w, const std::vector<cplx>& t)> V;
    double lipschitz_c = 1.0;  // Lipschitz bound of V in w on the working box
    double w_radius = 1.0;     // solutions escaping |w| > w_radius halt
    double t_radius = 0.1;
};

struct LegendrianSample {
    std::vector<double> params;  // accepted step locations in [0,1]
    std::vector<cplx> z;
    std::vector<cplx> w;
    std::vector<cplx> t;
    double accumulated_error = 0.0;
};

struct PeriodVector {
    std::vector<cplx> values;
    std::vector<int> member_ids;
    std::vector<cplx> t;
    std::vector<double> estimated_error;
    double max_abs() const;
};

LegendrianSample integrate_along_curve(const LegendrianODE& ode, const CurveSamples& curve,
                                       cplx w0, const std::vector<cplx>& t, double tol = 1e-11);

struct DomainGrid {
    cplx corner;
    double dx = 0, dy = 0;
    int nx = 0, ny = 0;
    std::vector<cplx> w;  // row-major, w[j*nx + i] at corner + i*dx + j*i*dy
    double order_discrepancy = 0.0;
};

// Solves over a rectangle by composing the two real flows in both orders; the
// orders must agree (holomorphy certificate) within commute_tol.
DomainGrid integrate_over_domain(const LegendrianODE& ode, cplx corner, double width,
                                 double height, int nx, int ny, cplx w0,
                                 const std::vector<cplx>& t, double tol = 1e-11,
                                 double commute_tol = 1e-9);

cplx period(const LegendrianODE& ode, const CurveSamples& cycle, cplx w0,
            const std::vector<cplx>& t, double tol = 1e-11, double* error_estimate = nullptr);

struct PeriodMember {
    CurveSamples samples;
    bool is_cycle = true;
    cplx w_init = 0.0;
};

PeriodVector period_map(const LegendrianODE& ode, const std::vector<PeriodMember>& members,
                        const std::vector<cplx>& t, double tol = 1e-11,
                        Exec exec = Exec::Parallel);

inline double gronwall_bound(double c, double c0, double dw0, double dist) {
    return c0 * dw0 * std::exp(c * dist);
}

// Sampled Lipschitz estimate of V in w over the box, with a 1.5x safety factor.
double estimate_lipschitz(const LegendrianODE& ode, const std::vector<cplx>& z_samples,
                          const std::vector<cplx>& t);

}  // namespace legtk
