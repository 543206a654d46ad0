#include "legtk/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace legtk {

double PeriodVector::max_abs() const {
    double m = 0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// Dormand-Prince 5(4) coefficients
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

// Integrates w' = F(s, w) over [s0, s1] with per-step budget tol * ds.
// Records accepted samples through `record` (s, w).
cplx rk45(const std::function<cplx(double, cplx)>& F, double s0, double s1, cplx w0,
          double tol, double escape_radius, double* acc_error,
          const std::function<void(double, cplx)>& record) {
    double s = s0;
    cplx w = w0;
    double span = s1 - s0;
    double h = span / 64.0;
    cplx k1 = F(s, w);
    int guard = 0;
    while (s < s1) {
        if (++guard > 2000000) throw StepUnderflow("step count cap reached");
        if (h < 1e-14 * span) throw StepUnderflow("adaptive step underflow");
        if (s1 - s <= 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s1))) {
            // sub-ulp tail: finish with one explicit Euler step
            w += (s1 - s) * k1;
            s = s1;
            if (record) record(s, w);
            break;
        }
        h = std::min(h, s1 - s);
        cplx k2 = F(s + A21 * h, w + h * (A21 * k1));
        cplx k3 = F(s + 0.3 * h, w + h * (A31 * k1 + A32 * k2));
        cplx k4 = F(s + 0.8 * h, w + h * (A41 * k1 + A42 * k2 + A43 * k3));
        cplx k5 = F(s + 8.0 / 9 * h, w + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        cplx k6 = F(s + h, w + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        cplx w5 = w + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        cplx k7 = F(s + h, w5);
        double err =
            std::abs(h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7));
        double budget = tol * (h / span);
        bool accepted = err <= budget || h <= 1e-13 * span;
        if (accepted) {
            s += h;
            w = w5;
            k1 = k7;  // FSAL
            if (acc_error) *acc_error += err;
            if (record) record(s, w);
            if (std::abs(w) > escape_radius) throw Escape("solution left the fiber disc", s);
        }
        double scale = 0.9 * std::pow(budget / std::max(err, 1e-300), 0.2);
        double floor = accepted ? 2e-14 * span : 0.0;  // keep accepted steps advancing
        h = std::max(h * std::clamp(scale, 0.2, 5.0), floor);
    }
    return w;
}

}  // namespace

LegendrianSample integrate_along_curve(const LegendrianODE& ode, const CurveSamples& curve,
                                       cplx w0, const std::vector<cplx>& t, double tol) {
    if (!curve.source)
        throw Error("integrate_along_curve requires samples backed by a curve");
    if (std::abs(w0) > ode.w_radius)
        throw Escape("initial value outside the fiber disc", 0.0);
    const PiecewiseCurve& c = *curve.source;
    LegendrianSample out;
    out.t = t;
    auto F = [&](double s, cplx w) { return ode.V(c.eval(s), w, t) * c.deriv(s); };
    auto record = [&](double s, cplx w) {
        out.params.push_back(s);
        out.z.push_back(c.eval(s));
        out.w.push_back(w);
    };
    // the parameterization is only piecewise smooth; restart the stepper at
    // every knot so the error controller never straddles a derivative jump
    std::vector<double> stops = {0.0};
    for (double s : c.smooth_breakpoints())
        if (s > stops.back() + 1e-12 && s < 1.0 - 1e-12) stops.push_back(s);
    stops.push_back(1.0);
    record(0.0, w0);
    cplx w = w0;
    for (size_t k = 0; k + 1 < stops.size(); ++k) {
        double s0 = stops[k], s1 = stops[k + 1], ds = s1 - s0;
        // keep stage evaluations strictly inside the interval: at the exact
        // breakpoint the curve derivative belongs to the neighboring branch
        double theta = 1e-12 * ds;
        auto Fk = [&](double s, cplx wv) { return F(std::clamp(s, s0 + theta, s1 - theta), wv); };
        w = rk45(Fk, s0, s1, w, tol * ds, ode.w_radius, &out.accumulated_error, record);
    }
    return out;
}

DomainGrid integrate_over_domain(const LegendrianODE& ode, cplx corner, double width,
                                 double height, int nx, int ny, cplx w0,
                                 const std::vector<cplx>& t, double tol, double commute_tol) {
    DomainGrid g;
    g.corner = corner;
    g.nx = nx;
    g.ny = ny;
    g.dx = (nx > 1) ? width / (nx - 1) : 0.0;
    g.dy = (ny > 1) ? height / (ny - 1) : 0.0;
    g.w.assign(static_cast<size_t>(nx) * ny, w0);

    // flow along a straight segment z0 -> z1
    auto flow = [&](cplx z0, cplx z1, cplx w) {
        if (z0 == z1) return w;
        cplx dir = z1 - z0;
        auto F = [&](double s, cplx v) { return ode.V(z0 + s * dir, v, t) * dir; };
        return rk45(F, 0.0, 1.0, w, tol, ode.w_radius, nullptr, nullptr);
    };

    double disc = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            cplx zx = corner + cplx(i * g.dx, 0.0);
            cplx zt = corner + cplx(i * g.dx, j * g.dy);
            cplx zy = corner + cplx(0.0, j * g.dy);
            cplx w_xy = flow(zx, zt, flow(corner, zx, w0));  // x then y
            cplx w_yx = flow(zy, zt, flow(corner, zy, w0));  // y then x
            disc = std::max(disc, std::abs(w_xy - w_yx));
            g.w[static_cast<size_t>(j) * nx + i] = 0.5 * (w_xy + w_yx);
        }
    }
    g.order_discrepancy = disc;
    if (disc > commute_tol)
        throw CommutativityFailure("flow orders disagree by " + std::to_string(disc) +
                                   "; right-hand side is not holomorphic on the rectangle");
    return g;
}

cplx period(const LegendrianODE& ode, const CurveSamples& cycle, cplx w0,
            const std::vector<cplx>& t, double tol, double* error_estimate) {
    if (!cycle.closed) throw Error("period requires a closed cycle");
    LegendrianSample sol = integrate_along_curve(ode, cycle, w0, t, tol);
    if (error_estimate) *error_estimate = sol.accumulated_error;
    return sol.w.back() - w0;
}

PeriodVector period_map(const LegendrianODE& ode, const std::vector<PeriodMember>& members,
                        const std::vector<cplx>& t, double tol, Exec exec) {
    PeriodVector out;
    const int n = static_cast<int>(members.size());
    out.values.assign(static_cast<size_t>(n), 0.0);
    out.member_ids.resize(static_cast<size_t>(n));
    out.estimated_error.assign(static_cast<size_t>(n), 0.0);
    out.t = t;
    std::vector<std::string> failures(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
    for (int k = 0; k < n; ++k) {
        out.member_ids[static_cast<size_t>(k)] = k;
        try {
            const PeriodMember& m = members[static_cast<size_t>(k)];
            LegendrianSample sol = integrate_along_curve(ode, m.samples, m.w_init, t, tol);
            // cycles report the monodromy, arcs the terminal value
            out.values[static_cast<size_t>(k)] =
                m.is_cycle ? sol.w.back() - m.w_init : sol.w.back();
            out.estimated_error[static_cast<size_t>(k)] = sol.accumulated_error;
        } catch (const Error& e) {
            failures[static_cast<size_t>(k)] = e.what();
        }
    }
    for (int k = 0; k < n; ++k)
        if (!failures[static_cast<size_t>(k)].empty())
            throw Error("period_map member " + std::to_string(k) + ": " +
                        failures[static_cast<size_t>(k)]);
    return out;
}

double estimate_lipschitz(const LegendrianODE& ode, const std::vector<cplx>& z_samples,
                          const std::vector<cplx>& t) {
    double lip = 0.0;
    const double h = 1e-5 * ode.w_radius;
    for (const auto& z : z_samples) {
        for (double r : {0.0, 0.5 * ode.w_radius, 0.9 * ode.w_radius}) {
            for (int q = 0; q < 4; ++q) {
                cplx w = r * std::exp(cplx(0.0, q * M_PI / 2));
                cplx d = (ode.V(z, w + h, t) - ode.V(z, w - h, t)) / (2 * h);
                lip = std::max(lip, std::abs(d));
            }
        }
    }
    return 1.5 * lip;
}

}  // namespace legtk
