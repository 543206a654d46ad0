#include "legtk/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>

namespace legtk {

cplx TaylorForm::coeff(int diff, cplx z, std::span<const cplx> zeta) const {
    cplx acc = 0;
    for (size_t m = 0; m < monomials.size(); ++m) {
        cplx mono = 1.0;
        for (size_t j = 0; j < monomials[m].size(); ++j)
            for (int e = 0; e < monomials[m][j]; ++e) mono *= zeta[j];
        acc += c[static_cast<size_t>(diff)][m].eval(z) * mono;
    }
    return acc;
}

namespace {

std::vector<cplx> hole_anchors(const AdmissibleSet& S) {
    std::vector<cplx> anchors;
    for (const auto& isl : S.islands) {
        for (const auto& hole : isl.holes) {
            cplx c = 0;
            const auto& poly = hole.dense_polyline();
            for (const auto& p : poly) c += p;
            anchors.push_back(c / static_cast<double>(poly.size()));
        }
    }
    return anchors;
}

std::vector<std::vector<int>> fiber_monomials(int nf, int maxdeg) {
    std::vector<std::vector<int>> out;
    std::vector<int> e(static_cast<size_t>(nf), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == nf) {
            out.push_back(e);
            return;
        }
        for (int d = 0; d <= left; ++d) {
            e[static_cast<size_t>(pos)] = d;
            rec(pos + 1, left - d);
        }
        e[static_cast<size_t>(pos)] = 0;
    };
    rec(0, maxdeg);
    return out;
}

// Extract fiber-Taylor coefficients of the reduced form at every traversal
// sample by a small least-squares probe, then fit each coefficient function
// of z rationally.
TaylorForm fit_taylor_form(const NormalFormResult& nf, const std::vector<cplx>& anchors,
                           const PipelineConfig& cfg, double probe_radius) {
    const int n = nf.reduced.n;
    const int nfib = 2 * n;
    TaylorForm tf;
    tf.n = n;
    tf.monomials = fiber_monomials(nfib, 2);
    const size_t nm = tf.monomials.size();
    const size_t ns = nf.reduced.base_z.size();
    const int ndiff = nfib + 1;

    // deterministic probe points in the fiber ball
    const size_t nprobe = 3 * nm;
    uint64_t state = 99991;
    auto next = [&state]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) / 9007199254740992.0;
    };
    std::vector<std::vector<cplx>> probes(nprobe, std::vector<cplx>(static_cast<size_t>(nfib)));
    for (auto& pr : probes)
        for (auto& x : pr) {
            double r = probe_radius * std::sqrt(next());
            double ph = 2 * M_PI * next();
            x = r * std::exp(cplx(0.0, ph));
        }

    Eigen::MatrixXcd V(nprobe, nm);
    for (size_t p = 0; p < nprobe; ++p)
        for (size_t m = 0; m < nm; ++m) {
            cplx mono = 1.0;
            for (int j = 0; j < nfib; ++j)
                for (int e = 0; e < tf.monomials[m][static_cast<size_t>(j)]; ++e)
                    mono *= probes[p][static_cast<size_t>(j)];
            V(static_cast<long>(p), static_cast<long>(m)) = mono;
        }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> vqr(V);

    FitConfig fit;
    fit.exec = cfg.exec;
    tf.c.assign(static_cast<size_t>(ndiff), {});
    tf.fit_residuals.assign(static_cast<size_t>(ndiff), 0.0);
    for (int d = 0; d < ndiff; ++d) {
        // per-sample Taylor coefficients
        Eigen::MatrixXcd a(ns, nm);
        for (size_t k = 0; k < ns; ++k) {
            Eigen::VectorXcd rhs(nprobe);
            for (size_t p = 0; p < nprobe; ++p)
                rhs(static_cast<long>(p)) = nf.reduced.coeff(k, d, probes[p]);
            a.row(static_cast<long>(k)) = vqr.solve(rhs).transpose();
        }
        for (size_t m = 0; m < nm; ++m) {
            std::vector<cplx> vals(ns);
            double mag = 0;
            for (size_t k = 0; k < ns; ++k) {
                vals[k] = a(static_cast<long>(k), static_cast<long>(m));
                mag = std::max(mag, std::abs(vals[k]));
            }
            if (mag < 1e-13) {
                // identically negligible coefficient: keep an exact zero
                RationalFunction zero;
                tf.c[static_cast<size_t>(d)].push_back(zero);
                continue;
            }
            FitResult fr = holomorphic_approximate(nf.reduced.base_z, vals, {}, anchors, fit);
            tf.fit_residuals[static_cast<size_t>(d)] =
                std::max(tf.fit_residuals[static_cast<size_t>(d)], fr.value_residual);
            tf.c[static_cast<size_t>(d)].push_back(std::move(fr.fn));
        }
    }
    return tf;
}

// cubic Hermite value/derivative of w over one accepted step
void hermite_w(const LegendrianSample& tr, size_t k, double u, cplx w0p, cplx w1p, cplx& H,
               cplx& Hp) {
    double ds = tr.params[k + 1] - tr.params[k];
    cplx p0 = tr.w[k], p1 = tr.w[k + 1];
    cplx m0 = w0p * ds, m1 = w1p * ds;
    double u2 = u * u, u3 = u2 * u;
    H = (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * p1 +
        (u3 - u2) * m1;
    Hp = ((6 * u2 - 6 * u) * p0 + (3 * u2 - 4 * u + 1) * m0 + (-6 * u2 + 6 * u) * p1 +
          (3 * u2 - 2 * u) * m1) /
         ds;
}

}  // namespace

PipelineReport mergelyan_pipeline(const PipelineConfig& cfg) {
    PipelineReport rep;
    const AdmissibleSet& S = cfg.set;
    const int nfib = 2 * cfg.form.n;

    // normal form and its holomorphic (rational) approximation gamma
    NormalFormResult nf =
        normal_form(cfg.form, S, cfg.traversal_samples, cfg.contact_threshold);
    rep.normal_form_axis_defect = nf.axis_defect;
    rep.normal_form_residuals = nf.residual_terms;
    std::vector<cplx> anchors = hole_anchors(S);
    TaylorForm gamma = fit_taylor_form(nf, anchors, cfg, 0.3 * cfg.form.rho);
    rep.fit_residuals = gamma.fit_residuals;
    for (double r : gamma.fit_residuals)
        if (r > cfg.fit_target)
            throw ToleranceBudgetExceeded("coefficient fit residual " + std::to_string(r) +
                                          " exceeds target");

    // homology stage
    std::vector<PeriodMember> solve_members;
    std::vector<SprayMember> spray_members;
    if (cfg.interp_points.empty()) {
        HomologyBasis basis = build_homology_basis(S, cfg.homology);
        rep.rank_l = static_cast<int>(basis.cycles.size());
        for (const auto& c : basis.cycles) {
            auto src = std::make_shared<PiecewiseCurve>(c);
            CurveSamples cs = sample_curve(src, cfg.quad_samples);
            spray_members.push_back({cs, true});
            solve_members.push_back({cs, true, 0.0});
        }
    } else {
        CurveFamily family = curve_family_with_interpolation(S, cfg.interp_points, cfg.homology);
        int l = 0;
        for (const auto& m : family.members) l += m.is_cycle ? 1 : 0;
        rep.rank_l = l;
        for (const auto& m : family.members) {
            auto src = std::make_shared<PiecewiseCurve>(m.curve);
            int nsamp = std::max(64, cfg.quad_samples / static_cast<int>(family.members.size()));
            CurveSamples cs = sample_curve(src, nsamp);
            spray_members.push_back({cs, m.is_cycle});
            solve_members.push_back({cs, m.is_cycle, 0.0});
        }
    }

    // spray
    Spray spray;
    const int l_total = static_cast<int>(solve_members.size());
    if (l_total > 0) {
        spray = build_spray(spray_members, anchors);
        rep.spray_defect = spray.defect;
    }

    // reduced Legendrian ODE: insert y = y(z, t), zeta' = 0
    LegendrianODE ode;
    ode.w_radius = cfg.form.rho;
    auto xi = spray.xi;
    ode.V = [gamma, xi, nfib](cplx z, cplx w, const std::vector<cplx>& t) {
        cplx y = 0, yp = 0;
        for (size_t i = 0; i < t.size() && i < xi.size(); ++i) {
            y += t[i] * xi[i].eval(z);
            yp += t[i] * xi[i].deriv(z);
        }
        std::vector<cplx> zeta(static_cast<size_t>(nfib), 0.0);
        zeta[0] = w;
        zeta[1] = y;
        cplx cdz = gamma.coeff(0, z, zeta);
        cplx cdw = gamma.coeff(1, z, zeta);
        cplx cdy = gamma.coeff(2, z, zeta);
        return -(cdz + cdy * yp) / cdw;
    };

    // kill the periods
    rep.t0.assign(static_cast<size_t>(l_total), 0.0);
    if (l_total > 0) {
        PeriodEvaluator P = [&](const std::vector<cplx>& t) {
            return period_map(ode, solve_members, t, cfg.ode_tol, cfg.exec).values;
        };
        SolveConfig scfg;
        scfg.delta_start = cfg.delta_start;
        scfg.delta_floor = cfg.delta_floor;
        scfg.target = cfg.period_target;
        scfg.exec = cfg.exec;
        rep.solve = solve_periods(P, l_total, scfg);
        rep.t0 = rep.solve->t0;
    }

    // integrate the single-valued solution along the members
    std::vector<PeriodMember> output_members = solve_members;
    if (output_members.empty()) {
        // rank zero and no interpolation points: trace the traversal itself
        const PiecewiseCurve& trav =
            S.islands.empty() ? S.arcs[0].curve : S.islands[0].outer;
        auto src = std::make_shared<PiecewiseCurve>(trav);
        output_members.push_back({sample_curve(src, cfg.quad_samples), false, 0.0});
    }
    for (const auto& m : output_members) {
        OutputMember om;
        om.is_cycle = m.is_cycle;
        om.trace = integrate_along_curve(ode, m.samples, m.w_init, rep.t0, cfg.ode_tol);
        rep.members.push_back(std::move(om));
        if (!m.is_cycle)
            rep.interpolation_defect =
                std::max(rep.interpolation_defect, std::abs(rep.members.back().trace.w.back()));
    }

    // metrics on the traces
    constexpr double GL5_X[5] = {0.046910077030668, 0.230765344947158, 0.5,
                                 0.769234655052841, 0.953089922969332};
    constexpr double GL5_W[5] = {0.118463442528095, 0.239314335249683, 0.284444444444444,
                                 0.239314335249683, 0.118463442528095};
    auto spray_y = [&](cplx z) {
        cplx y = 0;
        for (size_t i = 0; i < rep.t0.size() && i < xi.size(); ++i)
            y += rep.t0[i] * xi[i].eval(z);
        return y;
    };
    auto spray_yp = [&](cplx z) {
        cplx yp = 0;
        for (size_t i = 0; i < rep.t0.size() && i < xi.size(); ++i)
            yp += rep.t0[i] * xi[i].deriv(z);
        return yp;
    };
    for (size_t mi = 0; mi < rep.members.size(); ++mi) {
        const LegendrianSample& tr = rep.members[mi].trace;
        const PiecewiseCurve& curve = *output_members[mi].samples.source;
        cplx quad = 0;
        for (size_t k = 0; k + 1 < tr.params.size(); ++k) {
            double s0 = tr.params[k], s1 = tr.params[k + 1], ds = s1 - s0;
            cplx w0p = ode.V(tr.z[k], tr.w[k], rep.t0) * curve.deriv(s0);
            cplx w1p = ode.V(tr.z[k + 1], tr.w[k + 1], rep.t0) * curve.deriv(s1);
            // Hermite-extension defect at the midpoint = isotropy residual density
            cplx H, Hp;
            hermite_w(tr, k, 0.5, w0p, w1p, H, Hp);
            double sm = s0 + 0.5 * ds;
            cplx zd = curve.deriv(sm);
            rep.isotropy_residual =
                std::max(rep.isotropy_residual,
                         std::abs(Hp - ode.V(curve.eval(sm), H, rep.t0) * zd) / std::abs(zd));
            // independent quadrature of the right-hand side along the step
            for (int q = 0; q < 5; ++q) {
                double u = GL5_X[q];
                cplx Hq, Hpq;
                hermite_w(tr, k, u, w0p, w1p, Hq, Hpq);
                double s = s0 + u * ds;
                quad += GL5_W[q] * ds * ode.V(curve.eval(s), Hq, rep.t0) * curve.deriv(s);
            }
            rep.quadrature_agreement =
                std::max(rep.quadrature_agreement, std::abs(tr.w[k + 1] - tr.w[0] - quad));
        }
        for (size_t k = 0; k < tr.params.size(); ++k) {
            cplx y = spray_y(tr.z[k]);
            rep.closeness_c0 = std::max({rep.closeness_c0, std::abs(tr.w[k]), std::abs(y)});
            cplx wp = ode.V(tr.z[k], tr.w[k], rep.t0);
            rep.closeness_c1 = std::max({rep.closeness_c1, std::abs(wp), std::abs(spray_yp(tr.z[k]))});
        }
    }

    // sampled self-intersection proxy across all traces
    std::vector<std::array<cplx, 3>> pts;
    for (const auto& om : rep.members)
        for (size_t k = 0; k < om.trace.z.size(); k += std::max<size_t>(1, om.trace.z.size() / 64))
            pts.push_back({om.trace.z[k], om.trace.w[k], spray_y(om.trace.z[k])});
    double mind = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 2; j < pts.size(); ++j) {
            double d = std::abs(pts[i][0] - pts[j][0]) + std::abs(pts[i][1] - pts[j][1]) +
                       std::abs(pts[i][2] - pts[j][2]);
            mind = std::min(mind, d);
        }
    rep.min_output_separation = std::isfinite(mind) ? mind : 0.0;

    rep.tolerances = {{"contact_threshold", cfg.contact_threshold},
                      {"ode_tol", cfg.ode_tol},
                      {"fit_target", cfg.fit_target},
                      {"period_target", cfg.period_target},
                      {"spray_identity", 1e-8},
                      {"isotropy", 1e-6},
                      {"closeness_c0", 1e-3},
                      {"closeness_c1", 1e-3}};
    return rep;
}

AnnulusReport annulus_demo(const LoopSamples& loop, double rho, const FitConfig& fit) {
    const size_t n = loop.y.size();
    if (n < 16 || loop.w.size() != n)
        throw Error("annulus_demo: need matching w/y samples, at least 16");
    std::vector<cplx> zs(n);
    for (size_t k = 0; k < n; ++k)
        zs[k] = std::exp(cplx(0.0, 2 * M_PI * static_cast<double>(k) / static_cast<double>(n)));

    // input isotropy: dw/dtheta = y * dz/dtheta on samples (4th-order FD)
    double in_res = 0;
    double dth = 2 * M_PI / static_cast<double>(n);
    for (size_t k = 0; k < n; ++k) {
        size_t kp = (k + 1) % n, km = (k + n - 1) % n;
        size_t kpp = (k + 2) % n, kmm = (k + n - 2) % n;
        cplx dw = (8.0 * (loop.w[kp] - loop.w[km]) - (loop.w[kpp] - loop.w[kmm])) / (12 * dth);
        in_res = std::max(in_res, std::abs(dw - loop.y[k] * cplx(0.0, 1.0) * zs[k]));
    }
    if (in_res > loop.isotropy_tol)
        throw NotLegendrianInput("input loop isotropy residual " + std::to_string(in_res));

    AnnulusReport rep;
    FitResult fy = holomorphic_approximate(zs, loop.y, {}, {cplx(0.0)}, fit);
    rep.fit_residual = fy.value_residual;

    // kill the period: the spray on the annulus is 1/(2 pi i z)
    auto circle = std::make_shared<PiecewiseCurve>(PiecewiseCurve::circle(0.0, 1.0));
    CurveSamples cs = sample_curve(circle, 2048);
    cplx period_g = contour_integral(fy.fn, cs);
    rep.t0 = -period_g;
    RationalFunction xi;
    xi.poles.push_back({cplx(0.0), {1.0 / cplx(0.0, 2 * M_PI)}});
    rep.y_out = fy.fn + rep.t0 * xi;

    rep.w_out = rep.y_out.primitive(1e-7);
    // align the integration constant with the input at z = 1
    rep.w_out.poly.resize(std::max<size_t>(rep.w_out.poly.size(), 1), 0.0);
    rep.w_out.poly[0] += loop.w[0] - rep.w_out.eval(zs[0]);

    // shrink the annulus until the solution tube stays within bounds
    double bound = 1.0;
    for (size_t k = 0; k < n; ++k)
        bound = std::max({bound, 2 * std::abs(loop.w[k]), 2 * std::abs(loop.y[k])});
    rep.rho_used = rho;
    for (int guard = 0; guard < 60; ++guard) {
        double mx = 0;
        for (double r : {rep.rho_used, 1.0 / rep.rho_used})
            for (int q = 0; q < 64; ++q) {
                cplx z = r * std::exp(cplx(0.0, 2 * M_PI * q / 64.0));
                mx = std::max({mx, std::abs(rep.w_out.eval(z)), std::abs(rep.y_out.eval(z))});
            }
        if (mx <= bound) break;
        rep.rho_used = std::sqrt(rep.rho_used);  // move the radii toward 1
        if (rep.rho_used > 0.999)
            throw ApproximationFailure("annulus shrank to the circle without fitting the tube");
    }

    // standard-form isotropy on annulus samples: |w' - y|
    for (double r : {rep.rho_used, std::sqrt(rep.rho_used), 1.0, 1.0 / rep.rho_used})
        for (int q = 0; q < 128; ++q) {
            cplx z = r * std::exp(cplx(0.0, 2 * M_PI * q / 128.0));
            rep.isotropy_residual = std::max(
                rep.isotropy_residual, std::abs(rep.w_out.deriv(z) - rep.y_out.eval(z)));
        }

    for (size_t k = 0; k < n; ++k) {
        rep.closeness_c0 = std::max({rep.closeness_c0, std::abs(rep.w_out.eval(zs[k]) - loop.w[k]),
                                     std::abs(rep.y_out.eval(zs[k]) - loop.y[k])});
        size_t kp = (k + 1) % n, km = (k + n - 1) % n;
        cplx dwin = (loop.w[kp] - loop.w[km]) / (2 * dth);
        cplx dwout = rep.w_out.deriv(zs[k]) * cplx(0.0, 1.0) * zs[k];
        rep.closeness_c1 = std::max(rep.closeness_c1, std::abs(dwout - dwin));
    }
    return rep;
}

}  // namespace legtk
