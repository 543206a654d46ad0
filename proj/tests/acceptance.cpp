// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line with
// its runtime; the exit code is the number of failures.
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "legtk/contact.hpp"
#include "legtk/fixtures.hpp"
#include "legtk/homology.hpp"
#include "legtk/ode.hpp"
#include "legtk/pipeline.hpp"
#include "legtk/rational.hpp"
#include "legtk/solver.hpp"

using namespace legtk;
using clock_type = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, double seconds,
            const std::string& detail) {
    std::printf("criterion %d: %-34s %s (%.2f s)  %s\n", id, name.c_str(),
                ok ? "PASS" : "FAIL", seconds, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <typename F>
void run(int id, const std::string& name, F body) {
    auto start = clock_type::now();
    bool ok = false;
    std::string detail;
    try {
        detail = body(ok);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    double sec = std::chrono::duration<double>(clock_type::now() - start).count();
    report(id, name, ok, sec, detail);
}

std::vector<SprayMember> cycles_as_members(const HomologyBasis& basis, int nsamples) {
    std::vector<SprayMember> ms;
    for (const auto& c : basis.cycles)
        ms.push_back({sample_curve(std::make_shared<PiecewiseCurve>(c), nsamples), true});
    return ms;
}

// l disjoint hole circles with dual anchors, for synthetic period maps
struct SyntheticSpray {
    Spray spray;
    std::vector<PeriodMember> members;
};

SyntheticSpray make_synthetic(int l, int nsamples) {
    SyntheticSpray out;
    std::vector<SprayMember> ms;
    std::vector<cplx> anchors;
    for (int k = 0; k < l; ++k) {
        cplx a(4.0 * k, 0.0);
        anchors.push_back(a);
        auto c = std::make_shared<PiecewiseCurve>(PiecewiseCurve::circle(a, 1.0));
        ms.push_back({sample_curve(c, nsamples), true});
    }
    out.spray = build_spray(ms, anchors);
    for (auto& m : ms) out.members.push_back({std::move(m.samples), true, 0.0});
    return out;
}

PeriodEvaluator reduced_period_map(const SyntheticSpray& syn,
                                   std::function<cplx(cplx z, cplx w, cplx s)> perturbation) {
    const auto& xi = syn.spray.xi;
    const auto& members = syn.members;
    return [&xi, &members, perturbation](const std::vector<cplx>& t) {
        LegendrianODE ode;
        ode.w_radius = 4.0;
        ode.V = [&xi, perturbation](cplx z, cplx w, const std::vector<cplx>& tt) {
            cplx s = 0;
            for (size_t i = 0; i < tt.size(); ++i) s += tt[i] * xi[i].eval(z);
            return s + perturbation(z, w, s);
        };
        auto pv = period_map(ode, members, t, 1e-12);
        return pv.values;
    };
}

}  // namespace

int main() {
    run(1, "spray exactness", [](bool& ok) {
        HomologyConfig hcfg;
        hcfg.resolution = 256;
        auto ann_basis = build_homology_basis(fixtures::annulus(), hcfg);
        auto fig_basis = build_homology_basis(fixtures::two_islands_three_bridges(), hcfg);
        auto start = clock_type::now();
        auto s1 = build_spray(cycles_as_members(ann_basis, 2048), {cplx(0.0)});
        auto s2 = build_spray(cycles_as_members(fig_basis, 2048),
                              {cplx(0.0, 1.1), cplx(0.0, -1.1)});
        double sec = std::chrono::duration<double>(clock_type::now() - start).count();
        double defect = std::max(s1.defect, s2.defect);
        ok = defect <= 1e-8 && sec < 1.0;
        return "max defect " + std::to_string(defect) + ", spray time " +
               std::to_string(sec) + " s";
    });

    run(2, "identity period map", [](bool& ok) {
        auto start = clock_type::now();
        std::mt19937 rng(20240517);
        std::uniform_real_distribution<double> u(-0.1, 0.1);
        double worst = 0;
        for (int l : {1, 2, 3}) {
            auto syn = make_synthetic(l, 2048);
            auto P = reduced_period_map(syn, [](cplx, cplx, cplx) { return cplx(0.0); });
            for (int trial = 0; trial < 50; ++trial) {
                std::vector<cplx> t(static_cast<size_t>(l));
                for (auto& v : t) v = cplx(u(rng), u(rng));
                auto p = P(t);
                for (int k = 0; k < l; ++k)
                    worst = std::max(worst, std::abs(p[static_cast<size_t>(k)] -
                                                     t[static_cast<size_t>(k)]));
            }
        }
        double sec = std::chrono::duration<double>(clock_type::now() - start).count();
        ok = worst <= 1e-8 && sec < 10.0;
        return "max |P(t) - t| = " + std::to_string(worst) + ", " + std::to_string(sec) + " s";
    });

    run(3, "quadratic perturbation law", [](bool& ok) {
        auto start = clock_type::now();
        auto syn = make_synthetic(1, 1024);
        std::vector<std::function<cplx(cplx, cplx, cplx)>> perts = {
            [](cplx z, cplx, cplx s) { return 0.05 * z * s * s; },
            [](cplx, cplx w, cplx s) { return 0.05 * w * s; },
            [](cplx, cplx w, cplx) { return 0.05 * w * w; },
        };
        double min_slope = 1e9;
        const cplx dir = std::exp(cplx(0.0, 0.3));
        for (auto& pert : perts) {
            auto P = reduced_period_map(syn, pert);
            std::vector<double> lx, ly;
            for (double tau : {1e-3, 3.16e-3, 1e-2, 3.16e-2, 1e-1}) {
                std::vector<cplx> t = {tau * dir};
                double d = std::abs(P(t)[0] - t[0]);
                lx.push_back(std::log(tau));
                ly.push_back(std::log(d));
            }
            double n = static_cast<double>(lx.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (size_t k = 0; k < lx.size(); ++k) {
                sx += lx[k]; sy += ly[k]; sxx += lx[k] * lx[k]; sxy += lx[k] * ly[k];
            }
            min_slope = std::min(min_slope, (n * sxy - sx * sy) / (n * sxx - sx * sx));
        }
        double sec = std::chrono::duration<double>(clock_type::now() - start).count();
        ok = min_slope >= 1.9 && sec < 30.0;
        return "min log-log slope " + std::to_string(min_slope) + ", " +
               std::to_string(sec) + " s";
    });

    run(4, "degree-certified period killing", [](bool& ok) {
        // annulus spray, 0.05-magnitude inhomogeneity and w-coupling
        auto circle = std::make_shared<PiecewiseCurve>(PiecewiseCurve::circle(0.0, 1.0));
        std::vector<SprayMember> ms = {{sample_curve(circle, 2048), true}};
        auto spray = build_spray(ms, {cplx(0.0)});
        const RationalFunction xi = spray.xi[0];
        auto make_P = [&](int nsamples) {
            auto cs = sample_curve(circle, nsamples);
            return [xi, cs](const std::vector<cplx>& t) {
                LegendrianODE ode;
                ode.w_radius = 4.0;
                ode.V = [&xi](cplx z, cplx w, const std::vector<cplx>& tt) {
                    cplx g = 0.05 / (cplx(0.0, 2 * M_PI) * z);
                    return g + tt[0] * xi.eval(z) + 0.05 * w;
                };
                return period_map(ode, {{cs, true, 0.0}}, t, 1e-12).values;
            };
        };
        PeriodEvaluator P = make_P(2048);
        auto rep = solve_periods(P, 1);
        PeriodEvaluator P2 = make_P(4096);
        double refined = std::abs(P2(rep.t0)[0]);
        ok = rep.certified && rep.residual <= 1e-10 && refined <= 1e-8;
        return "residual " + std::to_string(rep.residual) + ", refined " +
               std::to_string(refined) + ", delta " + std::to_string(rep.delta_used);
    });

    run(5, "end-to-end approximation", [](bool& ok) {
        PipelineConfig cfg;
        cfg.set = fixtures::annulus();
        auto vars = tube_variable_names(1);
        cfg.form.n = 1;
        cfg.form.coeffs = {parse_expr("-y", vars), parse_expr("1", vars),
                           parse_expr("0.05*w", vars)};
        cfg.homology.resolution = 256;
        cfg.traversal_samples = 128;
        auto rep = mergelyan_pipeline(cfg);
        bool annulus_ok = rep.rank_l == 1 && rep.solve && rep.solve->residual <= 1e-10 &&
                          rep.isotropy_residual <= 1e-6 && rep.closeness_c0 <= 1e-3 &&
                          rep.closeness_c1 <= 1e-3;

        PipelineConfig dcfg;
        dcfg.set = fixtures::disc();
        dcfg.form = standard_contact(1);
        dcfg.homology.resolution = 256;
        dcfg.traversal_samples = 128;
        auto drep = mergelyan_pipeline(dcfg);
        bool disc_ok = drep.rank_l == 0 && drep.quadrature_agreement <= 1e-9;
        ok = annulus_ok && disc_ok;
        return "annulus isotropy " + std::to_string(rep.isotropy_residual) + ", closeness " +
               std::to_string(rep.closeness_c0) + ", disc quadrature " +
               std::to_string(drep.quadrature_agreement);
    });

    run(6, "homology basis correctness", [](bool& ok) {
        struct Case { AdmissibleSet (*make)(); int rank; };
        const Case cases[] = {{fixtures::disc, 0},
                              {fixtures::annulus, 1},
                              {fixtures::pair_of_pants, 2},
                              {fixtures::two_islands_three_bridges, 2},
                              {fixtures::three_island_chain, 1}};
        ok = true;
        std::string detail;
        for (const auto& c : cases) {
            auto S = c.make();
            if (euler_rank(S) != c.rank) { ok = false; detail += "rank mismatch; "; }
            for (int res : {256, 384}) {
                HomologyConfig hcfg;
                hcfg.resolution = res;
                auto basis = build_homology_basis(S, hcfg);
                if (static_cast<int>(basis.cycles.size()) != c.rank || !basis.runge_certified) {
                    ok = false;
                    detail += "basis failure at resolution " + std::to_string(res) + "; ";
                }
                for (size_t i = 0; i < basis.cycles.size(); ++i) {
                    auto [lo, hi] = basis.private_arcs[i];
                    for (int k = 0; k <= 32; ++k) {
                        cplx p = basis.cycles[i].eval(lo + (hi - lo) * k / 32.0);
                        for (size_t j = 0; j < basis.cycles.size(); ++j) {
                            if (j == i) continue;
                            if (point_to_polyline_distance(
                                    p, basis.cycles[j].dense_polyline(), true) <= 1e-3) {
                                ok = false;
                                detail += "private arc collision; ";
                            }
                        }
                    }
                }
            }
        }
        return detail.empty() ? std::string("5 fixtures, 2 resolutions") : detail;
    });

    run(7, "gronwall containment", [](bool& ok) {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        ok = true;
        double tightest = 1e9;
        for (int trial = 0; trial < 20; ++trial) {
            cplx a(u(rng), u(rng)), b(u(rng), u(rng)), q(0.3 * u(rng), 0.3 * u(rng));
            LegendrianODE ode;
            ode.V = [=](cplx, cplx w, const std::vector<cplx>&) { return a + b * w + q * w * w; };
            ode.w_radius = 8.0;
            cplx dest(1.0, 0.7);
            std::vector<cplx> zs;
            for (int k = 0; k <= 16; ++k) zs.push_back(dest * (k / 16.0));
            double c = estimate_lipschitz(ode, zs, {});
            cplx w0(0.1 * u(rng), 0.1 * u(rng));
            cplx w1 = w0 + cplx(0.05 * u(rng), 0.05 * u(rng));
            for (double s : {0.25, 0.5, 0.75, 1.0}) {
                auto part = sample_curve(
                    std::make_shared<PiecewiseCurve>(PiecewiseCurve::segment(0.0, dest * s)), 8);
                cplx u0 = integrate_along_curve(ode, part, w0, {}).w.back();
                cplx u1 = integrate_along_curve(ode, part, w1, {}).w.back();
                double bound = gronwall_bound(c, 1.0, std::abs(w0 - w1), s * std::abs(dest));
                if (std::abs(u0 - u1) > bound + 1e-12) ok = false;
                if (std::abs(u0 - u1) > 0) tightest = std::min(tightest, bound / std::abs(u0 - u1));
            }
        }
        return "20 fields, min bound/divergence ratio " + std::to_string(tightest);
    });

    run(8, "matrix completion and Arens identity", [](bool& ok) {
        const int N = 96;
        double worst = 0;
        // 1x3 loop and a 2x4 loop with nontrivial kernel transport
        std::vector<Eigen::MatrixXcd> A1(N), A2(N);
        for (int k = 0; k < N; ++k) {
            double th = 2 * M_PI * k / N;
            Eigen::MatrixXcd r1(1, 3);
            r1 << cplx(1.0), cplx(0.4 * std::cos(th), 0.1), cplx(0.0, 0.4 * std::sin(th));
            A1[static_cast<size_t>(k)] = r1;
            Eigen::MatrixXcd r2(2, 4);
            r2 << cplx(1.0), cplx(0.0), cplx(0.3 * std::cos(th), 0.0),
                cplx(0.0, 0.3 * std::sin(th)), cplx(0.0), cplx(1.0),
                cplx(0.2 * std::sin(2 * th), 0.1), cplx(0.2 * std::cos(2 * th), 0.0);
            A2[static_cast<size_t>(k)] = r2;
        }
        double holonomy = 0;
        for (const auto* A : {&A1, &A2}) {
            auto fc = matrix_completion(*A, true);
            holonomy = std::max(holonomy, fc.holonomy_repair);
            const int m = static_cast<int>((*A)[0].rows());
            const int p = static_cast<int>((*A)[0].cols());
            for (int k = 0; k < N; ++k) {
                Eigen::MatrixXcd prod =
                    (*A)[static_cast<size_t>(k)] * fc.B[static_cast<size_t>(k)];
                Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(m, p);
                want.leftCols(m) = Eigen::MatrixXcd::Identity(m, m);
                worst = std::max(worst, (prod - want).cwiseAbs().maxCoeff());
            }
        }
        std::vector<cplx> samples;
        for (double r : {0.7, 1.0, 1.5, 1.9})
            for (int k = 0; k < 48; ++k)
                samples.push_back(r * std::exp(cplx(0.0, 2 * M_PI * k / 48.0)));
        std::vector<std::function<cplx(cplx)>> f = {[](cplx z) { return z; },
                                                    [](cplx z) { return z - 3.0; }};
        auto arens = arens_identity(f, samples, {cplx(0.0)});
        ok = worst <= 1e-10 && arens.identity_residual <= 1e-8;
        return "completion defect " + std::to_string(worst) + ", holonomy " +
               std::to_string(holonomy) + ", arens residual " +
               std::to_string(arens.identity_residual);
    });

    run(9, "flow commutativity", [](bool& ok) {
        std::vector<std::function<cplx(cplx, cplx)>> fields = {
            [](cplx, cplx) { return cplx(0.0); },
            [](cplx, cplx) { return cplx(1.0); },
            [](cplx, cplx w) { return w; },
            [](cplx z, cplx w) { return z * w; },
        };
        double worst = 0;
        for (auto& f : fields) {
            LegendrianODE ode;
            ode.V = [&f](cplx z, cplx w, const std::vector<cplx>&) { return f(z, w); };
            ode.w_radius = 16.0;
            auto grid = integrate_over_domain(ode, cplx(0.2, -0.3), 1.0, 0.6, 9, 7,
                                              cplx(0.5, 0.0), {});
            worst = std::max(worst, grid.order_discrepancy);
        }
        bool caught = false;
        try {
            LegendrianODE bad;
            bad.V = [](cplx z, cplx, const std::vector<cplx>&) { return std::conj(z); };
            bad.w_radius = 16.0;
            (void)integrate_over_domain(bad, cplx(0.2, -0.3), 1.0, 0.6, 9, 7, 0.0, {});
        } catch (const CommutativityFailure&) {
            caught = true;
        }
        ok = worst <= 1e-9 && caught;
        return "max order discrepancy " + std::to_string(worst) +
               (caught ? ", conj(z) rejected" : ", conj(z) NOT rejected");
    });

    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures;
}
