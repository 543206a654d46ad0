#include "legtk/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace legtk {

namespace {

double inf_norm(const std::vector<cplx>& v) {
    double m = 0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<cplx> diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> d(a.size());
    for (size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
    return d;
}

// boundary samples of the polydisc: facet i has |t_i| = delta, the remaining
// coordinates on a small deterministic polar grid
std::vector<std::vector<cplx>> boundary_samples(const PolydiscSpec& spec, double* spacing) {
    std::vector<std::vector<cplx>> out;
    const int l = spec.l;
    const double d = spec.delta;
    uint64_t state = spec.seed * 6364136223846793005ull + 1442695040888963407ull;
    auto next = [&state]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) / 9007199254740992.0;
    };
    for (int facet = 0; facet < l; ++facet) {
        for (int q = 0; q < spec.samples_per_facet; ++q) {
            double th = 2 * M_PI * q / spec.samples_per_facet;
            for (int rep = 0; rep < std::max(1, spec.off_facet_samples); ++rep) {
                std::vector<cplx> t(static_cast<size_t>(l));
                t[static_cast<size_t>(facet)] = d * std::exp(cplx(0.0, th));
                for (int j = 0; j < l; ++j) {
                    if (j == facet) continue;
                    double r = (rep == 0) ? 0.0 : d * next();
                    double ph = 2 * M_PI * next();
                    t[static_cast<size_t>(j)] = r * std::exp(cplx(0.0, ph));
                }
                out.push_back(std::move(t));
            }
        }
    }
    if (spacing) *spacing = 2 * M_PI * d / spec.samples_per_facet;
    return out;
}

}  // namespace

CertificateResult degree_certificate(const PeriodEvaluator& P, const PolydiscSpec& spec,
                                     Exec exec) {
    double spacing = 0;
    auto samples = boundary_samples(spec, &spacing);
    const int n = static_cast<int>(samples.size());
    std::vector<double> dev(static_cast<size_t>(n), 0.0);
    std::vector<std::vector<cplx>> vals(static_cast<size_t>(n));
    std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
    for (int k = 0; k < n; ++k) {
        try {
            vals[static_cast<size_t>(k)] = P(samples[static_cast<size_t>(k)]);
            dev[static_cast<size_t>(k)] =
                inf_norm(diff(vals[static_cast<size_t>(k)], samples[static_cast<size_t>(k)]));
        } catch (...) {
#pragma omp critical(degree_certificate_error)
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    CertificateResult res;
    res.samples_used = n;
    for (double v : dev) res.sup_deviation = std::max(res.sup_deviation, v);

    // sampled Lipschitz estimate of P - id along each facet circle
    double lip = 0.0;
    int per = spec.samples_per_facet * std::max(1, spec.off_facet_samples);
    for (int facet = 0; facet < spec.l; ++facet) {
        for (int q = 0; q < spec.samples_per_facet; ++q) {
            int k0 = facet * per + q * std::max(1, spec.off_facet_samples);
            int k1 = facet * per +
                     ((q + 1) % spec.samples_per_facet) * std::max(1, spec.off_facet_samples);
            auto d0 = diff(vals[static_cast<size_t>(k0)], samples[static_cast<size_t>(k0)]);
            auto d1 = diff(vals[static_cast<size_t>(k1)], samples[static_cast<size_t>(k1)]);
            double dt = inf_norm(diff(samples[static_cast<size_t>(k1)],
                                      samples[static_cast<size_t>(k0)]));
            if (dt > 1e-14) lip = std::max(lip, inf_norm(diff(d1, d0)) / dt);
        }
    }
    res.margin_guard = lip * spacing;
    if (res.margin_guard > spec.delta - res.sup_deviation && res.sup_deviation < spec.delta)
        throw InsufficientSampling("Lipschitz guard " + std::to_string(res.margin_guard) +
                                   " exceeds the remaining boundary margin");
    res.margin = spec.delta - res.sup_deviation - res.margin_guard;
    res.certified = res.margin > 0;
    return res;
}

SolveReport solve_periods(const PeriodEvaluator& P, int l, const SolveConfig& cfg) {
    SolveReport rep;

    // delta schedule: halve until the certificate passes
    PolydiscSpec spec;
    spec.l = l;
    CertificateResult cert;
    bool found = false;
    for (double d = cfg.delta_start; d >= cfg.delta_floor; d /= 2) {
        spec.delta = d;
        try {
            cert = degree_certificate(P, spec, cfg.exec);
        } catch (const InsufficientSampling&) {
            continue;
        }
        if (cert.certified) {
            found = true;
            break;
        }
    }
    if (!found) throw CertificateFailed("no delta in the schedule certifies degree one");
    rep.certified = true;
    rep.boundary_margin = cert.margin;
    rep.delta_used = spec.delta;

    std::vector<cplx> t(static_cast<size_t>(l), 0.0);
    auto clamp_to_disc = [&](std::vector<cplx>& v) {
        for (auto& x : v)
            if (std::abs(x) > spec.delta) x *= spec.delta / std::abs(x);
    };

    std::vector<cplx> val = P(t);
    double res = inf_norm(val);
    double best = res;
    std::vector<cplx> best_t = t;
    double damping = 1.0;
    int stall = 0;
    for (rep.iterations = 0; rep.iterations < cfg.max_iterations; ++rep.iterations) {
        if (res <= cfg.target) break;
        std::vector<cplx> trial(t);
        if (stall < 3) {
            for (size_t k = 0; k < t.size(); ++k) trial[k] = t[k] - damping * val[k];
        } else {
            // finite-difference Newton step
            double h = std::max(1e-7, 1e-3 * res);
            Eigen::MatrixXcd J(l, l);
            for (int j = 0; j < l; ++j) {
                std::vector<cplx> tp(t);
                tp[static_cast<size_t>(j)] += h;
                std::vector<cplx> vp = P(tp);
                for (int i = 0; i < l; ++i)
                    J(i, j) = (vp[static_cast<size_t>(i)] - val[static_cast<size_t>(i)]) / h;
            }
            Eigen::VectorXcd r(l);
            for (int i = 0; i < l; ++i) r(i) = val[static_cast<size_t>(i)];
            Eigen::VectorXcd step = J.colPivHouseholderQr().solve(r);
            for (int i = 0; i < l; ++i) trial[static_cast<size_t>(i)] = t[static_cast<size_t>(i)] - step(i);
        }
        clamp_to_disc(trial);
        std::vector<cplx> tval = P(trial);
        double tres = inf_norm(tval);
        if (tres < res) {
            t = std::move(trial);
            val = std::move(tval);
            res = tres;
            damping = std::min(1.0, damping * 1.5);
            if (res < best) {
                best = res;
                best_t = t;
                stall = 0;
            }
        } else {
            damping *= 0.5;
            ++stall;
            if (damping < 1e-4 && stall > 8) break;
        }
    }
    rep.t0 = best_t;
    rep.residual = best;
    if (best > cfg.target)
        throw NoConvergence("period residual " + std::to_string(best) + " misses target", best);
    return rep;
}

}  // namespace legtk
