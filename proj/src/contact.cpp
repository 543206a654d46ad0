#include "legtk/contact.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace legtk {

cplx ContactForm::coeff(int k, std::span<const cplx> vars) const {
    return coeffs[static_cast<size_t>(k)]->eval(vars);
}

cplx ContactForm::coeff_partial(int k, int var, std::span<const cplx> vars) const {
    if (partials_.empty()) partials_.assign(coeffs.size(), {});
    auto& row = partials_[static_cast<size_t>(k)];
    if (row.empty()) {
        row.resize(coeffs.size());
        for (size_t v = 0; v < coeffs.size(); ++v)
            row[v] = coeffs[static_cast<size_t>(k)]->diff(static_cast<int>(v));
    }
    return row[static_cast<size_t>(var)]->eval(vars);
}

ContactForm standard_contact(int n) {
    if (n < 1) throw Error("standard_contact requires n >= 1");
    ContactForm form;
    form.n = n;
    form.rho = 1.0;
    form.coeffs.resize(static_cast<size_t>(2 * n + 1));
    // dw - y dz - sum_{i=2}^{n} y_i dx_i with fiber order (w, y, x2, y2, ...)
    form.coeffs[0] = Expr::neg(Expr::variable(2));  // dz: -y
    form.coeffs[1] = Expr::constant(1.0);           // dw
    form.coeffs[2] = Expr::constant(0.0);           // dy
    for (int i = 2; i <= n; ++i) {
        int xi = 2 * i - 1, yi = 2 * i;  // variable (= differential) indices of x_i, y_i
        form.coeffs[static_cast<size_t>(xi)] = Expr::neg(Expr::variable(yi));  // dx_i: -y_i
        form.coeffs[static_cast<size_t>(yi)] = Expr::constant(0.0);            // dy_i
    }
    return form;
}

namespace {

// exterior forms over N <= 7 coordinates as bitmask -> coefficient
using XForm = std::unordered_map<unsigned, cplx>;

int merge_sign(unsigned a, unsigned b) {
    if (a & b) return 0;
    int inv = 0;
    for (unsigned i = 0; i < 32; ++i)
        if (b & (1u << i)) inv += std::popcount(a >> (i + 1));
    return (inv % 2) ? -1 : 1;
}

XForm wedge(const XForm& f, const XForm& g) {
    XForm out;
    for (const auto& [ma, ca] : f)
        for (const auto& [mb, cb] : g) {
            int s = merge_sign(ma, mb);
            if (s != 0) out[ma | mb] += static_cast<double>(s) * ca * cb;
        }
    return out;
}

double factorial(int n) {
    double f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

cplx contact_coefficient(const ContactForm& form, std::span<const cplx> vars) {
    const int N = form.dim();
    XForm eta, deta;
    for (int k = 0; k < N; ++k) {
        cplx c = form.coeff(k, vars);
        if (c != 0.0) eta[1u << k] += c;
    }
    for (int i = 0; i < N; ++i)
        for (int k = i + 1; k < N; ++k) {
            cplx c = form.coeff_partial(k, i, vars) - form.coeff_partial(i, k, vars);
            if (c != 0.0) deta[(1u << i) | (1u << k)] += c;
        }
    XForm acc = eta;
    for (int q = 0; q < form.n; ++q) acc = wedge(acc, deta);
    unsigned full = (1u << N) - 1;
    auto it = acc.find(full);
    cplx top = (it == acc.end()) ? cplx(0.0) : it->second;
    return top / factorial(form.n);
}

}  // namespace

double contact_check(const ContactForm& form, const ContactGrid& grid, double threshold) {
    const int N = form.dim();
    double mn = std::numeric_limits<double>::infinity();
    // deterministic fiber sampling (LCG), always including the origin
    uint64_t state = grid.seed * 6364136223846793005ull + 1442695040888963407ull;
    auto next = [&state]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) / 9007199254740992.0;  // [0,1)
    };
    std::vector<cplx> vars(static_cast<size_t>(N), 0.0);
    for (const auto& z : grid.base_points) {
        for (int q = 0; q <= grid.fiber_count; ++q) {
            vars[0] = z;
            for (int k = 1; k < N; ++k) {
                if (q == 0)
                    vars[static_cast<size_t>(k)] = 0.0;
                else {
                    double r = grid.fiber_radius * next();
                    double ph = 2 * M_PI * next();
                    vars[static_cast<size_t>(k)] = r * std::exp(cplx(0.0, ph));
                }
            }
            mn = std::min(mn, std::abs(contact_coefficient(form, vars)));
        }
    }
    if (!(mn > threshold))
        throw NotContact("minimum contact coefficient " + std::to_string(mn) +
                         " is at or below threshold");
    return mn;
}

double isotropy_residual(const MappedCurveSamples& f, const ContactForm& form) {
    if (f.vel.size() != f.pos.size() || f.pos.empty())
        throw MissingTangents("isotropy_residual requires velocity data for every sample");
    double res = 0;
    for (size_t k = 0; k < f.pos.size(); ++k) {
        const auto& x = f.pos[k];
        const auto& v = f.vel[k];
        cplx pull = 0;
        for (int j = 0; j < form.dim(); ++j)
            pull += form.coeff(j, x) * v[static_cast<size_t>(j)];
        double speed = std::abs(v[0]);
        res = std::max(res, std::abs(pull) / std::max(speed, 1e-300));
    }
    return res;
}

FrameCompletion matrix_completion(const std::vector<Eigen::MatrixXcd>& A, bool closed,
                                  double sv_floor, double holonomy_cap) {
    if (A.empty()) throw Error("matrix_completion: no samples");
    const long m = A[0].rows(), p = A[0].cols();
    if (m >= p) throw Error("matrix_completion requires m < p");
    const long q = p - m;  // kernel dimension
    const size_t N = A.size();

    auto kernel_of = [&](const Eigen::MatrixXcd& a) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
        if (svd.singularValues()(m - 1) < sv_floor)
            throw RankDrop("singular value " + std::to_string(svd.singularValues()(m - 1)) +
                           " below floor");
        return static_cast<Eigen::MatrixXcd>(svd.matrixV().rightCols(q));
    };
    // orthonormalize with a deterministic phase convention
    auto orthonormalize = [&](const Eigen::MatrixXcd& K) {
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(K);
        Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(p, q);
        Eigen::MatrixXcd R = qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
        for (long j = 0; j < q; ++j) {
            cplx d = R(j, j);
            if (std::abs(d) < 1e-14) throw RankDrop("kernel frame degenerated during propagation");
            Q.col(j) *= d / std::abs(d);
        }
        return Q;
    };

    std::vector<Eigen::MatrixXcd> right(N), kernels(N);
    for (size_t k = 0; k < N; ++k) {
        const auto& a = A[k];
        right[k] = a.adjoint() * (a * a.adjoint()).inverse();
    }
    kernels[0] = kernel_of(A[0]);
    for (size_t k = 1; k < N; ++k) {
        // project the previous frame onto ker A_k and re-orthonormalize
        Eigen::MatrixXcd proj =
            kernels[k - 1] - right[k] * (A[k] * kernels[k - 1]);
        kernels[k] = orthonormalize(proj);
    }

    FrameCompletion out;
    if (closed && N > 1) {
        Eigen::MatrixXcd wrap =
            orthonormalize(kernels[N - 1] - right[0] * (A[0] * kernels[N - 1]));
        Eigen::MatrixXcd M = kernels[0].adjoint() * wrap;  // holonomy in the kernel bundle
        double defect = (M - Eigen::MatrixXcd::Identity(q, q)).norm();
        out.holonomy_repair = defect;
        if (defect > holonomy_cap)
            throw HolonomyMismatch("loop holonomy defect " + std::to_string(defect) +
                                   " too large to repair");
        if (defect > 1e-14) {
            // distribute the inverse twist along the loop
            for (size_t k = 0; k < N; ++k) {
                double s = static_cast<double>(k) / static_cast<double>(N);
                Eigen::MatrixXcd tw = M.pow(-s);
                kernels[k] = kernels[k] * tw;
            }
        }
    }

    out.B.resize(N);
    out.inverse.resize(N);
    for (size_t k = 0; k < N; ++k) {
        Eigen::MatrixXcd B(p, p);
        B.leftCols(m) = right[k];
        B.rightCols(q) = kernels[k];
        out.B[k] = B;
        out.inverse[k] = B.inverse();
        Eigen::MatrixXcd target(m, p);
        target.setZero();
        target.leftCols(m).setIdentity();
        out.identity_defect =
            std::max(out.identity_defect, (A[k] * B - target).cwiseAbs().maxCoeff());
        if (k > 0)
            out.lipschitz = std::max(out.lipschitz, (out.B[k] - out.B[k - 1]).norm());
    }
    return out;
}

ArensResult arens_identity(const std::vector<std::function<cplx(cplx)>>& f,
                           const std::vector<cplx>& samples, const std::vector<cplx>& anchors,
                           const FitConfig& cfg, double floor) {
    const size_t m = f.size();
    if (m == 0 || samples.empty()) throw Error("arens_identity: empty input");
    std::vector<std::vector<cplx>> fv(m, std::vector<cplx>(samples.size()));
    std::vector<double> denom(samples.size(), 0.0);
    for (size_t k = 0; k < samples.size(); ++k) {
        for (size_t i = 0; i < m; ++i) {
            fv[i][k] = f[i](samples[k]);
            denom[k] += std::norm(fv[i][k]);
        }
        if (denom[k] < floor * floor)
            throw CommonZero("input functions nearly vanish simultaneously at sample " +
                             std::to_string(k));
    }

    ArensResult out;
    for (size_t i = 0; i < m; ++i) {
        std::vector<cplx> target(samples.size());
        for (size_t k = 0; k < samples.size(); ++k)
            target[k] = std::conj(fv[i][k]) / denom[k];  // smooth solution
        FitResult fit = holomorphic_approximate(samples, target, {}, anchors, cfg);
        out.g_tilde.push_back(std::move(fit.fn));
    }

    out.h_min = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < samples.size(); ++k) {
        cplx h = 0;
        for (size_t i = 0; i < m; ++i) h += fv[i][k] * out.g_tilde[i].eval(samples[k]);
        out.h_min = std::min(out.h_min, std::abs(h));
    }
    if (out.h_min < 0.1)
        throw ApproximationFailure("normalizing function nearly vanishes (min " +
                                   std::to_string(out.h_min) + "); refine the approximation");

    auto fs = f;  // captured copies
    auto gt = out.g_tilde;
    for (size_t i = 0; i < m; ++i) {
        out.G.push_back([i, fs, gt](cplx z) {
            cplx h = 0;
            for (size_t j = 0; j < fs.size(); ++j) h += fs[j](z) * gt[j].eval(z);
            return gt[i].eval(z) / h;
        });
    }
    for (size_t k = 0; k < samples.size(); ++k) {
        cplx s = 0;
        for (size_t i = 0; i < m; ++i) s += fv[i][k] * out.G[i](samples[k]);
        out.identity_residual = std::max(out.identity_residual, std::abs(s - 1.0));
    }
    return out;
}

TubeExtension tube_extension(const std::vector<Eigen::VectorXcd>& f,
                             const std::vector<Eigen::VectorXcd>& dfV, bool closed,
                             double floor) {
    if (f.size() != dfV.size() || f.empty()) throw Error("tube_extension: sample mismatch");
    const long p = f[0].size();
    std::vector<Eigen::MatrixXcd> A(f.size());
    for (size_t k = 0; k < f.size(); ++k) A[k] = dfV[k].transpose();
    FrameCompletion fc = matrix_completion(A, closed, floor);

    TubeExtension out;
    out.base = f;
    out.min_rank_sv = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < f.size(); ++k) {
        out.frame.push_back(fc.B[k].rightCols(p - 1));
        Eigen::MatrixXcd J(p, p);
        J.col(0) = dfV[k];
        J.rightCols(p - 1) = out.frame.back();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
        out.min_rank_sv = std::min(out.min_rank_sv, svd.singularValues()(p - 1));
    }
    if (out.min_rank_sv < floor) throw RankDrop("tube extension frame is degenerate");
    return out;
}

namespace {

// pick an ordered closed-or-open traversal of S for sampled constructions
const PiecewiseCurve& traversal_of(const AdmissibleSet& S) {
    if (!S.islands.empty()) return S.islands[0].outer;
    if (!S.arcs.empty()) return S.arcs[0].curve;
    throw Error("empty admissible set");
}

}  // namespace

NormalFormResult normal_form(const ContactForm& beta, const AdmissibleSet& S, int nsamples,
                             double contact_threshold) {
    const int n = beta.n;
    const int nf = 2 * n;  // fiber dimension
    const PiecewiseCurve& trav = traversal_of(S);
    const bool closed = trav.closed;

    NormalFormResult out;
    out.smoothness_class = beta.smoothness_class - 2;

    std::vector<cplx> zs(static_cast<size_t>(nsamples)), dzs(static_cast<size_t>(nsamples));
    for (int k = 0; k < nsamples; ++k) {
        double s = closed ? static_cast<double>(k) / nsamples
                          : static_cast<double>(k) / (nsamples - 1);
        zs[static_cast<size_t>(k)] = trav.eval(s);
        dzs[static_cast<size_t>(k)] = trav.deriv(s);
    }

    // preconditions: contact, Legendrian axis
    ContactGrid grid;
    grid.base_points.assign(zs.begin(), zs.end());
    grid.fiber_radius = 0.5 * beta.rho;
    contact_check(beta, grid, contact_threshold);

    std::vector<cplx> vars(static_cast<size_t>(beta.dim()), 0.0);
    double axis = 0;
    for (const auto& z : zs) {
        vars[0] = z;
        std::fill(vars.begin() + 1, vars.end(), cplx(0.0));
        axis = std::max(axis, std::abs(beta.coeff(0, vars)));
    }
    if (axis > 1e-9)
        throw NotLegendrianAxis("dz coefficient on the zero section has modulus " +
                                std::to_string(axis));

    // step 1: complete the fiber coefficient vector on the axis to GL_{2n}
    std::vector<Eigen::MatrixXcd> A1(zs.size());
    for (size_t k = 0; k < zs.size(); ++k) {
        vars[0] = zs[k];
        std::fill(vars.begin() + 1, vars.end(), cplx(0.0));
        Eigen::MatrixXcd row(1, nf);
        for (int j = 0; j < nf; ++j) row(0, j) = beta.coeff(j + 1, vars);
        A1[k] = row;
    }
    FrameCompletion step1 = matrix_completion(A1, closed);

    // Rescale the completed dw column so its dominant entry is 1; a scalar
    // multiple of the standard form then keeps the identity change, and the
    // divisor h shows up as the dw coefficient instead of being normalized away.
    {
        Eigen::VectorXd mag = Eigen::VectorXd::Zero(nf);
        for (size_t k = 0; k < zs.size(); ++k) mag += step1.B[k].col(0).cwiseAbs();
        int jstar = 0;
        mag.maxCoeff(&jstar);
        for (size_t k = 0; k < zs.size(); ++k) {
            cplx scale = step1.B[k](jstar, 0);
            if (std::abs(scale) < 1e-12)
                throw CommonZero("dw coefficient direction degenerates along the traversal");
            step1.B[k].col(0) /= scale;
        }
    }

    // linearization b_j of the dz coefficient (divided by h) in step-1 coordinates
    auto T1_prime = [&](size_t k) {
        size_t kp = (k + 1 < zs.size()) ? k + 1 : (closed ? 0 : k);
        size_t km = (k > 0) ? k - 1 : (closed ? zs.size() - 1 : 0);
        cplx dz = zs[kp] - zs[km];
        if (std::abs(dz) < 1e-300) return Eigen::MatrixXcd::Zero(nf, nf).eval();
        return ((step1.B[kp] - step1.B[km]) / dz).eval();
    };
    std::vector<Eigen::VectorXcd> bvec(zs.size());
    for (size_t k = 0; k < zs.size(); ++k) {
        vars[0] = zs[k];
        std::fill(vars.begin() + 1, vars.end(), cplx(0.0));
        Eigen::VectorXcd grad(nf), cf(nf);
        for (int j = 0; j < nf; ++j) {
            grad(j) = beta.coeff_partial(0, j + 1, vars);
            cf(j) = beta.coeff(j + 1, vars);
        }
        Eigen::MatrixXcd t1p = T1_prime(k);
        Eigen::VectorXcd b = step1.B[k].transpose() * grad + t1p.transpose() * cf;
        cplx hk = (step1.B[k].col(0).array() * cf.array()).sum();  // divisor at this sample
        bvec[k] = b / hk;
    }

    // step 2: complete (b_y, b_zeta) so the dz coefficient becomes -y
    std::vector<Eigen::MatrixXcd> A2(zs.size());
    double bmin = std::numeric_limits<double>::infinity(), bw = 0;
    for (size_t k = 0; k < zs.size(); ++k) {
        Eigen::MatrixXcd row(1, nf - 1);
        for (int j = 1; j < nf; ++j) row(0, j - 1) = bvec[k](j);
        bmin = std::min(bmin, row.cwiseAbs().maxCoeff());
        bw = std::max(bw, std::abs(bvec[k](0)));
        A2[k] = row;
    }
    if (bmin < 1e-8)
        throw CommonZero("dz linearization vanishes along the traversal (contact failure)");
    FrameCompletion step2;
    if (nf - 1 == 1) {
        // scalar case: Q = 1/b directly
        step2.B.resize(zs.size());
        for (size_t k = 0; k < zs.size(); ++k)
            step2.B[k] = Eigen::MatrixXcd::Constant(1, 1, 1.0 / A2[k](0, 0));
    } else {
        step2 = matrix_completion(A2, closed);
    }

    // combined fiber change: zeta_old = M(k) * zeta_new
    out.change.resize(zs.size());
    out.h.resize(zs.size());
    for (size_t k = 0; k < zs.size(); ++k) {
        Eigen::MatrixXcd T2 = Eigen::MatrixXcd::Identity(nf, nf);
        Eigen::MatrixXcd Q = step2.B[k];  // (nf-1) square, b' * Q = (1, 0, ..)
        Eigen::MatrixXcd D = Eigen::MatrixXcd::Identity(nf - 1, nf - 1);
        D(0, 0) = -1.0;  // dz coefficient must come out as -y
        T2.bottomRightCorner(nf - 1, nf - 1) = Q * D;
        out.change[k] = step1.B[k] * T2;
        vars[0] = zs[k];
        std::fill(vars.begin() + 1, vars.end(), cplx(0.0));
        Eigen::VectorXcd cf(nf);
        for (int j = 0; j < nf; ++j) cf(j) = beta.coeff(j + 1, vars);
        out.h[k] = (out.change[k].transpose() * cf)(0);
    }

    // pullback evaluator of the reduced form
    auto M_prime = [this_change = out.change, zs, closed](size_t k) {
        size_t kp = (k + 1 < zs.size()) ? k + 1 : (closed ? 0 : k);
        size_t km = (k > 0) ? k - 1 : (closed ? zs.size() - 1 : 0);
        cplx dz = zs[kp] - zs[km];
        long nf2 = this_change[0].rows();
        if (std::abs(dz) < 1e-300) return Eigen::MatrixXcd::Zero(nf2, nf2).eval();
        return ((this_change[kp] - this_change[km]) / dz).eval();
    };

    ReducedFormSamples red;
    red.n = n;
    red.base_z = zs;
    red.base_dz = dzs;
    red.closed = closed;
    auto beta_copy = beta;  // shared state for the evaluator
    auto change = out.change;
    red.coeff = [beta_copy, change, zs, M_prime, nf](size_t k, int diff,
                                                     const std::vector<cplx>& zeta) -> cplx {
        Eigen::VectorXcd zh(nf);
        for (int j = 0; j < nf; ++j) zh(j) = zeta[static_cast<size_t>(j)];
        Eigen::VectorXcd zold = change[k] * zh;
        std::vector<cplx> vars(static_cast<size_t>(nf) + 1);
        vars[0] = zs[k];
        for (int j = 0; j < nf; ++j) vars[static_cast<size_t>(j) + 1] = zold(j);
        Eigen::VectorXcd cf(nf);
        for (int j = 0; j < nf; ++j) cf(j) = beta_copy.coeff(j + 1, vars);
        // divisor: the dw coefficient in new coordinates at this fiber point
        Eigen::VectorXcd newf = change[k].transpose() * cf;
        cplx h = newf(0);
        if (diff == 0) {
            Eigen::VectorXcd shift = M_prime(k) * zh;
            cplx inner = (cf.array() * shift.array()).sum();
            return (beta_copy.coeff(0, vars) + inner) / h;
        }
        return newf(diff - 1) / h;
    };
    out.reduced = std::move(red);

    // remainder magnitudes near the axis, bucketed by leading monomial
    double probe = 0.3 * beta.rho;
    std::vector<cplx> zeta(static_cast<size_t>(nf), 0.0);
    double o_dw = 0, o_dz2 = 0, cross = 0;
    for (size_t k = 0; k < zs.size(); k += std::max<size_t>(1, zs.size() / 32)) {
        for (int j = 0; j < nf; ++j) {
            std::fill(zeta.begin(), zeta.end(), cplx(0.0));
            zeta[static_cast<size_t>(j)] = probe;
            o_dw = std::max(o_dw, std::abs(out.reduced.coeff(k, 1, zeta) - 1.0));
            cplx cdz = out.reduced.coeff(k, 0, zeta);
            cplx lin = (j == 1) ? -probe : cplx(0.0);
            o_dz2 = std::max(o_dz2, std::abs(cdz - lin));
            for (int d = 2; d <= nf; ++d)
                if (d != 2 || j != 1)
                    cross = std::max(cross, std::abs(out.reduced.coeff(k, d, zeta)));
        }
    }
    out.residual_terms["O(zeta)_dw"] = o_dw;
    out.residual_terms["O(zeta^2)_dz"] = o_dz2;
    out.residual_terms["zeta_cross"] = cross;
    out.residual_terms["dz_w_linear"] = bw;

    // axis defect of the reduced form
    std::fill(zeta.begin(), zeta.end(), cplx(0.0));
    for (size_t k = 0; k < zs.size(); ++k) {
        out.axis_defect = std::max(out.axis_defect, std::abs(out.reduced.coeff(k, 1, zeta) - 1.0));
        out.axis_defect = std::max(out.axis_defect, std::abs(out.reduced.coeff(k, 0, zeta)));
        for (int d = 2; d <= nf; ++d)
            out.axis_defect = std::max(out.axis_defect, std::abs(out.reduced.coeff(k, d, zeta)));
    }
    return out;
}

}  // namespace legtk
