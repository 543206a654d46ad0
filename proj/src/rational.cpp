#include "legtk/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace legtk {

namespace {

// Gauss-Legendre nodes/weights on [0,1]
constexpr double GL5_X[5] = {0.046910077030668, 0.230765344947158, 0.5,
                             0.769234655052841, 0.953089922969332};
constexpr double GL5_W[5] = {0.118463442528095, 0.239314335249683, 0.284444444444444,
                             0.239314335249683, 0.118463442528095};
constexpr double GL3_X[3] = {0.112701665379258, 0.5, 0.887298334620742};
constexpr double GL3_W[3] = {0.277777777777778, 0.444444444444444, 0.277777777777778};

}  // namespace

cplx RationalFunction::eval(cplx z) const {
    cplx u = (z - center) / scale;
    cplx acc = 0;
    for (size_t k = poly.size(); k-- > 0;) acc = acc * u + poly[k];
    for (const auto& g : poles) {
        cplx inv = 1.0 / (z - g.anchor);
        cplx pw = inv;
        for (const auto& c : g.coeffs) {
            acc += c * pw;
            pw *= inv;
        }
    }
    return acc;
}

cplx RationalFunction::deriv(cplx z) const {
    cplx u = (z - center) / scale;
    cplx acc = 0;
    for (size_t k = poly.size(); k-- > 1;) acc = acc * u + static_cast<double>(k) * poly[k];
    acc /= scale;
    for (const auto& g : poles) {
        cplx inv = 1.0 / (z - g.anchor);
        cplx pw = inv * inv;
        for (size_t k = 0; k < g.coeffs.size(); ++k) {
            acc -= static_cast<double>(k + 1) * g.coeffs[k] * pw;
            pw *= inv;
        }
    }
    return acc;
}

RationalFunction RationalFunction::derivative() const {
    RationalFunction d;
    d.center = center;
    d.scale = scale;
    if (poly.size() > 1) {
        d.poly.resize(poly.size() - 1);
        for (size_t k = 1; k < poly.size(); ++k)
            d.poly[k - 1] = static_cast<double>(k) * poly[k] / scale;
    }
    for (const auto& g : poles) {
        PoleGroup dg{g.anchor, std::vector<cplx>(g.coeffs.size() + 1, 0.0)};
        for (size_t k = 0; k < g.coeffs.size(); ++k)
            dg.coeffs[k + 1] = -static_cast<double>(k + 1) * g.coeffs[k];
        d.poles.push_back(std::move(dg));
    }
    return d;
}

RationalFunction RationalFunction::primitive(double residue_tol) const {
    RationalFunction p;
    p.center = center;
    p.scale = scale;
    p.poly.resize(poly.size() + 1, 0.0);
    for (size_t k = 0; k < poly.size(); ++k)
        p.poly[k + 1] = poly[k] * scale / static_cast<double>(k + 1);
    for (const auto& g : poles) {
        if (!g.coeffs.empty() && std::abs(g.coeffs[0]) > residue_tol)
            throw ApproximationFailure("primitive requested but residue at pole is nonzero: |" +
                                       std::to_string(std::abs(g.coeffs[0])) + "|");
        if (g.coeffs.size() < 2) continue;
        PoleGroup pg{g.anchor, std::vector<cplx>(g.coeffs.size() - 1, 0.0)};
        for (size_t k = 1; k < g.coeffs.size(); ++k)
            pg.coeffs[k - 1] = -g.coeffs[k] / static_cast<double>(k);
        p.poles.push_back(std::move(pg));
    }
    return p;
}

double RationalFunction::min_pole_distance(const std::vector<cplx>& pts) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& g : poles)
        for (const auto& p : pts) d = std::min(d, std::abs(p - g.anchor));
    return d;
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& other) {
    // polynomial parts must share the frame unless one of them is trivial
    if (poly.empty() || (center == other.center && scale == other.scale)) {
        if (poly.empty()) {
            center = other.center;
            scale = other.scale;
        }
        if (other.poly.size() > poly.size()) poly.resize(other.poly.size(), 0.0);
        for (size_t k = 0; k < other.poly.size(); ++k) poly[k] += other.poly[k];
    } else if (!other.poly.empty()) {
        throw Error("cannot add rational functions with mismatched polynomial frames");
    }
    for (const auto& g : other.poles) {
        bool merged = false;
        for (auto& mine : poles) {
            if (std::abs(mine.anchor - g.anchor) < 1e-8 * (1.0 + std::abs(mine.anchor))) {
                if (g.coeffs.size() > mine.coeffs.size()) mine.coeffs.resize(g.coeffs.size(), 0.0);
                for (size_t k = 0; k < g.coeffs.size(); ++k) mine.coeffs[k] += g.coeffs[k];
                merged = true;
                break;
            }
        }
        if (!merged) poles.push_back(g);
    }
    return *this;
}

RationalFunction& RationalFunction::operator*=(cplx a) {
    for (auto& c : poly) c *= a;
    for (auto& g : poles)
        for (auto& c : g.coeffs) c *= a;
    return *this;
}

RationalFunction operator*(cplx a, RationalFunction f) {
    f *= a;
    return f;
}

RationalFunction operator+(RationalFunction a, const RationalFunction& b) {
    a += b;
    return a;
}

cplx contour_integral(const std::function<cplx(cplx)>& f, const CurveSamples& cycle,
                      double* error_estimate) {
    if (!cycle.source) {
        // fallback trapezoid on the stored samples
        cplx acc = 0, mid = 0;
        size_t n = cycle.dz.size();
        for (size_t k = 0; k < n; ++k) {
            cplx a = cycle.points[k];
            cplx b = cycle.points[(k + 1) % cycle.points.size()];
            acc += 0.5 * (f(a) + f(b)) * cycle.dz[k];
            mid += f(0.5 * (a + b)) * cycle.dz[k];
        }
        if (error_estimate) *error_estimate = std::abs(acc - mid);
        return (2.0 * mid + acc) / 3.0;  // Simpson combination
    }
    const PiecewiseCurve& c = *cycle.source;
    size_t n = cycle.dz.size();
    cplx i5 = 0, i3 = 0;
    for (size_t k = 0; k < n; ++k) {
        double s0 = cycle.params[k];
        double s1 = (k + 1 < cycle.params.size()) ? cycle.params[k + 1] : cycle.params[0] + 1.0;
        double ds = s1 - s0;
        for (int q = 0; q < 5; ++q) {
            double s = s0 + ds * GL5_X[q];
            if (s >= 1.0 && cycle.closed) s -= 1.0;
            i5 += GL5_W[q] * ds * f(c.eval(s)) * c.deriv(s);
        }
        for (int q = 0; q < 3; ++q) {
            double s = s0 + ds * GL3_X[q];
            if (s >= 1.0 && cycle.closed) s -= 1.0;
            i3 += GL3_W[q] * ds * f(c.eval(s)) * c.deriv(s);
        }
    }
    if (error_estimate) *error_estimate = std::abs(i5 - i3);
    return i5;
}

cplx contour_integral(const RationalFunction& f, const CurveSamples& cycle,
                      double* error_estimate, double exclusion_radius) {
    if (f.min_pole_distance(cycle.points) < exclusion_radius)
        throw PoleOnPath("pole within exclusion radius of integration path");
    return contour_integral([&f](cplx z) { return f.eval(z); }, cycle, error_estimate);
}

Spray build_spray(const std::vector<SprayMember>& members, const std::vector<cplx>& anchors,
                  const SprayConfig& cfg) {
    const int l = static_cast<int>(members.size());
    if (l == 0) return Spray{{}, Eigen::MatrixXcd(0, 0), 0.0};

    // geometry frame for the polynomial candidates
    cplx ctr = 0;
    double scl = 0;
    size_t npts = 0;
    for (const auto& m : members) {
        for (const auto& p : m.samples.points) ctr += p;
        npts += m.samples.points.size();
    }
    ctr /= static_cast<double>(npts);
    for (const auto& m : members)
        for (const auto& p : m.samples.points) scl = std::max(scl, std::abs(p - ctr));
    if (scl == 0) scl = 1.0;

    bool any_cycle = false;
    for (const auto& m : members) any_cycle = any_cycle || m.is_cycle;
    if (any_cycle && anchors.empty())
        throw MissingAnchor("cycles present but no hole anchors supplied");

    // candidates: simple poles at the anchors, then low-degree polynomials
    const cplx two_pi_i(0.0, 2.0 * M_PI);
    std::vector<RationalFunction> cand;
    for (const auto& a : anchors) {
        RationalFunction r;
        r.poles.push_back({a, {1.0 / two_pi_i}});
        cand.push_back(std::move(r));
    }
    for (int k = 0; static_cast<int>(cand.size()) < l + 2 && k <= l + 2; ++k) {
        RationalFunction r;
        r.center = ctr;
        r.scale = scl;
        r.poly.assign(static_cast<size_t>(k) + 1, 0.0);
        r.poly.back() = 1.0;
        cand.push_back(std::move(r));
    }

    // raw functional matrix M(i, j) = integral of candidate j over member i
    const int nc = static_cast<int>(cand.size());
    Eigen::MatrixXcd M(l, nc);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < nc; ++j) M(i, j) = contour_integral(cand[j], members[static_cast<size_t>(i)].samples);

    // choose l well-conditioned columns
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(M);
    if (qr.rank() < l) throw SingularPeriodMatrix("candidate functionals do not separate the members");
    std::vector<int> cols;
    for (int k = 0; k < l; ++k) cols.push_back(qr.colsPermutation().indices()(k));
    std::sort(cols.begin(), cols.end());
    Eigen::MatrixXcd Msel(l, l);
    for (int j = 0; j < l; ++j) Msel.col(j) = M.col(cols[static_cast<size_t>(j)]);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Msel);
    double cnd = svd.singularValues()(0) / svd.singularValues()(l - 1);
    if (!std::isfinite(cnd) || cnd > cfg.condition_cap)
        throw SingularPeriodMatrix("raw period matrix condition " + std::to_string(cnd) +
                                   " exceeds cap");

    Eigen::MatrixXcd C = Msel.inverse();  // xi_j = sum_k C(k, j) * cand[cols[k]]

    Spray spray;
    for (int j = 0; j < l; ++j) {
        RationalFunction xi;
        for (int k = 0; k < l; ++k) {
            RationalFunction term = cand[static_cast<size_t>(cols[static_cast<size_t>(k)])];
            term *= C(k, j);
            xi += term;
        }
        spray.xi.push_back(std::move(xi));
    }

    // measure the final matrix independently
    spray.period_matrix.resize(l, l);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j)
            spray.period_matrix(i, j) =
                contour_integral(spray.xi[static_cast<size_t>(j)], members[static_cast<size_t>(i)].samples);
    spray.defect = (spray.period_matrix - Eigen::MatrixXcd::Identity(l, l)).cwiseAbs().maxCoeff();
    if (spray.defect > cfg.identity_tol)
        throw SingularPeriodMatrix("normalized period matrix defect " +
                                   std::to_string(spray.defect) + " exceeds tolerance");
    return spray;
}

FitResult holomorphic_approximate(const std::vector<cplx>& points,
                                  const std::vector<cplx>& values,
                                  const std::vector<cplx>& deriv_values,
                                  const std::vector<cplx>& anchors, const FitConfig& cfg) {
    if (points.empty() || points.size() != values.size())
        throw Error("holomorphic_approximate: points/values size mismatch");
    const bool with_deriv = !deriv_values.empty();
    if (with_deriv && deriv_values.size() != points.size())
        throw Error("holomorphic_approximate: derivative sample size mismatch");

    cplx ctr = 0;
    for (const auto& p : points) ctr += p;
    ctr /= static_cast<double>(points.size());
    double scl = 0;
    for (const auto& p : points) scl = std::max(scl, std::abs(p - ctr));
    if (scl == 0) scl = 1.0;

    // basis columns: u^k, then (z - a_j)^{-k} scaled by dist_j^k
    struct Basis {
        int kind;  // 0 = poly, 1 = pole
        int degree;
        int anchor;
        double colscale;
    };
    std::vector<Basis> basis;
    for (int k = 0; k <= cfg.poly_degree; ++k) basis.push_back({0, k, -1, 1.0});
    std::vector<double> adist(anchors.size(), 1.0);
    for (size_t j = 0; j < anchors.size(); ++j) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& p : points) d = std::min(d, std::abs(p - anchors[j]));
        adist[j] = std::max(d, 1e-12);
        for (int k = 1; k <= cfg.pole_order; ++k)
            basis.push_back({1, k, static_cast<int>(j), std::pow(adist[j], k)});
    }

    auto eval_basis = [&](const Basis& b, cplx z, cplx& val, cplx& dval) {
        if (b.kind == 0) {
            cplx u = (z - ctr) / scl;
            val = std::pow(u, b.degree);
            dval = (b.degree == 0) ? cplx(0.0) : static_cast<double>(b.degree) *
                                                     std::pow(u, b.degree - 1) / scl;
        } else {
            cplx inv = 1.0 / (z - anchors[static_cast<size_t>(b.anchor)]);
            val = std::pow(inv, b.degree) * b.colscale;
            dval = -static_cast<double>(b.degree) * std::pow(inv, b.degree + 1) * b.colscale;
        }
    };

    const int rows = static_cast<int>(points.size()) * (with_deriv ? 2 : 1);
    const int ncols = static_cast<int>(basis.size());
    Eigen::MatrixXcd A(rows, ncols);
    Eigen::VectorXcd rhs(rows);
    const int np = static_cast<int>(points.size());
    const double dw = cfg.derivative_weight * scl;  // balance derivative rows
#pragma omp parallel for schedule(static) if (cfg.exec == Exec::Parallel)
    for (int i = 0; i < np; ++i) {
        for (int j = 0; j < ncols; ++j) {
            cplx v, d;
            eval_basis(basis[static_cast<size_t>(j)], points[static_cast<size_t>(i)], v, d);
            A(i, j) = v;
            if (with_deriv) A(np + i, j) = dw * d;
        }
        rhs(i) = values[static_cast<size_t>(i)];
        if (with_deriv) rhs(np + i) = dw * deriv_values[static_cast<size_t>(i)];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    double cnd = std::abs(qr.matrixR()(0, 0)) /
                 std::max(std::abs(qr.matrixR()(qr.rank() - 1, qr.rank() - 1)), 1e-300);
    if (cnd > cfg.condition_cap)
        throw IllConditioned("fit condition estimate " + std::to_string(cnd) + " exceeds cap");
    Eigen::VectorXcd x = qr.solve(rhs);

    FitResult out;
    out.condition = cnd;
    out.fn.center = ctr;
    out.fn.scale = scl;
    out.fn.poly.assign(static_cast<size_t>(cfg.poly_degree) + 1, 0.0);
    for (size_t j = 0; j < anchors.size(); ++j)
        out.fn.poles.push_back({anchors[j], std::vector<cplx>(static_cast<size_t>(cfg.pole_order), 0.0)});
    for (int j = 0; j < ncols; ++j) {
        const Basis& b = basis[static_cast<size_t>(j)];
        if (b.kind == 0)
            out.fn.poly[static_cast<size_t>(b.degree)] = x(j);
        else
            out.fn.poles[static_cast<size_t>(b.anchor)].coeffs[static_cast<size_t>(b.degree - 1)] =
                x(j) * b.colscale;
    }
    for (int i = 0; i < np; ++i) {
        out.value_residual = std::max(
            out.value_residual,
            std::abs(out.fn.eval(points[static_cast<size_t>(i)]) - values[static_cast<size_t>(i)]));
        if (with_deriv)
            out.deriv_residual =
                std::max(out.deriv_residual, std::abs(out.fn.deriv(points[static_cast<size_t>(i)]) -
                                                      deriv_values[static_cast<size_t>(i)]));
    }
    return out;
}

}  // namespace legtk
