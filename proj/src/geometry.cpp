#include "legtk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace legtk {

namespace {

constexpr double kPi = std::numbers::pi;

// 5-point Gauss-Legendre nodes/weights on [0,1]
constexpr double kGlNode[5] = {0.04691007703066800, 0.23076534494715845, 0.5,
                               0.76923465505284155, 0.95308992296933200};
constexpr double kGlWeight[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                                 0.23931433524968324, 0.11846344252809454};

double segment_distance(cplx p, cplx a, cplx b) {
    cplx ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

}  // namespace

// ---------------------------------------------------------------------------
// CurvePiece

cplx CurvePiece::eval(double s) const {
    const size_t m = points.size();
    if (m == 1) return points[0];
    double u = std::clamp(s, 0.0, 1.0) * static_cast<double>(m - 1);
    size_t k = std::min(static_cast<size_t>(u), m - 2);
    double t = u - static_cast<double>(k);
    double h = 1.0 / static_cast<double>(m - 1);
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * points[k] + h10 * h * tangents[k] + h01 * points[k + 1] +
           h11 * h * tangents[k + 1];
}

cplx CurvePiece::deriv(double s) const {
    const size_t m = points.size();
    if (m == 1) return {};
    double u = std::clamp(s, 0.0, 1.0) * static_cast<double>(m - 1);
    size_t k = std::min(static_cast<size_t>(u), m - 2);
    double t = u - static_cast<double>(k);
    double h = 1.0 / static_cast<double>(m - 1);
    double t2 = t * t;
    double d00 = 6 * t2 - 6 * t, d10 = 3 * t2 - 4 * t + 1;
    double d01 = -6 * t2 + 6 * t, d11 = 3 * t2 - 2 * t;
    // derivative with respect to the piece parameter s in [0,1]
    return (d00 * points[k] + d10 * h * tangents[k] + d01 * points[k + 1] +
            d11 * h * tangents[k + 1]) /
           h;
}

double CurvePiece::min_tangent_modulus() const {
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& t : tangents) mn = std::min(mn, std::abs(t));
    return mn;
}

// ---------------------------------------------------------------------------
// PiecewiseCurve

void PiecewiseCurve::finalize() {
    total_length_ = 0;
    cumlen_.assign(pieces.size(), {});
    dense_.clear();
    for (size_t p = 0; p < pieces.size(); ++p) {
        const auto& piece = pieces[p];
        const size_t m = piece.points.size();
        auto& cl = cumlen_[p];
        cl.assign(std::max<size_t>(m, 2) - 1, 0.0);
        double acc = 0;
        for (size_t k = 0; k + 1 < m; ++k) {
            double s0 = static_cast<double>(k) / static_cast<double>(m - 1);
            double ds = 1.0 / static_cast<double>(m - 1);
            double len = 0;
            for (int g = 0; g < 5; ++g)
                len += kGlWeight[g] * std::abs(piece.deriv(s0 + kGlNode[g] * ds)) * ds;
            acc += len;
            cl[k] = acc;
        }
        if (m == 1) cl.assign(1, 0.0);
        total_length_ += acc;
        for (size_t k = 0; k + 1 < m; ++k) {
            dense_.push_back(piece.points[k]);
            dense_.push_back(piece.eval((static_cast<double>(k) + 0.5) /
                                        static_cast<double>(m - 1)));
        }
        dense_.push_back(piece.points.back());
    }
    piece_break_.assign(pieces.size() + 1, 0.0);
    double acc = 0;
    for (size_t p = 0; p < pieces.size(); ++p) {
        acc += cumlen_[p].empty() ? 0.0 : cumlen_[p].back();
        piece_break_[p + 1] = total_length_ > 0 ? acc / total_length_ : 1.0;
    }
    piece_break_.back() = 1.0;
    finalized_ = true;
}

std::pair<int, double> PiecewiseCurve::locate(double s) const {
    s = std::clamp(s, 0.0, 1.0);
    size_t p = static_cast<size_t>(
                   std::upper_bound(piece_break_.begin(), piece_break_.end(), s) -
                   piece_break_.begin());
    p = std::min(std::max<size_t>(p, 1), pieces.size()) - 1;
    double lo = piece_break_[p], hi = piece_break_[p + 1];
    double arc = (hi > lo) ? (s - lo) / (hi - lo) : 0.0;  // arclength fraction within piece
    const auto& cl = cumlen_[p];
    double target = arc * cl.back();
    size_t k = static_cast<size_t>(std::lower_bound(cl.begin(), cl.end(), target) - cl.begin());
    k = std::min(k, cl.size() - 1);
    double prev = (k == 0) ? 0.0 : cl[k - 1];
    double seg = cl[k] - prev;
    double frac = (seg > 0) ? (target - prev) / seg : 0.0;
    double m1 = static_cast<double>(std::max<size_t>(pieces[p].points.size(), 2) - 1);
    return {static_cast<int>(p), (static_cast<double>(k) + frac) / m1};
}

cplx PiecewiseCurve::eval(double s) const {
    auto [p, u] = locate(s);
    return pieces[static_cast<size_t>(p)].eval(u);
}

cplx PiecewiseCurve::deriv(double s) const {
    auto [p, u] = locate(s);
    const auto& piece = pieces[static_cast<size_t>(p)];
    const auto& cl = cumlen_[static_cast<size_t>(p)];
    double m1 = static_cast<double>(std::max<size_t>(piece.points.size(), 2) - 1);
    size_t k = std::min(static_cast<size_t>(u * m1), cl.size() - 1);
    double prev = (k == 0) ? 0.0 : cl[k - 1];
    double seg = cl[k] - prev;
    // chain rule through the piecewise-linear arclength reparameterization
    double du_ds = (seg > 0) ? total_length_ / (seg * m1) : 0.0;
    return piece.deriv(u) * du_ds;
}

PiecewiseCurve PiecewiseCurve::reversed() const {
    PiecewiseCurve r;
    r.closed = closed;
    r.orientation = -orientation;
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
        CurvePiece p;
        p.points.assign(it->points.rbegin(), it->points.rend());
        for (auto t = it->tangents.rbegin(); t != it->tangents.rend(); ++t)
            p.tangents.push_back(-*t);
        r.pieces.push_back(std::move(p));
    }
    r.finalize();
    return r;
}

double PiecewiseCurve::min_tangent_modulus() const {
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces) mn = std::min(mn, p.min_tangent_modulus());
    return mn;
}

void PiecewiseCurve::validate(double endpoint_tol) const {
    if (pieces.empty()) throw ValidationError("curve has no pieces");
    for (size_t p = 0; p + 1 < pieces.size(); ++p)
        if (std::abs(pieces[p].points.back() - pieces[p + 1].points.front()) > endpoint_tol)
            throw ValidationError("adjacent curve pieces do not share endpoints");
    if (closed && std::abs(pieces.back().points.back() - pieces.front().points.front()) >
                      endpoint_tol)
        throw ValidationError("closed curve endpoints do not match");
    if (!(min_tangent_modulus() > 0))
        throw ValidationError("curve piece is not an immersion (vanishing tangent)");
}

PiecewiseCurve PiecewiseCurve::circle(cplx center, double radius, int orientation, int npts) {
    CurvePiece piece;
    piece.points.resize(static_cast<size_t>(npts) + 1);
    piece.tangents.resize(static_cast<size_t>(npts) + 1);
    for (int k = 0; k <= npts; ++k) {
        double th = orientation * 2.0 * kPi * k / npts;
        cplx e = std::polar(1.0, th);
        piece.points[static_cast<size_t>(k)] = center + radius * e;
        piece.tangents[static_cast<size_t>(k)] =
            cplx(0, 1) * static_cast<double>(orientation) * 2.0 * kPi * radius * e;
    }
    piece.points.back() = piece.points.front();
    PiecewiseCurve c;
    c.pieces.push_back(std::move(piece));
    c.closed = true;
    c.orientation = orientation;
    c.finalize();
    return c;
}

PiecewiseCurve PiecewiseCurve::arc(cplx center, double radius, double theta0, double theta1,
                                   int npts) {
    CurvePiece piece;
    piece.points.resize(static_cast<size_t>(npts) + 1);
    piece.tangents.resize(static_cast<size_t>(npts) + 1);
    for (int k = 0; k <= npts; ++k) {
        double th = theta0 + (theta1 - theta0) * k / npts;
        cplx e = std::polar(1.0, th);
        piece.points[static_cast<size_t>(k)] = center + radius * e;
        piece.tangents[static_cast<size_t>(k)] = cplx(0, 1) * (theta1 - theta0) * radius * e;
    }
    PiecewiseCurve c;
    c.pieces.push_back(std::move(piece));
    c.finalize();
    return c;
}

PiecewiseCurve PiecewiseCurve::segment(cplx a, cplx b) {
    CurvePiece piece;
    piece.points = {a, b};
    piece.tangents = {b - a, b - a};
    PiecewiseCurve c;
    c.pieces.push_back(std::move(piece));
    c.finalize();
    return c;
}

std::vector<double> PiecewiseCurve::smooth_breakpoints() const {
    std::vector<double> out;
    for (size_t p = 0; p < pieces.size(); ++p) {
        double lo = piece_break_[p], hi = piece_break_[p + 1];
        const auto& cl = cumlen_[p];
        if (cl.empty() || !(cl.back() > 0)) continue;
        if (p > 0) out.push_back(lo);
        for (size_t k = 0; k + 1 < cl.size(); ++k)
            out.push_back(lo + (hi - lo) * cl[k] / cl.back());
    }
    return out;
}

PiecewiseCurve PiecewiseCurve::from_polyline(const std::vector<cplx>& pts, bool closed) {
    if (pts.size() < 2) throw ValidationError("polyline needs at least two points");
    CurvePiece piece;
    piece.points = pts;
    const size_t m = pts.size();
    piece.tangents.resize(m);
    double h = 1.0 / static_cast<double>(m - 1);
    for (size_t k = 0; k < m; ++k) {
        cplx d;
        if (closed && std::abs(pts.front() - pts.back()) < 1e-14) {
            const size_t mm = m - 1;  // last point duplicates the first
            size_t prev = (k + mm - 1) % mm, next = (k + 1) % mm;
            d = (pts[next] - pts[prev]) / (2 * h);
        } else if (k == 0) {
            d = (pts[1] - pts[0]) / h;
        } else if (k == m - 1) {
            d = (pts[m - 1] - pts[m - 2]) / h;
        } else {
            d = (pts[k + 1] - pts[k - 1]) / (2 * h);
        }
        piece.tangents[k] = d;
    }
    PiecewiseCurve c;
    c.pieces.push_back(std::move(piece));
    c.closed = closed;
    c.finalize();
    return c;
}

PiecewiseCurve PiecewiseCurve::concat(const std::vector<PiecewiseCurve>& parts, bool closed) {
    PiecewiseCurve c;
    for (const auto& part : parts)
        for (const auto& piece : part.pieces) c.pieces.push_back(piece);
    c.closed = closed;
    c.finalize();
    return c;
}

// ---------------------------------------------------------------------------
// Sampling

cplx CurveSamples::sum_dz() const {
    cplx s = 0;
    for (const auto& d : dz) s += d;
    return s;
}

CurveSamples sample_curve(std::shared_ptr<const PiecewiseCurve> curve, int n) {
    const auto& c = *curve;
    const int npieces = static_cast<int>(c.pieces.size());
    if (n < 8 * npieces && !(npieces == 1 && !c.closed && n >= 2))
        throw UnderSampled("sample count " + std::to_string(n) + " below 8 per smooth piece");

    CurveSamples out;
    out.closed = c.closed;
    out.source = curve;

    if (c.closed && npieces == 1) {
        out.points.resize(static_cast<size_t>(n));
        out.params.resize(static_cast<size_t>(n));
        out.tangents.resize(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) {
            double s = static_cast<double>(k) / n;
            out.params[static_cast<size_t>(k)] = s;
            out.points[static_cast<size_t>(k)] = c.eval(s);
            out.tangents[static_cast<size_t>(k)] = c.deriv(s);
        }
    } else {
        // Piece boundaries are always sample points; counts are
        // arclength-proportional with a floor of 8 per piece.
        std::vector<double> breaks;
        double total = c.length();
        double acc = 0;
        std::vector<double> piece_fracs;
        for (const auto& piece : c.pieces) {
            PiecewiseCurve single;
            single.pieces.push_back(piece);
            single.finalize();
            acc += single.length();
            piece_fracs.push_back(total > 0 ? acc / total : 1.0);
        }
        piece_fracs.back() = 1.0;
        double lo = 0;
        for (int p = 0; p < npieces; ++p) {
            double hi = piece_fracs[static_cast<size_t>(p)];
            int np = std::max(npieces > 1 ? 8 : 1,
                              static_cast<int>(std::lround(n * (hi - lo))));
            if (npieces == 1) np = std::max(n - 1, 1);
            for (int k = 0; k < np; ++k)
                breaks.push_back(lo + (hi - lo) * k / np);
            lo = hi;
        }
        breaks.push_back(1.0);
        size_t m = breaks.size();
        if (c.closed) --m;  // last point would duplicate the first
        out.points.resize(m);
        out.params.resize(m);
        out.tangents.resize(m);
        for (size_t k = 0; k < m; ++k) {
            out.params[k] = breaks[k];
            out.points[k] = c.eval(breaks[k]);
            out.tangents[k] = c.deriv(breaks[k]);
        }
    }

    const size_t m = out.points.size();
    if (c.closed) {
        out.dz.resize(m);
        cplx acc = 0;
        for (size_t k = 0; k + 1 < m; ++k) {
            out.dz[k] = out.points[k + 1] - out.points[k];
            acc += out.dz[k];
        }
        out.dz[m - 1] = -acc;  // wraparound step; makes sum_dz() vanish exactly
    } else {
        out.dz.resize(m - 1);
        for (size_t k = 0; k + 1 < m; ++k) out.dz[k] = out.points[k + 1] - out.points[k];
    }
    if (c.closed && std::abs(out.sum_dz()) > out.closure_tol)
        throw ValidationError("closed-curve closure defect above tolerance");
    return out;
}

CurveSamples sample_curve(const PiecewiseCurve& curve, int n) {
    return sample_curve(std::make_shared<PiecewiseCurve>(curve), n);
}

// ---------------------------------------------------------------------------
// Distance and containment helpers

double point_to_polyline_distance(cplx p, const std::vector<cplx>& poly, bool closed) {
    double d = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k + 1 < poly.size(); ++k)
        d = std::min(d, segment_distance(p, poly[k], poly[k + 1]));
    if (closed && poly.size() > 2)
        d = std::min(d, segment_distance(p, poly.back(), poly.front()));
    return d;
}

bool point_in_polygon(cplx p, const std::vector<cplx>& poly) {
    bool inside = false;
    size_t n = poly.size();
    for (size_t k = 0, j = n - 1; k < n; j = k++) {
        double yi = poly[k].imag(), yj = poly[j].imag();
        double xi = poly[k].real(), xj = poly[j].real();
        if ((yi > p.imag()) != (yj > p.imag()) &&
            p.real() < (xj - xi) * (p.imag() - yi) / (yj - yi) + xi)
            inside = !inside;
    }
    return inside;
}

double polyline_min_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : a) d = std::min(d, point_to_polyline_distance(p, b, false));
    for (const auto& p : b) d = std::min(d, point_to_polyline_distance(p, a, false));
    return d;
}

// ---------------------------------------------------------------------------
// Island / AdmissibleSet

bool Island::contains(cplx p) const {
    if (!point_in_polygon(p, outer.dense_polyline())) return false;
    for (const auto& h : holes)
        if (point_in_polygon(p, h.dense_polyline())) return false;
    return true;
}

double Island::boundary_distance(cplx p) const {
    double d = point_to_polyline_distance(p, outer.dense_polyline(), true);
    for (const auto& h : holes)
        d = std::min(d, point_to_polyline_distance(p, h.dense_polyline(), true));
    return d;
}

double AdmissibleSet::distance(cplx p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& isl : islands) {
        if (isl.contains(p)) return 0.0;
        d = std::min(d, isl.boundary_distance(p));
    }
    for (const auto& arc : arcs)
        d = std::min(d, point_to_polyline_distance(p, arc.curve.dense_polyline(), false));
    return d;
}

bool AdmissibleSet::in_some_island(cplx p) const {
    for (const auto& isl : islands)
        if (isl.contains(p)) return true;
    return false;
}

namespace {

double line_angle_deg(cplx a, cplx b) {
    double s = std::abs(std::imag(std::conj(a) * b)) / (std::abs(a) * std::abs(b));
    return std::asin(std::clamp(s, 0.0, 1.0)) * 180.0 / kPi;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) {
        for (size_t k = 0; k < n; ++k) parent[k] = static_cast<int>(k);
    }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)];
        return x;
    }
    void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

// nearest parameter on a smooth curve: coarse scan then ternary refinement
std::pair<double, double> nearest_on_curve(cplx p, const PiecewiseCurve& c) {
    double best = std::numeric_limits<double>::infinity(), best_s = 0;
    for (int j = 0; j <= 512; ++j) {
        double s = static_cast<double>(j) / 512;
        double d = std::abs(c.eval(s) - p);
        if (d < best) { best = d; best_s = s; }
    }
    double lo = std::max(0.0, best_s - 1.0 / 512), hi = std::min(1.0, best_s + 1.0 / 512);
    for (int it = 0; it < 60; ++it) {
        double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (std::abs(c.eval(m1) - p) < std::abs(c.eval(m2) - p)) hi = m2;
        else lo = m1;
    }
    double s = 0.5 * (lo + hi);
    return {s, std::abs(c.eval(s) - p)};
}

double polyline_diameter(const std::vector<cplx>& pts) {
    double d = 0;
    for (size_t a = 0; a < pts.size(); ++a)
        for (size_t b = a + 1; b < pts.size(); ++b) d = std::max(d, std::abs(pts[a] - pts[b]));
    return d;
}

}  // namespace

AdmissibleSet build_admissible_set(std::vector<Island> islands, std::vector<AdmissibleArc> arcs,
                                   const SetTolerances& tol) {
    AdmissibleSet S;
    S.tol = tol;

    for (size_t i = 0; i < islands.size(); ++i) {
        auto& isl = islands[i];
        isl.outer.validate(tol.endpoint);
        if (!isl.outer.closed) throw ValidationError("island outer boundary must be closed");
        for (auto& h : isl.holes) {
            h.validate(tol.endpoint);
            if (!h.closed) throw ValidationError("island hole boundary must be closed");
            for (const auto& p : h.dense_polyline())
                if (!point_in_polygon(p, isl.outer.dense_polyline()))
                    throw ValidationError("hole boundary not inside island outer boundary");
        }
        for (size_t a = 0; a < isl.holes.size(); ++a)
            for (size_t b = a + 1; b < isl.holes.size(); ++b) {
                if (polyline_min_distance(isl.holes[a].dense_polyline(),
                                          isl.holes[b].dense_polyline()) < tol.min_separation ||
                    point_in_polygon(isl.holes[a].dense_polyline()[0],
                                     isl.holes[b].dense_polyline()) ||
                    point_in_polygon(isl.holes[b].dense_polyline()[0],
                                     isl.holes[a].dense_polyline()))
                    throw ValidationError("island holes overlap or are nested");
            }
        if (!isl.contains(isl.vertex))
            throw ValidationError("island vertex is not an interior point");
        // default anchor points: arclength-spread picks on each component
        if (isl.anchor_points.empty()) {
            auto pick = [](const PiecewiseCurve& c) {
                return std::make_pair(c.eval(0.13), c.eval(0.63));
            };
            isl.anchor_points.push_back(pick(isl.outer));
            for (const auto& h : isl.holes) isl.anchor_points.push_back(pick(h));
        }
    }

    // pairwise island disjointness (crossing boundaries put points of one
    // outer polyline inside the other polygon)
    auto boundaries_overlap = [](const Island& x, const Island& y) {
        for (const auto& p : x.outer.dense_polyline())
            if (point_in_polygon(p, y.outer.dense_polyline())) return true;
        for (const auto& p : y.outer.dense_polyline())
            if (point_in_polygon(p, x.outer.dense_polyline())) return true;
        return false;
    };
    for (size_t a = 0; a < islands.size(); ++a)
        for (size_t b = a + 1; b < islands.size(); ++b) {
            if (polyline_min_distance(islands[a].outer.dense_polyline(),
                                      islands[b].outer.dense_polyline()) < tol.min_separation ||
                boundaries_overlap(islands[a], islands[b]) ||
                islands[a].contains(islands[b].vertex) || islands[b].contains(islands[a].vertex))
                throw DisjointnessViolation("islands " + std::to_string(a) + " and " +
                                            std::to_string(b) + " intersect");
        }

    // arcs: validation, attachment, transversality, disjointness
    for (size_t k = 0; k < arcs.size(); ++k) {
        auto& arc = arcs[k];
        arc.curve.validate(tol.endpoint);
        for (int e = 0; e < 2; ++e) {
            const auto& end = arc.ends[static_cast<size_t>(e)];
            if (!end.attached) continue;
            if (end.island < 0 || end.island >= static_cast<int>(islands.size()))
                throw DanglingAttachment("arc attachment references missing island");
            const auto& isl = islands[static_cast<size_t>(end.island)];
            const PiecewiseCurve* comp = nullptr;
            if (end.boundary < 0) comp = &isl.outer;
            else if (end.boundary < static_cast<int>(isl.holes.size()))
                comp = &isl.holes[static_cast<size_t>(end.boundary)];
            else
                throw DanglingAttachment("arc attachment references missing boundary component");
            cplx endpoint = (e == 0) ? arc.curve.start() : arc.curve.end();
            auto [best_s, best] = nearest_on_curve(endpoint, *comp);
            if (best > tol.attachment)
                throw DanglingAttachment("arc endpoint not on the named boundary component");
            // transversality against the boundary tangent at the nearest point
            cplx btan = comp->deriv(best_s);
            cplx atan = (e == 0) ? arc.curve.deriv(0.0) : arc.curve.deriv(1.0);
            if (line_angle_deg(btan, atan) < tol.transversality_angle_deg)
                throw TangencyViolation("arc " + std::to_string(k) +
                                        " meets boundary non-transversely");
        }
        // arc interior stays off the islands
        const auto& poly = arc.curve.dense_polyline();
        size_t margin = std::max<size_t>(2, poly.size() / 16);
        for (size_t j = margin; j + margin < poly.size(); ++j)
            for (const auto& isl : islands)
                if (isl.contains(poly[j]))
                    throw DisjointnessViolation("arc " + std::to_string(k) +
                                                " passes through an island interior");
    }
    for (size_t a = 0; a < arcs.size(); ++a)
        for (size_t b = a + 1; b < arcs.size(); ++b)
            if (polyline_min_distance(arcs[a].curve.dense_polyline(),
                                      arcs[b].curve.dense_polyline()) < tol.min_separation)
                throw DisjointnessViolation("arcs " + std::to_string(a) + " and " +
                                            std::to_string(b) + " intersect");

    S.islands = std::move(islands);
    S.arcs = std::move(arcs);

    // connectivity over the island-arc incidence structure
    size_t nodes = S.islands.size() + S.arcs.size();
    if (nodes > 0) {
        UnionFind uf(nodes);
        for (size_t k = 0; k < S.arcs.size(); ++k)
            for (const auto& end : S.arcs[k].ends)
                if (end.attached)
                    uf.unite(static_cast<int>(S.islands.size() + k), end.island);
        int root = uf.find(0);
        S.connected = true;
        for (size_t k = 1; k < nodes; ++k)
            if (uf.find(static_cast<int>(k)) != root) S.connected = false;
    }

    // cycle rank of the island-arc multigraph plus hole count gives the
    // first homology rank; used here only for the simply-connected flag
    int holes = 0;
    for (const auto& isl : S.islands) holes += static_cast<int>(isl.holes.size());
    int both_attached = 0;
    int closed_free = 0;
    for (const auto& arc : S.arcs) {
        if (arc.ends[0].attached && arc.ends[1].attached) ++both_attached;
        if (!arc.ends[0].attached && !arc.ends[1].attached && arc.curve.closed) ++closed_free;
    }
    int m = static_cast<int>(S.islands.size());
    UnionFind guf(std::max<size_t>(S.islands.size(), 1));
    for (const auto& arc : S.arcs)
        if (arc.ends[0].attached && arc.ends[1].attached)
            guf.unite(arc.ends[0].island, arc.ends[1].island);
    int comps = 0;
    for (int k = 0; k < m; ++k)
        if (guf.find(k) == k) ++comps;
    int rank = (m > 0) ? both_attached - m + comps : 0;
    S.simply_connected = S.connected && holes + rank + closed_free == 0;

    // feature size: the largest eps for which S_eps deformation-retracts to S
    double fs = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < S.islands.size(); ++a)
        for (size_t b = a + 1; b < S.islands.size(); ++b)
            fs = std::min(fs, polyline_min_distance(S.islands[a].outer.dense_polyline(),
                                                    S.islands[b].outer.dense_polyline()) /
                                  2);
    for (const auto& isl : S.islands)
        for (const auto& h : isl.holes)
            fs = std::min(fs, polyline_diameter(h.dense_polyline()) / 2);
    for (size_t a = 0; a < S.arcs.size(); ++a)
        for (size_t b = a + 1; b < S.arcs.size(); ++b)
            fs = std::min(fs, polyline_min_distance(S.arcs[a].curve.dense_polyline(),
                                                    S.arcs[b].curve.dense_polyline()) /
                                  2);
    S.feature_size = fs;
    return S;
}

Region regular_neighborhood(const AdmissibleSet& S, double eps) {
    if (!(eps > 0)) throw EpsilonTooLarge("regular neighborhood radius must be positive");
    if (eps >= S.feature_size)
        throw EpsilonTooLarge("eps exceeds the feature size; S_eps would not retract to S");
    return Region{&S, eps};
}

}  // namespace legtk
