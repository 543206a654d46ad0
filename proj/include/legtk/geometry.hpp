// Planar admissible sets: islands (compact domains with piecewise-smooth
// boundary), attached arcs, and sampled discretizations of their curves.
#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "legtk/errors.hpp"

namespace legtk {

using cplx = std::complex<double>;

// One smooth parametric piece s in [0,1] -> C, stored as samples plus
// tangents on a uniform grid and evaluated by cubic Hermite interpolation.
struct CurvePiece {
    std::vector<cplx> points;
    std::vector<cplx> tangents;  // d gamma / ds at the grid points

    cplx eval(double s) const;
    cplx deriv(double s) const;
    double min_tangent_modulus() const;
};

struct PiecewiseCurve {
    std::vector<CurvePiece> pieces;
    bool closed = false;
    int orientation = +1;

    // Built lazily: per-piece cumulative arclengths for the global
    // arclength-proportional parameterization.
    void finalize();

    double length() const { return total_length_; }
    // Global parameter s in [0,1], proportional to arclength.
    cplx eval(double s) const;
    cplx deriv(double s) const;  // d gamma / ds of the global parameterization

    cplx start() const { return pieces.front().points.front(); }
    cplx end() const { return pieces.back().points.back(); }

    PiecewiseCurve reversed() const;
    double min_tangent_modulus() const;
    // Validates the type invariants (shared endpoints, immersion, closure).
    void validate(double endpoint_tol = 1e-9) const;

    // Dense polyline of the whole curve, used by distance and raster code.
    const std::vector<cplx>& dense_polyline() const { return dense_; }

    // Interior global parameters where eval/deriv may lose smoothness:
    // piece junctions and the Hermite knots inside each piece.
    std::vector<double> smooth_breakpoints() const;

    static PiecewiseCurve circle(cplx center, double radius, int orientation = +1, int npts = 256);
    static PiecewiseCurve segment(cplx a, cplx b);
    static PiecewiseCurve arc(cplx center, double radius, double theta0, double theta1,
                              int npts = 128);
    static PiecewiseCurve from_polyline(const std::vector<cplx>& pts, bool closed);
    // Joins pieces of several curves end to end into one curve.
    static PiecewiseCurve concat(const std::vector<PiecewiseCurve>& parts, bool closed);

  private:
    double total_length_ = 0;
    std::vector<double> piece_break_;   // cumulative arclength fractions, size pieces+1
    std::vector<std::vector<double>> cumlen_;  // per piece, per stored interval
    std::vector<cplx> dense_;
    bool finalized_ = false;

    std::pair<int, double> locate(double s) const;  // global s -> (piece, local s)
};

struct CurveSamples {
    std::vector<cplx> points;
    std::vector<cplx> tangents;        // d gamma / ds at the samples (global parameter)
    std::vector<double> params;        // s_k in [0,1]
    std::vector<cplx> dz;              // per-interval increments; wraps around when closed
    bool closed = false;
    double closure_tol = 1e-12;
    std::shared_ptr<const PiecewiseCurve> source;  // for refinement / quadrature

    cplx sum_dz() const;
    size_t interval_count() const { return dz.size(); }
};

// Arclength-proportional sampling; n is the total sample count and must be
// at least 8 per smooth piece.
CurveSamples sample_curve(const PiecewiseCurve& curve, int n);
CurveSamples sample_curve(std::shared_ptr<const PiecewiseCurve> curve, int n);

struct ArcEnd {
    bool attached = false;
    int island = -1;
    int boundary = -1;  // -1 = outer boundary, k >= 0 = hole index
};

struct Island {
    PiecewiseCurve outer;                    // closed, positively oriented
    std::vector<PiecewiseCurve> holes;       // closed, negatively oriented
    cplx vertex;                             // interior point q_i
    // Per boundary component (outer first, then holes): the point pair
    // (a_{i,j}, b_{i,j}) used by the homology construction.
    std::vector<std::pair<cplx, cplx>> anchor_points;

    bool contains(cplx p) const;             // filled island, holes removed
    double boundary_distance(cplx p) const;  // distance to the full boundary
};

struct AdmissibleArc {
    PiecewiseCurve curve;  // open arc, or a closed free curve when both ends are free
    std::array<ArcEnd, 2> ends;
};

struct SetTolerances {
    double closure = 1e-12;
    double endpoint = 1e-9;
    double attachment = 1e-6;              // max distance attachment point to boundary
    double transversality_angle_deg = 15;  // minimum arc/boundary angle
    double min_separation = 1e-9;          // disjointness floor
};

struct AdmissibleSet {
    std::vector<Island> islands;
    std::vector<AdmissibleArc> arcs;
    bool connected = false;
    bool simply_connected = false;
    double feature_size = 0;  // largest eps with disjoint regular neighborhoods
    SetTolerances tol;

    double distance(cplx p) const;  // dist(p, S)
    bool in_some_island(cplx p) const;
};

AdmissibleSet build_admissible_set(std::vector<Island> islands, std::vector<AdmissibleArc> arcs,
                                   const SetTolerances& tol = {});

// Point-membership predicate for the regular neighborhood S_eps.
struct Region {
    const AdmissibleSet* set;
    double eps;
    bool contains(cplx p) const { return set->distance(p) < eps; }
};

Region regular_neighborhood(const AdmissibleSet& S, double eps);

// Geometry helpers shared across modules.
double point_to_polyline_distance(cplx p, const std::vector<cplx>& poly, bool closed);
bool point_in_polygon(cplx p, const std::vector<cplx>& poly);
double polyline_min_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace legtk
