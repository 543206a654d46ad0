#include "legtk/homology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>

namespace legtk {

namespace {

enum class ArcCase { One, Two, Three };

ArcCase arc_case(const AdmissibleArc& arc) {
    bool a0 = arc.ends[0].attached, a1 = arc.ends[1].attached;
    if (a0 && a1)
        return arc.ends[0].island == arc.ends[1].island ? ArcCase::Two : ArcCase::Three;
    return ArcCase::One;
}

cplx centroid(const std::vector<cplx>& pts) {
    cplx c = 0;
    for (const auto& p : pts) c += p;
    return c / static_cast<double>(pts.size());
}

double signed_area(const std::vector<cplx>& pts) {
    double a = 0;
    for (size_t k = 0; k < pts.size(); ++k) {
        const cplx& p = pts[k];
        const cplx& q = pts[(k + 1) % pts.size()];
        a += p.real() * q.imag() - q.real() * p.imag();
    }
    return a / 2;
}

// Routing context shared by the basis and family constructions.
struct RouteCtx {
    const AdmissibleSet& S;
    HomologyConfig cfg;
    RasterGrid grid;                // cells = interior of some island
    std::vector<uint8_t> placed;    // obstacle mask of already-routed curves
    double eps;

    RouteCtx(const AdmissibleSet& set, const HomologyConfig& config) : S(set), cfg(config) {
        double diag = 0;
        eps = cfg.eps;
        if (eps <= 0) {
            // half the feature size, capped by a fraction of the set extent
            RasterGrid probe = make_grid(S, 0.0, 4);
            diag = std::hypot(probe.nx * probe.h, probe.ny * probe.h);
            eps = std::min(S.feature_size / 2, 0.02 * diag);
        }
        grid = make_grid(S, eps, cfg.resolution);
        double margin = 1.2 * grid.h;
        fill_grid(
            grid,
            [&](cplx p) {
                for (const auto& isl : S.islands)
                    if (isl.contains(p) && isl.boundary_distance(p) > margin) return true;
                return false;
            },
            cfg.exec);
        placed.assign(grid.cells.size(), 0);
    }

    PiecewiseCurve path(cplx a, cplx b) {
        auto poly = route_path(grid, grid.cells, placed, a, b, cfg.clearance_cells + 2);
        return PiecewiseCurve::from_polyline(poly, false);
    }

    void stamp(const PiecewiseCurve& c) {
        stamp_polyline(grid, placed, resample_polyline(c, grid.h / 2), cfg.clearance_cells);
    }

    bool stamped_near(cplx p) const {
        auto [i, j] = grid.cell_of(p);
        return grid.in_bounds(i, j) && placed[grid.idx(i, j)] != 0;
    }
};

// Closed loop offset outward from a hole boundary, positively oriented,
// starting at the loop point nearest to `near`.
PiecewiseCurve make_hole_loop(const RouteCtx& ctx, const Island& island,
                              const PiecewiseCurve& hole, cplx near) {
    const auto& poly = hole.dense_polyline();
    cplx c = centroid(poly);
    for (double lam : {0.35, 0.25, 0.18, 0.12, 0.08, 0.05}) {
        std::vector<cplx> pts;
        pts.reserve(poly.size());
        for (size_t k = 0; k + 1 < poly.size(); ++k)  // last dense point repeats the first
            pts.push_back(c + (1.0 + lam) * (poly[k] - c));
        bool ok = true;
        for (const auto& p : pts) {
            if (!island.contains(p) || island.boundary_distance(p) < 2 * ctx.grid.h ||
                ctx.stamped_near(p)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        if (signed_area(pts) < 0) std::reverse(pts.begin(), pts.end());
        size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < pts.size(); ++k) {
            double d = std::abs(pts[k] - near);
            if (d < bd) { bd = d; best = k; }
        }
        std::rotate(pts.begin(), pts.begin() + static_cast<long>(best), pts.end());
        pts.push_back(pts.front());
        return PiecewiseCurve::from_polyline(pts, true);
    }
    throw RoutingFailure("cannot place an offset loop around a hole at this resolution");
}

std::vector<PiecewiseCurve> reversed_parts(const std::vector<PiecewiseCurve>& parts) {
    std::vector<PiecewiseCurve> out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) out.push_back(it->reversed());
    return out;
}

struct CyclePlan {
    std::vector<PiecewiseCurve> parts;
    int private_part = -1;
    int home_island = 0;       // trunk gets spliced in for this island
    bool needs_trunk = true;
};

PiecewiseCurve assemble_cycle(const std::vector<PiecewiseCurve>& parts, int private_part,
                              std::pair<double, double>& private_range) {
    double total = 0;
    std::vector<double> lens;
    for (const auto& p : parts) {
        lens.push_back(p.length());
        total += lens.back();
    }
    double before = 0;
    for (int k = 0; k < private_part; ++k) before += lens[static_cast<size_t>(k)];
    double lp = lens[static_cast<size_t>(private_part)];
    private_range = {(before + 0.2 * lp) / total, (before + 0.8 * lp) / total};
    return PiecewiseCurve::concat(parts, true);
}

// Oriented copy of an arc running from the end attached to `from_island`.
PiecewiseCurve oriented_arc(const AdmissibleArc& arc, int from_island) {
    if (arc.ends[0].island == from_island) return arc.curve;
    return arc.curve.reversed();
}

struct BasisBuild {
    HomologyBasis basis;
    std::vector<bool> arc_covered;  // arc index -> contained in some basis cycle
};

BasisBuild build_basis_impl(const AdmissibleSet& S, RouteCtx& ctx) {
    const HomologyConfig& cfg = ctx.cfg;
    BasisBuild out;
    HomologyBasis& basis = out.basis;
    out.arc_covered.assign(S.arcs.size(), false);
    basis.eps_used = ctx.eps;
    basis.resolution_used = cfg.resolution;

    if (!S.connected) throw DisconnectedSet("admissible set is not connected");

    if (S.islands.empty()) {
        // a single arc or closed curve; the basis is trivial
        if (S.arcs.size() != 1)
            throw DisconnectedSet("island-free admissible set must be a single arc or curve");
        basis.base_point = S.arcs[0].curve.start();
        if (S.arcs[0].curve.closed) {
            basis.cycles.push_back(S.arcs[0].curve);
            basis.private_arcs.push_back({0.25, 0.75});
            out.arc_covered[0] = true;
        }
        std::vector<const PiecewiseCurve*> cs;
        for (const auto& c : basis.cycles) cs.push_back(&c);
        basis.runge_certified = runge_check(S, cs, ctx.eps, cfg.resolution, cfg.exec);
        return out;
    }

    basis.base_point = S.islands[0].vertex;
    BridgeColoring coloring = classify_bridges(S);

    std::vector<CyclePlan> plans;

    // hole lassos: neck from the vertex, offset loop, retraced neck
    for (size_t i = 0; i < S.islands.size(); ++i) {
        const auto& isl = S.islands[i];
        for (const auto& hole : isl.holes) {
            PiecewiseCurve loop = make_hole_loop(ctx, isl, hole, isl.vertex);
            ctx.stamp(loop);
            PiecewiseCurve neck = ctx.path(isl.vertex, loop.start());
            ctx.stamp(neck);
            CyclePlan plan;
            plan.parts = {neck, loop, neck.reversed()};
            plan.private_part = 1;
            plan.home_island = static_cast<int>(i);
            plans.push_back(std::move(plan));
        }
    }

    // Case-2 arcs: both endpoints on the same island
    for (size_t k = 0; k < S.arcs.size(); ++k) {
        if (arc_case(S.arcs[k]) != ArcCase::Two) continue;
        int i = S.arcs[k].ends[0].island;
        PiecewiseCurve p0 = ctx.path(S.islands[static_cast<size_t>(i)].vertex,
                                     S.arcs[k].curve.start());
        ctx.stamp(p0);
        PiecewiseCurve p1 = ctx.path(S.arcs[k].curve.end(),
                                     S.islands[static_cast<size_t>(i)].vertex);
        ctx.stamp(p1);
        CyclePlan plan;
        plan.parts = {p0, S.arcs[k].curve, p1};
        plan.private_part = 1;
        plan.home_island = i;
        plans.push_back(std::move(plan));
        out.arc_covered[k] = true;
    }

    // trunk paths q_i -> q_1 along the black spanning tree
    const size_t m = S.islands.size();
    std::vector<std::vector<std::pair<int, int>>> adj(m);  // island -> (nbr, arc idx)
    for (int b : coloring.black) {
        const auto& arc = S.arcs[static_cast<size_t>(b)];
        adj[static_cast<size_t>(arc.ends[0].island)].push_back({arc.ends[1].island, b});
        adj[static_cast<size_t>(arc.ends[1].island)].push_back({arc.ends[0].island, b});
    }
    std::vector<std::vector<PiecewiseCurve>> trunk(m);
    std::vector<int> parent(m, -1), parent_arc(m, -1);
    std::deque<int> bfs = {0};
    std::vector<bool> seen(m, false);
    seen[0] = true;
    std::vector<int> order;
    while (!bfs.empty()) {
        int i = bfs.front();
        bfs.pop_front();
        order.push_back(i);
        for (auto [j, b] : adj[static_cast<size_t>(i)])
            if (!seen[static_cast<size_t>(j)]) {
                seen[static_cast<size_t>(j)] = true;
                parent[static_cast<size_t>(j)] = i;
                parent_arc[static_cast<size_t>(j)] = b;
                bfs.push_back(j);
            }
    }
    for (int i : order) {
        if (i == 0) continue;
        int p = parent[static_cast<size_t>(i)];
        int b = parent_arc[static_cast<size_t>(i)];
        PiecewiseCurve bridge = oriented_arc(S.arcs[static_cast<size_t>(b)], i);
        PiecewiseCurve e0 = ctx.path(S.islands[static_cast<size_t>(i)].vertex, bridge.start());
        ctx.stamp(e0);
        PiecewiseCurve e1 = ctx.path(bridge.end(), S.islands[static_cast<size_t>(p)].vertex);
        ctx.stamp(e1);
        auto& t = trunk[static_cast<size_t>(i)];
        t = {e0, bridge, e1};
        for (const auto& part : trunk[static_cast<size_t>(p)]) t.push_back(part);
    }

    // red bridges: close the cycle back through the black tree and q_1
    for (int r : coloring.red) {
        const auto& arc = S.arcs[static_cast<size_t>(r)];
        int u = arc.ends[0].island, v = arc.ends[1].island;
        PiecewiseCurve g0 = ctx.path(S.islands[static_cast<size_t>(u)].vertex, arc.curve.start());
        ctx.stamp(g0);
        PiecewiseCurve g1 = ctx.path(arc.curve.end(), S.islands[static_cast<size_t>(v)].vertex);
        ctx.stamp(g1);
        CyclePlan plan;
        plan.needs_trunk = false;
        for (auto& part : reversed_parts(trunk[static_cast<size_t>(u)]))
            plan.parts.push_back(std::move(part));
        plan.private_part = static_cast<int>(plan.parts.size()) + 1;
        plan.parts.push_back(g0);
        plan.parts.push_back(arc.curve);
        plan.parts.push_back(g1);
        for (const auto& part : trunk[static_cast<size_t>(v)]) plan.parts.push_back(part);
        plans.push_back(std::move(plan));
        out.arc_covered[static_cast<size_t>(r)] = true;
    }
    for (int b : coloring.black)
        out.arc_covered[static_cast<size_t>(b)] = true;  // black bridges sit on trunks

    // splice trunks so every cycle passes through the base vertex q_1
    for (auto& plan : plans) {
        std::vector<PiecewiseCurve> parts;
        if (plan.needs_trunk && plan.home_island != 0) {
            const auto& t = trunk[static_cast<size_t>(plan.home_island)];
            parts = reversed_parts(t);
            plan.private_part += static_cast<int>(parts.size());
            for (auto& p : plan.parts) parts.push_back(std::move(p));
            for (const auto& p : t) parts.push_back(p);
        } else {
            parts = std::move(plan.parts);
        }
        std::pair<double, double> range;
        basis.cycles.push_back(assemble_cycle(parts, plan.private_part, range));
        basis.private_arcs.push_back(range);
    }

    // private-arc disjointness at the raster scale
    for (size_t i = 0; i < basis.cycles.size(); ++i) {
        auto [lo, hi] = basis.private_arcs[i];
        for (int k = 0; k <= 128; ++k) {
            cplx p = basis.cycles[i].eval(lo + (hi - lo) * k / 128.0);
            for (size_t j = 0; j < basis.cycles.size(); ++j) {
                if (j == i) continue;
                if (point_to_polyline_distance(p, basis.cycles[j].dense_polyline(), false) <
                    cfg.clearance_cells * ctx.grid.h)
                    throw RoutingFailure("private arc of cycle " + std::to_string(i) +
                                         " is not disjoint from cycle " + std::to_string(j));
            }
        }
    }

    std::vector<const PiecewiseCurve*> cs;
    for (const auto& c : basis.cycles) cs.push_back(&c);
    basis.runge_certified = runge_check(S, cs, ctx.eps, cfg.resolution, cfg.exec);
    return out;
}

}  // namespace

BridgeColoring classify_bridges(const AdmissibleSet& S) {
    if (!S.connected) throw DisconnectedSet("admissible set is not connected");
    BridgeColoring coloring;
    const size_t m = S.islands.size();
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)];
        return x;
    };
    for (size_t k = 0; k < S.arcs.size(); ++k) {
        if (arc_case(S.arcs[k]) != ArcCase::Three) continue;
        int a = find(S.arcs[k].ends[0].island), b = find(S.arcs[k].ends[1].island);
        if (a != b) {
            parent[static_cast<size_t>(a)] = b;
            coloring.black.push_back(static_cast<int>(k));
        } else {
            coloring.red.push_back(static_cast<int>(k));
        }
    }
    if (m > 0) {
        int root = find(0);
        for (size_t i = 1; i < m; ++i)
            if (find(static_cast<int>(i)) != root)
                throw DisconnectedSet("island-bridge graph is not connected");
    }
    return coloring;
}

int euler_rank(const AdmissibleSet& S) {
    int chi = 0;
    for (const auto& isl : S.islands) chi += 1 - static_cast<int>(isl.holes.size());
    for (const auto& arc : S.arcs) {
        bool a0 = arc.ends[0].attached, a1 = arc.ends[1].attached;
        if (a0 && a1) chi -= 1;
        else if (!a0 && !a1 && !arc.curve.closed) chi += 1;
        // closed free curves contribute chi = 0
    }
    return 1 - chi;
}

bool runge_check(const AdmissibleSet& S, const std::vector<const PiecewiseCurve*>& curves,
                 double eps, int resolution, Exec exec) {
    RasterGrid grid = rasterize_region(S, eps, resolution, exec);
    if (grid.h > eps / 2)
        throw ResolutionTooCoarse("raster cell exceeds eps/2; curves would be thinner than 2 cells");
    std::vector<uint8_t> blocked(grid.cells.size(), 0);
    for (const auto* c : curves)
        stamp_polyline(grid, blocked, resample_polyline(*c, grid.h / 2), 1);
    return boundary_reachable_everywhere(grid, blocked);
}

HomologyBasis build_homology_basis(const AdmissibleSet& S, const HomologyConfig& cfg) {
    RouteCtx ctx(S, cfg);
    return build_basis_impl(S, ctx).basis;
}

namespace {

PiecewiseCurve subcurve(const PiecewiseCurve& c, double s0, double s1) {
    // s1 may exceed 1 on closed curves (wrap-around)
    int n = std::max(24, static_cast<int>(std::ceil((s1 - s0) * 1024)));
    std::vector<cplx> pts(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        double s = s0 + (s1 - s0) * k / n;
        if (s >= 1.0 && c.closed) s -= std::floor(s);
        pts[static_cast<size_t>(k)] = c.eval(std::min(s, 1.0));
    }
    return PiecewiseCurve::from_polyline(pts, false);
}

}  // namespace

CurveFamily curve_family_with_interpolation(const AdmissibleSet& S, std::vector<cplx> A,
                                            const HomologyConfig& cfg) {
    RouteCtx ctx(S, cfg);
    BasisBuild bb = build_basis_impl(S, ctx);

    CurveFamily family;
    family.base_point = bb.basis.base_point;

    // enlarge A: arc endpoints, connector endpoints (vertices), base point
    auto add_point = [&](cplx p) {
        for (const auto& q : A)
            if (std::abs(q - p) < 1e-9) return;
        A.push_back(p);
    };
    add_point(family.base_point);
    for (const auto& isl : S.islands) add_point(isl.vertex);
    for (const auto& arc : S.arcs) {
        if (!arc.curve.closed) {
            add_point(arc.curve.start());
            add_point(arc.curve.end());
        }
    }
    family.interp_points = A;

    double snap = std::max(cfg.snap_tol, 2 * ctx.grid.h);

    // (a) split the basis cycles at the points of A
    auto split_at_A = [&](const PiecewiseCurve& curve, bool closed) {
        std::vector<double> cuts;
        for (const auto& a : A) {
            double best = std::numeric_limits<double>::infinity(), bs = 0;
            const int probes = 4096;
            for (int k = 0; k <= probes; ++k) {
                double s = static_cast<double>(k) / probes;
                double d = std::abs(curve.eval(s) - a);
                if (d < best) { best = d; bs = s; }
            }
            if (best < snap) cuts.push_back(bs);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](double a, double b) { return std::abs(a - b) < 1e-6; }),
                   cuts.end());
        if (closed) {
            if (cuts.size() <= 1) {
                family.members.push_back({curve, true});
                return;
            }
            for (size_t k = 0; k < cuts.size(); ++k) {
                double s0 = cuts[k];
                double s1 = (k + 1 < cuts.size()) ? cuts[k + 1] : cuts[0] + 1.0;
                family.members.push_back({subcurve(curve, s0, s1), false});
            }
        } else {
            std::vector<double> bounds = {0.0};
            for (double s : cuts)
                if (s > 1e-6 && s < 1 - 1e-6) bounds.push_back(s);
            bounds.push_back(1.0);
            for (size_t k = 0; k + 1 < bounds.size(); ++k)
                family.members.push_back({subcurve(curve, bounds[k], bounds[k + 1]), false});
        }
    };

    for (const auto& cycle : bb.basis.cycles) split_at_A(cycle, true);

    // (b) arcs not contained in any basis cycle get routed to the vertices
    for (size_t k = 0; k < S.arcs.size(); ++k) {
        if (bb.arc_covered[k]) continue;
        const auto& arc = S.arcs[k];
        std::vector<PiecewiseCurve> parts;
        if (arc.ends[0].attached) {
            PiecewiseCurve lead = ctx.path(
                S.islands[static_cast<size_t>(arc.ends[0].island)].vertex, arc.curve.start());
            ctx.stamp(lead);
            parts.push_back(std::move(lead));
        }
        parts.push_back(arc.curve);
        if (arc.ends[1].attached) {
            PiecewiseCurve tail = ctx.path(
                arc.curve.end(), S.islands[static_cast<size_t>(arc.ends[1].island)].vertex);
            ctx.stamp(tail);
            parts.push_back(std::move(tail));
        }
        split_at_A(PiecewiseCurve::concat(parts, false), false);
    }

    // (c) join leftover points of A by arcs Lambda_a to their island vertex
    for (const auto& a : A) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& mem : family.members)
            d = std::min(d, point_to_polyline_distance(a, mem.curve.dense_polyline(), false));
        if (d < snap) continue;
        const Island* home = nullptr;
        for (const auto& isl : S.islands)
            if (isl.contains(a)) { home = &isl; break; }
        if (!home) throw RoutingFailure("interpolation point lies outside every island");
        PiecewiseCurve lambda = ctx.path(home->vertex, a);
        ctx.stamp(lambda);
        family.members.push_back({std::move(lambda), false});
    }

    std::vector<const PiecewiseCurve*> cs;
    for (const auto& mem : family.members) cs.push_back(&mem.curve);
    family.runge_certified = runge_check(S, cs, ctx.eps, cfg.resolution, cfg.exec);
    family.connected = true;
    return family;
}

}  // namespace legtk
