#include "legtk/raster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

namespace legtk {

RasterGrid make_grid(const AdmissibleSet& S, double margin, int resolution) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    auto extend = [&](const std::vector<cplx>& pts) {
        for (const auto& p : pts) {
            xmin = std::min(xmin, p.real());
            xmax = std::max(xmax, p.real());
            ymin = std::min(ymin, p.imag());
            ymax = std::max(ymax, p.imag());
        }
    };
    for (const auto& isl : S.islands) extend(isl.outer.dense_polyline());
    for (const auto& arc : S.arcs) extend(arc.curve.dense_polyline());
    if (xmin > xmax) throw ValidationError("cannot rasterize an empty set");

    RasterGrid g;
    double w = xmax - xmin, hgt = ymax - ymin;
    g.h = std::max(w, hgt) / resolution;
    if (g.h <= 0) g.h = 1.0 / resolution;
    double pad = margin + 2 * g.h;
    g.x0 = xmin - pad;
    g.y0 = ymin - pad;
    g.nx = static_cast<int>(std::ceil((w + 2 * pad) / g.h));
    g.ny = static_cast<int>(std::ceil((hgt + 2 * pad) / g.h));
    g.cells.assign(static_cast<size_t>(g.nx) * g.ny, 0);
    return g;
}

void fill_grid(RasterGrid& grid, const std::function<bool(cplx)>& predicate, Exec exec) {
    const int nx = grid.nx, ny = grid.ny;
#pragma omp parallel for schedule(dynamic, 4) if (exec == Exec::Parallel)
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            grid.cells[grid.idx(i, j)] = predicate(grid.center(i, j)) ? 1 : 0;
}

RasterGrid rasterize_region(const AdmissibleSet& S, double eps, int resolution, Exec exec) {
    RasterGrid g = make_grid(S, eps, resolution);
    fill_grid(g, [&](cplx p) { return S.distance(p) < eps; }, exec);
    return g;
}

void stamp_polyline(const RasterGrid& grid, std::vector<uint8_t>& mask,
                    const std::vector<cplx>& polyline, int radius_cells) {
    auto stamp_point = [&](cplx p) {
        auto [ci, cj] = grid.cell_of(p);
        for (int dj = -radius_cells; dj <= radius_cells; ++dj)
            for (int di = -radius_cells; di <= radius_cells; ++di) {
                if (di * di + dj * dj > radius_cells * radius_cells + radius_cells) continue;
                int i = ci + di, j = cj + dj;
                if (grid.in_bounds(i, j)) mask[grid.idx(i, j)] = 1;
            }
    };
    for (size_t k = 0; k + 1 < polyline.size(); ++k) {
        cplx a = polyline[k], b = polyline[k + 1];
        int steps = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / (grid.h * 0.5))));
        for (int s = 0; s <= steps; ++s)
            stamp_point(a + (b - a) * (static_cast<double>(s) / steps));
    }
    if (!polyline.empty()) stamp_point(polyline.back());
}

int label_components(const RasterGrid& grid, std::vector<int>& labels) {
    labels.assign(grid.cells.size(), 0);
    int next = 0;
    std::deque<std::pair<int, int>> queue;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            if (!grid.cells[grid.idx(i, j)] || labels[grid.idx(i, j)]) continue;
            ++next;
            labels[grid.idx(i, j)] = next;
            queue.push_back({i, j});
            while (!queue.empty()) {
                auto [ci, cj] = queue.front();
                queue.pop_front();
                const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    int ni = ci + di[d], nj = cj + dj[d];
                    if (!grid.in_bounds(ni, nj)) continue;
                    size_t id = grid.idx(ni, nj);
                    if (grid.cells[id] && !labels[id]) {
                        labels[id] = next;
                        queue.push_back({ni, nj});
                    }
                }
            }
        }
    return next;
}

int component_count(const RasterGrid& grid) {
    std::vector<int> labels;
    return label_components(grid, labels);
}

int hole_count(const RasterGrid& grid) {
    RasterGrid complement = grid;
    for (auto& c : complement.cells) c = c ? 0 : 1;
    // bounded complement components = all components minus the unbounded one;
    // the grid margin guarantees the outer component touches the edge
    return component_count(complement) - 1;
}

bool boundary_reachable_everywhere(const RasterGrid& grid, const std::vector<uint8_t>& blocked) {
    std::vector<uint8_t> visited(grid.cells.size(), 0);
    std::deque<std::pair<int, int>> queue;
    auto open = [&](int i, int j) {
        size_t id = grid.idx(i, j);
        return grid.cells[id] && !blocked[id];
    };
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            if (!open(i, j)) continue;
            bool edge = (i == 0 || j == 0 || i == grid.nx - 1 || j == grid.ny - 1);
            if (!edge) {
                const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
                for (int d = 0; d < 4 && !edge; ++d)
                    if (!grid.cells[grid.idx(i + di[d], j + dj[d])]) edge = true;
            }
            if (edge && !visited[grid.idx(i, j)]) {
                visited[grid.idx(i, j)] = 1;
                queue.push_back({i, j});
            }
        }
    while (!queue.empty()) {
        auto [ci, cj] = queue.front();
        queue.pop_front();
        const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            int ni = ci + di[d], nj = cj + dj[d];
            if (!grid.in_bounds(ni, nj) || !open(ni, nj)) continue;
            size_t id = grid.idx(ni, nj);
            if (!visited[id]) {
                visited[id] = 1;
                queue.push_back({ni, nj});
            }
        }
    }
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            if (open(i, j) && !visited[grid.idx(i, j)]) return false;
    return true;
}

namespace {

struct DijkstraNode {
    double dist;
    int i, j;
    bool operator>(const DijkstraNode& o) const { return dist > o.dist; }
};

}  // namespace

std::vector<cplx> route_path(const RasterGrid& grid, const std::vector<uint8_t>& allowed,
                             const std::vector<uint8_t>& forbidden, cplx from, cplx to,
                             int exempt_cells) {
    auto [fi, fj] = grid.cell_of(from);
    auto [ti, tj] = grid.cell_of(to);
    double exempt2 = static_cast<double>(exempt_cells) * exempt_cells;
    auto near_endpoint = [&](int i, int j) {
        double a = (i - fi) * double(i - fi) + (j - fj) * double(j - fj);
        double b = (i - ti) * double(i - ti) + (j - tj) * double(j - tj);
        return a <= exempt2 || b <= exempt2;
    };
    auto open = [&](int i, int j) {
        if (!grid.in_bounds(i, j)) return false;
        size_t id = grid.idx(i, j);
        if (!allowed[id]) return false;
        return !forbidden[id] || near_endpoint(i, j);
    };
    auto snap = [&](int& i, int& j) {
        if (open(i, j)) return;
        for (int r = 1; r < std::max(grid.nx, grid.ny); ++r)
            for (int dj = -r; dj <= r; ++dj)
                for (int di = -r; di <= r; ++di) {
                    if (std::max(std::abs(di), std::abs(dj)) != r) continue;
                    if (open(i + di, j + dj)) {
                        i += di;
                        j += dj;
                        return;
                    }
                }
        throw RoutingFailure("route endpoint has no reachable raster cell");
    };
    snap(fi, fj);
    snap(ti, tj);

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(grid.cells.size(), inf);
    std::vector<int> prev(grid.cells.size(), -1);
    std::priority_queue<DijkstraNode, std::vector<DijkstraNode>, std::greater<>> pq;
    dist[grid.idx(fi, fj)] = 0;
    pq.push({0, fi, fj});
    while (!pq.empty()) {
        auto [d, ci, cj] = pq.top();
        pq.pop();
        size_t cid = grid.idx(ci, cj);
        if (d > dist[cid]) continue;
        if (ci == ti && cj == tj) break;
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
                if (di == 0 && dj == 0) continue;
                int ni = ci + di, nj = cj + dj;
                if (!open(ni, nj)) continue;
                double nd = d + std::hypot(di, dj);
                size_t nid = grid.idx(ni, nj);
                if (nd < dist[nid]) {
                    dist[nid] = nd;
                    prev[nid] = static_cast<int>(cid);
                    pq.push({nd, ni, nj});
                }
            }
    }
    if (dist[grid.idx(ti, tj)] == inf)
        throw RoutingFailure("no raster path between route endpoints");

    std::vector<std::pair<int, int>> cells;
    for (int id = static_cast<int>(grid.idx(ti, tj)); id >= 0; id = prev[static_cast<size_t>(id)])
        cells.push_back({id % grid.nx, id / grid.nx});
    std::reverse(cells.begin(), cells.end());

    // string-pulling: skip waypoints while the straight segment stays open
    auto segment_open = [&](cplx a, cplx b) {
        int steps = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / (grid.h * 0.4))));
        for (int s = 0; s <= steps; ++s) {
            cplx p = a + (b - a) * (static_cast<double>(s) / steps);
            auto [i, j] = grid.cell_of(p);
            if (!open(i, j)) return false;
        }
        return true;
    };
    std::vector<cplx> pts;
    pts.push_back(from);
    size_t k = 0;
    std::vector<cplx> centers;
    centers.reserve(cells.size() + 1);
    for (auto& [i, j] : cells) centers.push_back(grid.center(i, j));
    centers.push_back(to);
    while (k + 1 < centers.size()) {
        size_t best = k + 1;
        for (size_t m = centers.size() - 1; m > k + 1; --m)
            if (segment_open(k == 0 ? from : centers[k], centers[m])) {
                best = m;
                break;
            }
        pts.push_back(centers[best]);
        k = best;
    }
    if (std::abs(pts.back() - to) > 1e-14) pts.push_back(to);
    pts.back() = to;

    // subdivide long segments so downstream Hermite interpolation stays tame
    std::vector<cplx> refined;
    for (size_t m = 0; m + 1 < pts.size(); ++m) {
        cplx a = pts[m], b = pts[m + 1];
        int steps = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / (4 * grid.h))));
        for (int s = 0; s < steps; ++s)
            refined.push_back(a + (b - a) * (static_cast<double>(s) / steps));
    }
    refined.push_back(pts.back());
    return refined;
}

std::vector<cplx> resample_polyline(const PiecewiseCurve& curve, double max_spacing) {
    int n = std::max(16, static_cast<int>(std::ceil(curve.length() / max_spacing)));
    std::vector<cplx> pts(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) pts[static_cast<size_t>(k)] = curve.eval(static_cast<double>(k) / n);
    return pts;
}

}  // namespace legtk
