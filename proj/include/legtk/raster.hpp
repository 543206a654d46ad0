// Rasterized region machinery: membership grids for regular neighborhoods,
// flood-fill connectivity, and grid-based path routing inside islands.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "legtk/geometry.hpp"

namespace legtk {

// Execution policy for the data-parallel kernels. Serial is the reference
// implementation; Parallel uses OpenMP and must produce identical results.
enum class Exec { Serial, Parallel };

struct RasterGrid {
    double x0 = 0, y0 = 0, h = 1;
    int nx = 0, ny = 0;
    std::vector<uint8_t> cells;  // nonzero = member

    size_t idx(int i, int j) const { return static_cast<size_t>(j) * nx + i; }
    bool in_bounds(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
    cplx center(int i, int j) const { return {x0 + (i + 0.5) * h, y0 + (j + 0.5) * h}; }
    std::pair<int, int> cell_of(cplx p) const {
        return {static_cast<int>(std::floor((p.real() - x0) / h)),
                static_cast<int>(std::floor((p.imag() - y0) / h))};
    }
    bool at(int i, int j) const { return in_bounds(i, j) && cells[idx(i, j)] != 0; }
};

// Grid geometry covering the admissible set's bounding box inflated by
// `margin`, with `resolution` cells across the larger box dimension.
RasterGrid make_grid(const AdmissibleSet& S, double margin, int resolution);

// Fills `grid.cells` with the predicate evaluated at cell centers.
// This is the hot data-parallel kernel; both policies give identical grids.
void fill_grid(RasterGrid& grid, const std::function<bool(cplx)>& predicate, Exec exec);

// Membership grid of the regular neighborhood S_eps.
RasterGrid rasterize_region(const AdmissibleSet& S, double eps, int resolution,
                            Exec exec = Exec::Parallel);

// Marks all cells within `radius_cells` of the polyline.
void stamp_polyline(const RasterGrid& grid, std::vector<uint8_t>& mask,
                    const std::vector<cplx>& polyline, int radius_cells);

// 4-connected component labels over member cells (0 = not a member,
// labels start at 1). Returns the number of components.
int label_components(const RasterGrid& grid, std::vector<int>& labels);

// Number of connected components of the member cells, and the number of
// bounded complement components ("holes") of the member region.
int component_count(const RasterGrid& grid);
int hole_count(const RasterGrid& grid);

// Flood fill over member && !blocked cells starting from every such cell
// that touches a non-member cell or the grid edge. Returns true when all
// member && !blocked cells are reached (no trapped components).
bool boundary_reachable_everywhere(const RasterGrid& grid, const std::vector<uint8_t>& blocked);

// Grid path router. `allowed` marks routable cells; `forbidden` marks
// obstacle cells that may be entered only within `exempt_cells` of either
// endpoint. Returns a smoothed polyline from `from` to `to` (exact
// endpoints included). Throws RoutingFailure when no path exists.
std::vector<cplx> route_path(const RasterGrid& grid, const std::vector<uint8_t>& allowed,
                             const std::vector<uint8_t>& forbidden, cplx from, cplx to,
                             int exempt_cells);

// Resamples a curve to a polyline with spacing at most `max_spacing`.
std::vector<cplx> resample_polyline(const PiecewiseCurve& curve, double max_spacing);

}  // namespace legtk
