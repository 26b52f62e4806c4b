#include "nlbv/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace nlbv {

std::vector<int> center_ordering(const GridDomain& grid) {
    // doubled coordinates keep the distance comparison in exact integers
    const std::int64_t cx = grid.nx() - 1, cy = grid.ny() - 1;
    std::vector<int> order(grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        std::int64_t ax = 2 * grid.cell_x(a) - cx, ay = 2 * grid.cell_y(a) - cy;
        std::int64_t bx = 2 * grid.cell_x(b) - cx, by = 2 * grid.cell_y(b) - cy;
        std::int64_t da = ax * ax + ay * ay, db = bx * bx + by * by;
        if (da != db) return da < db;
        if (grid.cell_y(a) != grid.cell_y(b)) return grid.cell_y(a) < grid.cell_y(b);
        return grid.cell_x(a) < grid.cell_x(b);
    });
    return order;
}

DiscreteSet prefix_ball(const GridDomain& grid, std::int64_t cells) {
    if (cells < 0 || cells > grid.size()) throw InvalidParameter("prefix ball cell count out of range");
    std::vector<int> order = center_ordering(grid);
    DiscreteSet out(grid);
    for (std::int64_t k = 0; k < cells; ++k) out.set(order[k], true);
    return out;
}

DiscreteFunction sym_decreasing_rearrangement(const DiscreteFunction& u) {
    const GridDomain& grid = u.grid();
    std::vector<double> values(grid.size());
    for (int i = 0; i < grid.size(); ++i) values[i] = std::abs(u[i]);
    std::sort(values.begin(), values.end(), std::greater<double>());
    std::vector<int> order = center_ordering(grid);
    Eigen::ArrayXd out(grid.size());
    for (int k = 0; k < grid.size(); ++k) out[order[k]] = values[k];
    return DiscreteFunction(grid, std::move(out));
}

RearrangementCheck rearrangement_inequality_check(const DiscreteFunction& u,
                                                  const KernelTable& table, double c_lat) {
    RearrangementCheck chk;
    chk.tv_u = k_variation(u, table);
    chk.tv_rearranged = k_variation(sym_decreasing_rearrangement(u), table);
    chk.tolerance = c_lat * table.spacing() * chk.tv_u;
    chk.ok = chk.tv_rearranged <= chk.tv_u + chk.tolerance;
    return chk;
}

IsoperimetricCheck isoperimetric_check(const DiscreteSet& E, const KernelTable& table,
                                       double c_lat) {
    IsoperimetricCheck chk;
    chk.p_set = k_perimeter(E, table);
    chk.p_ball = k_perimeter(prefix_ball(E.grid(), E.cell_count()), table);
    chk.tolerance = c_lat * table.spacing() * chk.p_set;
    chk.ok = chk.p_set >= chk.p_ball - chk.tolerance;
    return chk;
}

namespace {

// Point membership in the region covered by the cells of E.
bool region_contains(const DiscreteSet& E, double px, double py) {
    const GridDomain& g = E.grid();
    double h = g.spacing();
    int ix = int(std::floor((px - g.origin()[0]) / h + 0.5));
    int iy = g.dim() == 2 ? int(std::floor((py - g.origin()[1]) / h + 0.5)) : 0;
    return g.contains(ix, iy) && E.test(g.index(ix, iy));
}

} // namespace

DilationReport dilation_monotonicity_check(const DiscreteSet& E, const Kernel& kernel,
                                           const std::vector<double>& scales, double q,
                                           int cells_per_unit, double slack_factor) {
    if (E.empty()) throw InvalidParameter("dilation check needs a nonempty set");
    for (std::size_t i = 0; i + 1 < scales.size(); ++i)
        if (!(scales[i] > 0.0) || !(scales[i] <= scales[i + 1]))
            throw InvalidParameter("scales must be positive and nondecreasing");
    const int n = kernel.dim();
    const GridDomain& g0 = E.grid();
    auto center0 = g0.grid_center();

    // physical half-extent of E about the grid center
    double half_extent = 0.0;
    for (int i = 0; i < g0.size(); ++i) {
        if (!E.test(i)) continue;
        half_extent = std::max(half_extent, std::abs(g0.center_x(i) - center0[0]) + g0.spacing());
        if (n == 2)
            half_extent = std::max(half_extent, std::abs(g0.center_y(i) - center0[1]) + g0.spacing());
    }
    const double rmax = scales.back();
    const double hf = scales.front() * half_extent * 2.0 / cells_per_unit;
    const int window = std::max(2, int(std::ceil(std::min(2.5 * rmax * half_extent,
                                                          kernel.support_radius()) / hf)));
    const int half_cells = int(std::ceil(rmax * half_extent / hf)) + window + 1;
    const int nx = 2 * half_cells + 1;
    GridDomain fine = n == 1 ? GridDomain::line(nx, hf, -half_cells * hf)
                             : GridDomain::plane(nx, nx, hf, {-half_cells * hf, -half_cells * hf});
    KernelTable table = tabulate_offsets(kernel, fine, window);

    DilationReport rep;
    for (double r : scales) {
        DiscreteSet scaled(fine);
        for (int i = 0; i < fine.size(); ++i) {
            double px = center0[0] + fine.center_x(i) / r;
            double py = n == 2 ? center0[1] + fine.center_y(i) / r : 0.0;
            if (region_contains(E, px, py)) scaled.set(i, true);
        }
        DilationStep step;
        step.scale = r;
        step.perimeter = k_perimeter(scaled, table);
        step.volume = scaled.volume();
        step.ratio = step.perimeter / std::pow(step.volume, 2.0 - q / n);
        rep.steps.push_back(step);
    }
    rep.nonincreasing = true;
    rep.strictly_decreasing = true;
    for (std::size_t k = 0; k + 1 < rep.steps.size(); ++k) {
        const auto& a = rep.steps[k];
        const auto& b = rep.steps[k + 1];
        if (!(b.ratio <= a.ratio * (1.0 + slack_factor))) rep.nonincreasing = false;
        double da = a.perimeter / a.volume, db = b.perimeter / b.volume;
        if (a.scale < b.scale && !(db < da * (1.0 + slack_factor))) rep.strictly_decreasing = false;
    }
    return rep;
}

} // namespace nlbv
