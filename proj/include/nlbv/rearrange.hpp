#ifndef NLBV_REARRANGE_HPP
#define NLBV_REARRANGE_HPP

#include <vector>

#include "nlbv/energy.hpp"
#include "nlbv/grid.hpp"

namespace nlbv {

/// Cells ordered by Euclidean distance from the grid center, ties broken
/// lexicographically on (y, x). Prefixes of this ordering are the
/// discrete balls used by rearrangement and isoperimetric checks.
std::vector<int> center_ordering(const GridDomain& grid);

/// Discrete ball: the first `cells` entries of the center ordering.
DiscreteSet prefix_ball(const GridDomain& grid, std::int64_t cells);

/// Symmetric-decreasing rearrangement: |u| values sorted descending and
/// assigned along the center ordering. Value multiset preserved; every
/// superlevel set is a prefix ball.
DiscreteFunction sym_decreasing_rearrangement(const DiscreteFunction& u);

struct RearrangementCheck {
    double tv_u = 0.0;
    double tv_rearranged = 0.0;
    double tolerance = 0.0;
    bool ok = false;
};

/// Checks [u*] <= [u] + c_lat * h * [u]. Exact (c_lat irrelevant) on 1-d
/// grids; the lattice tolerance absorbs anisotropy in 2-d.
RearrangementCheck rearrangement_inequality_check(const DiscreteFunction& u,
                                                  const KernelTable& table,
                                                  double c_lat = 0.1);

struct IsoperimetricCheck {
    double p_set = 0.0;
    double p_ball = 0.0;
    double tolerance = 0.0;
    bool ok = false;
};

/// Checks P_K(E) >= P_K(prefix ball of equal cell count) - c_lat * h * P_K(E).
IsoperimetricCheck isoperimetric_check(const DiscreteSet& E, const KernelTable& table,
                                       double c_lat = 0.1);

struct DilationStep {
    double scale = 0.0;
    double perimeter = 0.0;
    double volume = 0.0;
    double ratio = 0.0; ///< P_K(rE) / |rE|^{2-q/n}
};

struct DilationReport {
    std::vector<DilationStep> steps;
    bool nonincreasing = false;      ///< ratio chain within the slack
    bool strictly_decreasing = false;///< P/|.| chain, relevant for q = n kernels
};

/// Rasterizes r*E for each scale on a common fine grid and checks the
/// monotonicity of the isoperimetric ratios, with slack proportional to
/// the rasterization error.
DilationReport dilation_monotonicity_check(const DiscreteSet& E, const Kernel& kernel,
                                           const std::vector<double>& scales, double q,
                                           int cells_per_unit = 24, double slack_factor = 0.05);

} // namespace nlbv

#endif
