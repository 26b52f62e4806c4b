#ifndef NLBV_ENERGY_HPP
#define NLBV_ENERGY_HPP

#include <utility>
#include <vector>

#include "nlbv/grid.hpp"
#include "nlbv/kernel.hpp"

namespace nlbv {

/// How the infinite complement of the grid enters a perimeter sum.
///   Zero: exterior is an empty region (default; free-space semantics).
///   None: interactions stop at the grid boundary.
///   Full: exterior belongs to the set (complement bookkeeping).
enum class Exterior { Zero, None, Full };

/// Interaction mass of each cell against everything outside the grid but
/// inside the truncation window.
std::vector<double> boundary_mass(const GridDomain& grid, const KernelTable& table);

/// (1/2) sum over ordered cell pairs of |u_i - u_j| * weights. With the
/// default exterior the function is extended by 0 outside the grid;
/// Exterior::None restricts the universe to the grid itself.
double k_variation(const DiscreteFunction& u, const KernelTable& table,
                   Exterior exterior = Exterior::Zero);

/// Cut mass between E and its complement; equals k_variation(chi_E) for
/// the default exterior mode.
double k_perimeter(const DiscreteSet& E, const KernelTable& table,
                   Exterior exterior = Exterior::Zero);

/// K-perimeter of E relative to A: (1/2) sum over A x A plus the full
/// sum over A x A^c (the zero exterior is part of A^c).
double k_perimeter_relative(const DiscreteSet& E, const DiscreteSet& A, const KernelTable& table);

/// Both sides of the integrable-kernel identity
///   P_K(E) = ||K||_L1 |E| - sum_{E x E} K,
/// evaluated on the table's lattice truncation. The table must come from
/// an integrable kernel (finite tail mass).
std::pair<double, double> integrable_identity(const DiscreteSet& E, const KernelTable& table);

struct CoareaTerm {
    double threshold;  ///< t with {u > t} equal to the listed superlevel
    double gap;        ///< distance to the next function value
    double perimeter;  ///< P_K({u > t})
};

/// Level decomposition of a quantized function: sum of gap * perimeter
/// equals the K-variation exactly under the same exterior mode. Negative
/// values are handled through complement bookkeeping of the zero exterior.
std::vector<CoareaTerm> coarea_decompose(const DiscreteFunction& u, const KernelTable& table,
                                         Exterior exterior = Exterior::Zero);

struct EnergyBreakdown {
    double tv_term = 0.0;
    double fidelity_term = 0.0;
    double lambda = 0.0;
    double total = 0.0;
};

EnergyBreakdown functional_energy(const DiscreteFunction& u, const DiscreteFunction& f,
                                  double lambda, const WeightMeasure& nu, const KernelTable& table,
                                  Exterior exterior = Exterior::Zero);

EnergyBreakdown geometric_energy(const DiscreteSet& U, const DiscreteSet& E, double lambda,
                                 const WeightMeasure& nu, const KernelTable& table,
                                 Exterior exterior = Exterior::Zero);

} // namespace nlbv

#endif
