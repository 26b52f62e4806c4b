#ifndef NLBV_GEOM_HPP
#define NLBV_GEOM_HPP

#include <cmath>
#include <vector>

#include "nlbv/energy.hpp"
#include "nlbv/grid.hpp"
#include "nlbv/kernel.hpp"
#include "nlbv/maxflow.hpp"

namespace nlbv {

/// Fixed-point quantization of energies: 2^32 units per unit energy by
/// default, so nearly-tied energies compare reproducibly bit for bit.
struct FixedPointScale {
    double scale = 4294967296.0;

    cap_t quantize(double e) const {
        double v = e * scale;
        if (!(std::abs(v) < 9.0e18))
            throw CapacityOverflow("energy " + std::to_string(e) + " at scale " + std::to_string(scale));
        return cap_t(std::llround(v));
    }
    double to_real(cap_t v) const { return double(v) / scale; }
};

/// The discrete energy landscape on one grid: quantized pairwise weights,
/// per-cell exterior boundary mass, and the quantized weight measure.
/// Everything downstream (geometric/functional solvers, Cheeger, sweeps)
/// prices energies through one model instance, so exhaustive oracles can
/// reproduce the solver's optimum exactly.
class EnergyModel {
public:
    EnergyModel(const GridDomain& grid, const KernelTable& table, const WeightMeasure& nu,
                Exterior exterior = Exterior::Zero, FixedPointScale fp = {});

    const GridDomain& grid() const { return grid_; }
    const KernelTable& table() const { return table_; }
    const WeightMeasure& weight() const { return nu_; }
    Exterior exterior() const { return exterior_; }
    const FixedPointScale& fp() const { return fp_; }

    const std::vector<std::pair<Offset, cap_t>>& qweights() const { return qweights_; }
    cap_t qboundary(int i) const { return qboundary_[i]; }
    cap_t qnu(int i) const { return qnu_[i]; }
    cap_t nu_fp(const DiscreteSet& set) const;
    cap_t nu_total_fp() const;

    /// Fidelity unit for cell i at a given lambda.
    cap_t lambda_unit(int i, double lambda) const {
        return fp_.quantize(lambda * nu_.density()[i] * grid_.cell_measure());
    }

    /// Quantized K-perimeter; the exterior flag overrides the model mode
    /// (used for complement bookkeeping).
    cap_t perimeter_fp(const DiscreteSet& set) const { return perimeter_fp(set, exterior_); }
    cap_t perimeter_fp(const DiscreteSet& set, Exterior exterior) const;

    /// Quantized geometric energy of a candidate U for datum E.
    cap_t geometric_energy_fp(const DiscreteSet& U, const DiscreteSet& E, double lambda,
                              bool exterior_in_datum = false) const;

    /// Cut problem whose minimizers are the solutions of the geometric
    /// problem for datum E. With exterior_in_datum the infinite exterior
    /// belongs to the datum (and to every solution).
    CutProblem build_geometric_cut(const DiscreteSet& E, double lambda,
                                   bool exterior_in_datum = false) const;

    /// Truncation bookkeeping: the energy mass ignored beyond the window,
    /// bounded by nu(support) * tail_mass.
    double truncation_error_bound(const DiscreteSet& support) const {
        return std::isfinite(table_.tail_mass()) ? nu_.measure(support) * table_.tail_mass() : kInf;
    }

private:
    GridDomain grid_;
    KernelTable table_;
    WeightMeasure nu_;
    Exterior exterior_;
    FixedPointScale fp_;
    std::vector<std::pair<Offset, cap_t>> qweights_;
    std::vector<cap_t> qboundary_, qnu_;
};

struct GeomSolution {
    DiscreteSet minimal;
    DiscreteSet maximal;
    EnergyBreakdown energy; ///< real-valued breakdown of the minimal solution
    cap_t energy_fp = 0;    ///< exact optimum at fixed-point resolution
    double lambda = 0.0;
};

/// Exact minimal and maximal minimizers of P_K(U) + lambda nu(E ^ U).
GeomSolution solve_geometric(const DiscreteSet& E, double lambda, const EnergyModel& model,
                             bool exterior_in_datum = false);

/// Solves for E and for its complement (with exterior bookkeeping) and
/// checks the complement identity between extremal solutions.
bool verify_complement(const DiscreteSet& E, double lambda, const EnergyModel& model);

/// For nested data E2 subset of E1, extremal solutions nest the same way.
bool verify_comparison(const DiscreteSet& E2, const DiscreteSet& E1, double lambda,
                       const EnergyModel& model);

/// Union and intersection of two known solutions are solutions.
bool verify_lattice_closure(const DiscreteSet& E, double lambda, const EnergyModel& model,
                            const DiscreteSet& U1, const DiscreteSet& U2);

} // namespace nlbv

#endif
