#ifndef NLBV_FUNC_HPP
#define NLBV_FUNC_HPP

#include <vector>

#include "nlbv/geom.hpp"

namespace nlbv {

/// Which extremal level solution to stack. Minimizers are not unique at
/// jump values of lambda; the minimal stack is the canonical answer and
/// the maximal stack is the dual extremal minimizer.
enum class Stacking { Minimal, Maximal };

struct FunctionalSolution {
    DiscreteFunction u;
    DiscreteFunction datum;          ///< the quantized datum that was solved exactly
    EnergyBreakdown energy;          ///< energy of u against that datum
    std::vector<double> thresholds;  ///< quantization thresholds (empty if f was already discrete)
    double quantization_bound = 0.0; ///< optimum is within lambda*nu(grid)*delta/2 of the unquantized one
    int level_solves = 0;
};

/// Exact minimizer of the functional energy for the quantized datum,
/// built by stacking nested per-level geometric solutions. Data crossing
/// zero are split into positive and negative parts.
FunctionalSolution solve_functional(const DiscreteFunction& f, double lambda,
                                    const EnergyModel& model, int levels,
                                    Stacking stacking = Stacking::Minimal, int threads = 0);

struct SolutionAlgebraReport {
    bool shift_exact = false;      ///< u(f+c) = u(f)+c, c one value gap
    bool flip_exact = false;       ///< u(-f) = -u(f)
    bool truncate_min_exact = false; ///< u(f ^ c) = u(f) ^ c
    bool truncate_max_exact = false; ///< u(f v c) = u(f) v c
    bool split_consistent = false; ///< u(f)^+ = u(f^+), u(f)^- = u(f^-)
    bool all() const {
        return shift_exact && flip_exact && truncate_min_exact && truncate_max_exact &&
               split_consistent;
    }
};

/// Re-solves shifted/flipped/truncated data on matched quantization grids
/// and compares with the transformed solution. Exact identities on
/// closed-grid models; on free-space models the shift test needs lambda
/// above the full-grid fidelity threshold.
SolutionAlgebraReport verify_solution_algebra(const DiscreteFunction& f, double lambda,
                                              const EnergyModel& model, int levels);

} // namespace nlbv

#endif
