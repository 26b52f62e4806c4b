#ifndef NLBV_FIDELITY_HPP
#define NLBV_FIDELITY_HPP

#include <vector>

#include "nlbv/cheeger.hpp"
#include "nlbv/func.hpp"
#include "nlbv/geom.hpp"

namespace nlbv {

struct SweepRecord {
    double lambda = 0.0;
    EnergyBreakdown energy;
    double mu = 0.0; ///< nu-distance of the minimal solution to the datum
    std::int64_t n_min = 0, n_max = 0;
    bool is_jump_candidate = false; ///< extremal solutions differ at this lambda
};

std::vector<SweepRecord> sweep_geometric(const DiscreteSet& datum,
                                         const std::vector<double>& lambdas,
                                         const EnergyModel& model, int threads = 0);

std::vector<SweepRecord> sweep_functional(const DiscreteFunction& datum,
                                          const std::vector<double>& lambdas,
                                          const EnergyModel& model, int levels, int threads = 0);

struct BallThreshold {
    double lambda_star = 0.0; ///< bisection threshold for "minimal solution is empty"
    double h = 0.0;           ///< Cheeger constant from the Dinkelbach path
    double tol = 0.0;
};

/// Two-path consistency probe: the fidelity threshold at which the
/// minimal solution stops being empty, against the Cheeger constant.
BallThreshold ball_threshold(const DiscreteSet& ball, const EnergyModel& model, double tol);

/// 2 P_K(B_r) / (w_lo |B_r|) for the rasterized ball of radius r centered
/// in the model grid; above it, ball data are reproduced exactly.
double high_fidelity_lambda(double r, const EnergyModel& model);

/// 2 phi_K(4R, D) / (w_hi * calibrated_C): below it, data supported in
/// B_R denoise to zero. D is the kernel's doubling radius.
double low_fidelity_bound(const Kernel& kernel, double R, double w_hi, double calibrated_C);

/// Smallest constant making the low-fidelity guarantee tight on a
/// reference ball of radius r_ref (its measured zero threshold).
double calibrate_lusin_constant(const Kernel& kernel, const EnergyModel& model,
                                const DiscreteSet& reference_ball, double r_ref, double tol);

struct RegimeReport {
    double h = 0.0;
    double eps = 0.0;              ///< probing offset, 64 fixed-point quanta
    bool below_empty = false;      ///< at h - eps both extremal solutions are empty
    bool tie_at_h = false;         ///< empty set and Cheeger set tie exactly at h
    bool above_is_datum = false;   ///< at h + eps the solution is the datum (calibrable case)
    bool functional_levels_cheeger = false; ///< binary datum at h: levels are Cheeger sets or empty
};

/// Classifies the solver output around the Cheeger constant of a convex
/// datum against the three fidelity regimes.
RegimeReport cheeger_lambda_regimes(const DiscreteSet& E, const EnergyModel& model);

} // namespace nlbv

#endif
