#ifndef NLBV_CHEEGER_HPP
#define NLBV_CHEEGER_HPP

#include <cstdint>
#include <vector>

#include "nlbv/geom.hpp"

namespace nlbv {

struct CheegerTraceStep {
    double ratio = 0.0;           ///< h_k before the linearized solve
    double linearized_min = 0.0;  ///< min of P_K(U) - h_k nu(U), real units
    std::int64_t set_cells = 0;   ///< cells of the minimal minimizer
};

/// Normalized-flow lower-bound certificate extracted from the final cut.
/// Pair flows are listed in the model's deterministic pair order; kappa
/// carries the flow injected from the zero exterior. All quantities are
/// scaled by the denominator n_star, so validation is exact in integers.
struct CheegerCertificate {
    cap_t p_star = 0; ///< numerator of h at fixed-point resolution
    cap_t n_star = 0; ///< denominator of h
    std::vector<cap_t> pair_flow;
    std::vector<cap_t> exterior_flow;
};

struct CheegerResult {
    double h = 0.0;
    cap_t h_num = 0, h_den = 0; ///< h as an exact ratio of fixed-point integers
    DiscreteSet cheeger_set;
    std::vector<CheegerTraceStep> trace;
    CheegerCertificate certificate;
};

/// (K,nu)-Cheeger constant and set of Omega by Dinkelbach iteration on the
/// min-cut oracle: each step minimizes P_K(U) - h_k nu(U) over U inside
/// Omega exactly (capacities cross-multiplied by the current denominator).
CheegerResult cheeger_solve(const DiscreteSet& omega, const EnergyModel& model);

/// Replays the certificate: capacity feasibility |phi| <= weights, and
/// discrete divergence >= h * nu at every cell of Omega. Exact integer
/// checks; a tampered flow is rejected.
bool certificate_check(const CheegerResult& result, const DiscreteSet& omega,
                       const EnergyModel& model);

/// Normalized sup norm max |phi_ij| / weights_ij of the certificate.
double certificate_sup_norm(const CheegerResult& result, const EnergyModel& model);

struct CalibrabilityResult {
    bool is_calibrable = false;
    double gap = 0.0; ///< h - P_K(E)/nu(E), always <= 0
    CheegerResult cheeger;
};

/// E is calibrable when it is its own Cheeger set (ratio equality at
/// fixed-point resolution also accepted).
CalibrabilityResult calibrability_check(const DiscreteSet& E, const EnergyModel& model);

struct FaberKrahnResult {
    double h_omega = 0.0;
    double h_ball = 0.0;
    double tolerance = 0.0;
    bool ok = false;
};

/// h(Omega) >= h(discrete ball of equal cell count), up to rasterization
/// slack. Requires a constant weight density.
FaberKrahnResult faber_krahn_check(const DiscreteSet& omega, const EnergyModel& model);

struct EigenRelationReport {
    bool indicator_ratio_matches = false; ///< [chi_C]/nu(C) = h exactly
    bool random_ratios_above = false;     ///< Rayleigh ratios >= h for random u >= 0 in Omega
    bool achiever_levels_optimal = false; ///< level sets of ratio achievers are Cheeger sets
    int random_checked = 0;
};

EigenRelationReport eigen_relation_check(const DiscreteSet& omega, const EnergyModel& model,
                                         int random_count, std::uint64_t seed);

struct LinfBoundResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

/// Where the isoperimetric function in the sup bound comes from. Kernel
/// uses beta_K (its own fine rasterization); Lattice prices the equal-
/// count prefix ball through the model's own table, which keeps the
/// equality case of the bound exact at finite spacing.
enum class BetaSource { Kernel, Lattice };

/// Sup bound for eigenfunction candidates via the isoperimetric function:
/// ||u||_inf <= (w_hi |Omega|^{2-q/n} h / beta_K(|Omega|))^{n/(q-n)} ||u||_1.
/// The beta error enters the bound conservatively.
LinfBoundResult linf_bound_check(const DiscreteSet& omega, const EnergyModel& model,
                                 const Kernel& kernel, const DiscreteFunction& u,
                                 BetaSource source = BetaSource::Kernel);

/// Boundary-touching diagnostic: eroding the Cheeger set by one cell
/// never improves the ratio; reports whether erosion strictly worsens it.
struct ErosionDiagnostic {
    bool erosion_possible = false;
    bool ratio_strictly_worse = false;
};
ErosionDiagnostic erosion_diagnostic(const CheegerResult& result, const EnergyModel& model);

} // namespace nlbv

#endif
