#ifndef NLBV_KERNEL_HPP
#define NLBV_KERNEL_HPP

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlbv/errors.hpp"
#include "nlbv/grid.hpp"

namespace nlbv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Volume of the unit ball and surface coefficient n*|B_1| in dimension n.
double unit_ball_volume(int dim);
double sphere_coefficient(int dim);
inline double ball_volume(int dim, double r) {
    return unit_ball_volume(dim) * (dim == 1 ? r : r * r);
}
/// Radius of the ball with given volume.
double ball_radius_of_volume(int dim, double volume);

enum class KernelFamily {
    Fractional,          ///< |x|^{-n-s}, s in (0,1)
    TwoExponent,         ///< |x|^{-n-s0} near 0, |x|^{-n-s1} beyond 1
    Logarithmic,         ///< (1-log|x|)^{-alpha} |x|^{-n} on the unit ball
    FracLog,             ///< |x|^{-n-s}(1-log|x|)^{-alpha} on the unit ball
    TruncatedFractional, ///< |x|^{-n-s} up to a cutoff radius
    ConstantBall,        ///< indicator of a ball
    Custom,              ///< sampled radial profile, log-linear interpolation
};

const char* family_name(KernelFamily f);

struct KernelSpec {
    KernelFamily family = KernelFamily::Fractional;
    int dim = 1;
    double s = 0.0;
    double s0 = 0.0, s1 = 0.0;
    double alpha = 0.0;
    double cutoff = 0.0;
    double radius = 0.0;
    std::vector<double> custom_radii;
    std::vector<double> custom_values; ///< kernel values K at the sample radii

    static KernelSpec fractional(double s, int dim);
    static KernelSpec two_exponent(double s0, double s1, int dim);
    static KernelSpec logarithmic(double alpha, int dim);
    static KernelSpec fraclog(double s, double alpha, int dim);
    static KernelSpec truncated_fractional(double s, double cutoff, int dim);
    static KernelSpec constant_ball(double radius, int dim);
    static KernelSpec custom(std::vector<double> radii, std::vector<double> values, int dim);
};

/// Parse/serialize kernel specs from the CLI JSON format, e.g.
/// {"family":"fractional","s":0.5,"n":2,"window":7}. The optional window
/// hint is returned alongside the spec.
std::pair<KernelSpec, std::optional<int>> kernel_spec_from_json(const std::string& text);
std::string kernel_spec_to_json(const KernelSpec& spec, std::optional<int> window = std::nullopt);

/// Structural assumption flags with the decay/doubling data. For the
/// built-in families these are the closed-form classifications; for
/// custom profiles they are sample-based estimates.
struct KernelReport {
    bool is_symmetric = true;
    bool is_radial = true;
    bool is_far_integrable = false; ///< integrable away from the origin
    bool is_nts = false;            ///< (1 ^ |x|) K integrable
    bool is_non_integrable = false;
    bool is_positive = false;       ///< strictly positive everywhere
    bool inf_positive = false;      ///< bounded below near the origin
    bool strict_radial_decay = false; ///< radial with strictly decreasing profile near 0

    std::optional<double> dec_exponent;      ///< largest q with K(x)|x|^q monotone
    double doubling_radius = 0.0;            ///< D, may be +inf
    std::optional<double> doubling_constant; ///< C, reported when D = +inf
    std::optional<double> doubling_exponent; ///< p = log2(C)

    bool analytic = true; ///< false when estimated from probe samples
    std::vector<std::string> notes;

    std::string pretty(int dim) const;
};

/// Evaluable radial kernel. Immutable after construction; safe for shared
/// concurrent reads.
class Kernel {
public:
    explicit Kernel(KernelSpec spec);

    const KernelSpec& spec() const { return spec_; }
    int dim() const { return spec_.dim; }

    /// Kernel value at radius rho > 0 (equals upsilon(rho)/rho^n).
    double radial(double rho) const;

    /// Radius beyond which the kernel vanishes, +inf if it never does.
    double support_radius() const { return support_radius_; }
    bool far_integrable() const { return far_integrable_; }
    bool non_integrable() const { return non_integrable_; }
    /// Total mass; +inf for non-integrable kernels.
    double l1_mass() const;
    /// Doubling radius D of the closed-form classification.
    double doubling_radius() const { return doubling_radius_; }

private:
    KernelSpec spec_;
    double support_radius_ = kInf;
    double doubling_radius_ = kInf;
    bool far_integrable_ = true;
    bool non_integrable_ = true;
    std::vector<double> log_radii_, log_values_; // custom profile in log-log coordinates
};

/// Validates the family invariants and rejects kernels whose decay
/// exponent reaches n+1 (only constants have finite energy there).
Kernel make_kernel(const KernelSpec& spec);

/// K at a physical offset; throws ZeroOffset at the origin.
double eval_kernel(const Kernel& kernel, std::array<double, 2> x);
double eval_kernel(const Kernel& kernel, double x);

/// Mass of the kernel on the annulus eps < |x| < R. R may be +inf.
/// Closed forms for the built-in families; adaptive quadrature otherwise,
/// relative error below 1e-8.
double phi_K(const Kernel& kernel, double eps, double R);

/// Smoothing modulus: integral over the unit ball of the fixed bump
/// profile (1-|y|^2)^4 (unit mass) divided by phi_K(2 eps |y|, R).
double ell_K(const Kernel& kernel, double eps, double R, int mollifier_samples = 512);

KernelReport check_assumptions(const Kernel& kernel, const std::vector<double>& probe_radii = {});

struct BetaResult {
    double value = 0.0;          ///< K-perimeter of the ball of the requested volume
    double error_estimate = 0.0; ///< refinement difference plus far-field slack
    double spacing = 0.0;        ///< finest grid spacing used
};

/// Isoperimetric function: K-perimeter of the rasterized ball of volume v,
/// computed at refinement_levels successively halved spacings.
BetaResult beta_K(const Kernel& kernel, double volume, int refinement_levels = 2);

/// Translation-invariant pairwise weights on grid offsets inside the
/// truncation window: weights[D] = K(D*h) * h^{2n}, zero entries pruned.
class KernelTable {
public:
    KernelTable(int dim, double spacing, int window,
                std::vector<std::pair<Offset, double>> weights, double tail_mass,
                bool integrable_kernel);

    int dim() const { return dim_; }
    double spacing() const { return h_; }
    int window() const { return window_; }
    double tail_mass() const { return tail_mass_; }
    bool integrable_kernel() const { return integrable_; }
    const std::vector<std::pair<Offset, double>>& weights() const { return weights_; }

    /// Sum of all tabulated weights (pairwise mass inside the window).
    double total_weight() const { return total_weight_; }

    void require_grid(const GridDomain& grid) const {
        if (grid.dim() != dim_ || grid.spacing() != h_)
            throw GridMismatch("kernel table built for a different grid geometry");
    }

private:
    int dim_;
    double h_;
    int window_;
    double tail_mass_;
    bool integrable_;
    double total_weight_;
    std::vector<std::pair<Offset, double>> weights_;
};

KernelTable tabulate_offsets(const Kernel& kernel, const GridDomain& grid, int window);

} // namespace nlbv

#endif
