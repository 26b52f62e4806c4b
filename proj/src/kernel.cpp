#include "nlbv/kernel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nlbv {

double unit_ball_volume(int dim) {
    if (dim == 1) return 2.0;
    if (dim == 2) return std::numbers::pi;
    throw InvalidParameter("dimension must be 1 or 2");
}

double sphere_coefficient(int dim) { return dim * unit_ball_volume(dim); }

double ball_radius_of_volume(int dim, double volume) {
    if (!(volume > 0)) throw InvalidParameter("ball volume must be positive");
    return std::pow(volume / unit_ball_volume(dim), 1.0 / dim);
}

const char* family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::Fractional: return "fractional";
        case KernelFamily::TwoExponent: return "two_exponent";
        case KernelFamily::Logarithmic: return "logarithmic";
        case KernelFamily::FracLog: return "fraclog";
        case KernelFamily::TruncatedFractional: return "truncated_fractional";
        case KernelFamily::ConstantBall: return "constant_ball";
        case KernelFamily::Custom: return "custom";
    }
    return "?";
}

KernelSpec KernelSpec::fractional(double s, int dim) {
    KernelSpec k; k.family = KernelFamily::Fractional; k.s = s; k.dim = dim; return k;
}
KernelSpec KernelSpec::two_exponent(double s0, double s1, int dim) {
    KernelSpec k; k.family = KernelFamily::TwoExponent; k.s0 = s0; k.s1 = s1; k.dim = dim; return k;
}
KernelSpec KernelSpec::logarithmic(double alpha, int dim) {
    KernelSpec k; k.family = KernelFamily::Logarithmic; k.alpha = alpha; k.dim = dim; return k;
}
KernelSpec KernelSpec::fraclog(double s, double alpha, int dim) {
    KernelSpec k; k.family = KernelFamily::FracLog; k.s = s; k.alpha = alpha; k.dim = dim; return k;
}
KernelSpec KernelSpec::truncated_fractional(double s, double cutoff, int dim) {
    KernelSpec k; k.family = KernelFamily::TruncatedFractional; k.s = s; k.cutoff = cutoff; k.dim = dim; return k;
}
KernelSpec KernelSpec::constant_ball(double radius, int dim) {
    KernelSpec k; k.family = KernelFamily::ConstantBall; k.radius = radius; k.dim = dim; return k;
}
KernelSpec KernelSpec::custom(std::vector<double> radii, std::vector<double> values, int dim) {
    KernelSpec k; k.family = KernelFamily::Custom;
    k.custom_radii = std::move(radii); k.custom_values = std::move(values); k.dim = dim;
    return k;
}

Kernel::Kernel(KernelSpec spec) : spec_(std::move(spec)) {
    if (spec_.dim != 1 && spec_.dim != 2) throw InvalidParameter("kernel dimension must be 1 or 2");
    const int n = spec_.dim;
    switch (spec_.family) {
        case KernelFamily::Fractional:
            if (!(spec_.s > 0.0 && spec_.s < 1.0))
                throw InvalidParameter("fractional exponent s must lie in (0,1)");
            break;
        case KernelFamily::TwoExponent:
            if (!(spec_.s0 >= 0.0 && spec_.s0 <= spec_.s1 && spec_.s1 <= 1.0))
                throw InvalidParameter("two-exponent kernel needs 0 <= s0 <= s1 <= 1");
            if (spec_.s0 >= 1.0)
                throw DegenerateKernel("decay exponent n+s0 >= n+1, only constants have finite energy");
            if (spec_.s1 == 0.0) far_integrable_ = false;
            break;
        case KernelFamily::Logarithmic:
            support_radius_ = 1.0;
            doubling_radius_ = 0.5;
            non_integrable_ = spec_.alpha <= 1.0;
            break;
        case KernelFamily::FracLog:
            if (!(spec_.s >= 0.0 && spec_.s < 1.0))
                throw InvalidParameter("fraclog exponent s must lie in [0,1)");
            support_radius_ = 1.0;
            doubling_radius_ = 0.5;
            non_integrable_ = spec_.s > 0.0 || spec_.alpha <= 1.0;
            break;
        case KernelFamily::TruncatedFractional:
            if (!(spec_.s > 0.0 && spec_.s < 1.0))
                throw InvalidParameter("fractional exponent s must lie in (0,1)");
            if (!(spec_.cutoff > 0.0)) throw InvalidParameter("cutoff radius must be positive");
            support_radius_ = spec_.cutoff;
            doubling_radius_ = spec_.cutoff / 2.0;
            break;
        case KernelFamily::ConstantBall:
            if (!(spec_.radius > 0.0)) throw InvalidParameter("ball radius must be positive");
            support_radius_ = spec_.radius;
            doubling_radius_ = spec_.radius / 2.0;
            non_integrable_ = false;
            break;
        case KernelFamily::Custom: {
            const auto& r = spec_.custom_radii;
            const auto& v = spec_.custom_values;
            if (r.size() < 2 || r.size() != v.size())
                throw InvalidParameter("custom profile needs >= 2 (radius, value) samples");
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (!(r[i] > 0.0) || (i > 0 && !(r[i] > r[i - 1])))
                    throw InvalidParameter("custom radii must be positive and strictly increasing");
                if (!(v[i] > 0.0) || !std::isfinite(v[i]))
                    throw InvalidParameter("custom values must be positive and finite");
            }
            support_radius_ = r.back();
            doubling_radius_ = r.back() / 2.0;
            log_radii_.resize(r.size());
            log_values_.resize(r.size());
            for (std::size_t i = 0; i < r.size(); ++i) {
                log_radii_[i] = std::log(r[i]);
                log_values_[i] = std::log(v[i]);
            }
            // near-origin slope decides integrability
            double m0 = (log_values_[1] - log_values_[0]) / (log_radii_[1] - log_radii_[0]);
            non_integrable_ = m0 <= -double(n);
            if (m0 <= -double(n) - 1.0)
                throw DegenerateKernel("custom profile decays at exponent >= n+1 near the origin");
            break;
        }
    }
}

double Kernel::radial(double rho) const {
    if (!(rho > 0)) throw ZeroOffset();
    const int n = spec_.dim;
    switch (spec_.family) {
        case KernelFamily::Fractional:
            return std::pow(rho, -double(n) - spec_.s);
        case KernelFamily::TwoExponent:
            return std::pow(rho, -double(n) - (rho <= 1.0 ? spec_.s0 : spec_.s1));
        case KernelFamily::Logarithmic:
            if (rho > 1.0) return 0.0;
            return std::pow(1.0 - std::log(rho), -spec_.alpha) * std::pow(rho, -double(n));
        case KernelFamily::FracLog:
            if (rho > 1.0) return 0.0;
            return std::pow(1.0 - std::log(rho), -spec_.alpha) * std::pow(rho, -double(n) - spec_.s);
        case KernelFamily::TruncatedFractional:
            if (rho > spec_.cutoff) return 0.0;
            return std::pow(rho, -double(n) - spec_.s);
        case KernelFamily::ConstantBall:
            return rho <= spec_.radius ? 1.0 : 0.0;
        case KernelFamily::Custom: {
            if (rho > support_radius_) return 0.0;
            double lr = std::log(rho);
            auto it = std::upper_bound(log_radii_.begin(), log_radii_.end(), lr);
            std::size_t hi = std::min<std::size_t>(
                std::max<std::ptrdiff_t>(1, it - log_radii_.begin()), log_radii_.size() - 1);
            std::size_t lo = hi - 1;
            double t = (lr - log_radii_[lo]) / (log_radii_[hi] - log_radii_[lo]);
            return std::exp(log_values_[lo] + t * (log_values_[hi] - log_values_[lo]));
        }
    }
    return 0.0;
}

Kernel make_kernel(const KernelSpec& spec) { return Kernel(spec); }

double eval_kernel(const Kernel& kernel, std::array<double, 2> x) {
    double rho = kernel.dim() == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
    if (rho == 0.0) throw ZeroOffset();
    return kernel.radial(rho);
}

double eval_kernel(const Kernel& kernel, double x) { return eval_kernel(kernel, {x, 0.0}); }

namespace {

// integral of rho^{-1-s} over [a,b], b may be +inf
double power_annulus(double a, double b, double s) {
    if (b <= a) return 0.0;
    if (s > 0.0) {
        double hi = std::isinf(b) ? 0.0 : std::pow(b, -s);
        return (std::pow(a, -s) - hi) / s;
    }
    return std::isinf(b) ? kInf : std::log(b / a);
}

// integral of u^{-alpha} over [p,q] (after the substitution u = 1 - log rho)
double log_annulus(double p, double q, double alpha) {
    if (q <= p) return 0.0;
    if (alpha == 1.0) return std::isinf(q) ? kInf : std::log(q / p);
    double hi = std::isinf(q) ? (alpha > 1.0 ? 0.0 : kInf) : std::pow(q, 1.0 - alpha);
    if (std::isinf(hi)) return kInf;
    return (hi - std::pow(p, 1.0 - alpha)) / (1.0 - alpha);
}

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole,
                                std::max(tol, 1e-300), 48);
}

// mass of the fraclog profile: integral over [a,b] of rho^{-1-s} (1-log rho)^{-alpha}
double fraclog_mass(double a, double b, double s, double alpha) {
    b = std::min(b, 1.0);
    if (b <= a) return 0.0;
    if (s == 0.0) return log_annulus(1.0 - std::log(b), 1.0 - std::log(a), alpha);
    if (alpha == 0.0) return power_annulus(a, b, s);
    double ulo = 1.0 - std::log(b), uhi = 1.0 - std::log(a);
    auto f = [s, alpha](double u) { return std::exp(s * (u - 1.0)) * std::pow(u, -alpha); };
    double scale = f(uhi) * std::max(1.0, uhi - ulo);
    return adaptive_simpson(f, ulo, uhi, 1e-12 * std::max(scale, 1.0));
}

// integral of K rho^{n-1} over [a,b] for a custom log-linear profile;
// below the first sample the first segment's slope is extrapolated
double custom_shell_mass(const Kernel& k, double a, double b) {
    const auto& r = k.spec().custom_radii;
    const auto& v = k.spec().custom_values;
    const int n = k.dim();
    b = std::min(b, r.back());
    if (b <= a) return 0.0;
    double total = 0.0;
    for (std::size_t seg = 0; seg < r.size(); ++seg) {
        double lo = seg == 0 ? 0.0 : r[seg - 1];
        double hi = r[seg];
        double x0 = std::max(a, lo), x1 = std::min(b, hi);
        if (x1 <= x0) continue;
        std::size_t i0 = seg == 0 ? 0 : seg - 1;
        double m = (std::log(v[i0 + 1]) - std::log(v[i0])) /
                   (std::log(r[i0 + 1]) - std::log(r[i0]));
        double c = v[i0] * std::pow(r[i0], -m); // K = c rho^m on the segment
        double e = m + n;
        if (std::abs(e) < 1e-14) total += c * std::log(x1 / x0);
        else total += c * (std::pow(x1, e) - std::pow(x0, e)) / e;
    }
    return total;
}

} // namespace

double phi_K(const Kernel& kernel, double eps, double R) {
    if (!(eps > 0.0) || !(R > eps)) throw BadRange("phi_K needs 0 < eps < R");
    const int n = kernel.dim();
    const double cn = sphere_coefficient(n);
    const KernelSpec& sp = kernel.spec();
    switch (sp.family) {
        case KernelFamily::Fractional:
            return cn * power_annulus(eps, R, sp.s);
        case KernelFamily::TwoExponent: {
            double near = power_annulus(std::min(eps, 1.0), std::min(R, 1.0), sp.s0);
            double far = power_annulus(std::max(eps, 1.0), std::max(R, 1.0), sp.s1);
            return cn * (near + far);
        }
        case KernelFamily::Logarithmic: {
            double b = std::min(R, 1.0);
            if (b <= eps) return 0.0;
            return cn * log_annulus(1.0 - std::log(b), 1.0 - std::log(eps), sp.alpha);
        }
        case KernelFamily::FracLog:
            return cn * fraclog_mass(eps, R, sp.s, sp.alpha);
        case KernelFamily::TruncatedFractional:
            return cn * power_annulus(std::min(eps, sp.cutoff), std::min(R, sp.cutoff), sp.s);
        case KernelFamily::ConstantBall: {
            double b = std::min(R, sp.radius);
            if (b <= eps) return 0.0;
            return ball_volume(n, b) - ball_volume(n, eps);
        }
        case KernelFamily::Custom:
            return cn * custom_shell_mass(kernel, eps, R);
    }
    return 0.0;
}

double Kernel::l1_mass() const {
    if (!far_integrable_ || non_integrable_) return kInf;
    const double cn = sphere_coefficient(spec_.dim);
    switch (spec_.family) {
        case KernelFamily::ConstantBall:
            return ball_volume(spec_.dim, spec_.radius);
        case KernelFamily::Logarithmic:
            return cn * log_annulus(1.0, kInf, spec_.alpha);
        case KernelFamily::FracLog: // integrable only when s = 0
            return cn * log_annulus(1.0, kInf, spec_.alpha);
        case KernelFamily::Custom: {
            // finite iff the near-origin slope beats -n; extend the first
            // segment down to 0 and integrate the interpolant
            double m0 = (log_values_[1] - log_values_[0]) / (log_radii_[1] - log_radii_[0]);
            if (m0 <= -double(spec_.dim)) return kInf;
            return cn * custom_shell_mass(*this, 0.0, support_radius_);
        }
        default:
            return kInf;
    }
}

double ell_K(const Kernel& kernel, double eps, double R, int mollifier_samples) {
    if (!(eps > 0.0) || !(R > 2.0 * eps)) throw BadRange("ell_K needs 0 < eps < R/2");
    if (mollifier_samples < 8) mollifier_samples = 8;
    const int n = kernel.dim();
    const double cn = sphere_coefficient(n);
    // bump (1-|y|^2)^4 normalized to unit mass on the unit ball
    const double bump_mass = n == 1 ? 2.0 * 128.0 / 315.0 : std::numbers::pi / 5.0;
    auto integrand = [&](double r) {
        if (r <= 0.0) r = 1e-300;
        double phi = phi_K(kernel, 2.0 * eps * r, R);
        if (phi <= 0.0) return kInf; // kernel vanishes on the whole annulus
        double bump = std::pow(1.0 - r * r, 4) / bump_mass;
        return cn * std::pow(r, n - 1) * bump / phi;
    };
    // midpoint rule; integrand is continuous (it tends to 0 at r = 0 for
    // non-integrable kernels, and is finite there otherwise)
    double sum = 0.0;
    const int m = mollifier_samples;
    for (int i = 0; i < m; ++i) {
        double r = (i + 0.5) / m;
        double v = integrand(r);
        if (std::isinf(v)) return kInf;
        sum += v;
    }
    return sum / m;
}

namespace {

void classify_builtin(const Kernel& k, KernelReport& rep) {
    const KernelSpec& sp = k.spec();
    const int n = sp.dim;
    rep.is_far_integrable = k.far_integrable();
    rep.is_non_integrable = k.non_integrable();
    rep.doubling_radius = k.doubling_radius();
    switch (sp.family) {
        case KernelFamily::Fractional:
            rep.is_nts = true;
            rep.is_positive = true;
            rep.inf_positive = true;
            rep.dec_exponent = n + sp.s;
            rep.doubling_constant = std::pow(2.0, n + sp.s);
            break;
        case KernelFamily::TwoExponent:
            rep.is_nts = sp.s1 > 0.0 && sp.s0 < 1.0;
            rep.is_positive = true;
            rep.inf_positive = true;
            rep.dec_exponent = n + sp.s0;
            rep.doubling_constant = std::pow(2.0, n + sp.s1);
            break;
        case KernelFamily::Logarithmic:
        case KernelFamily::FracLog: {
            double s = sp.family == KernelFamily::Logarithmic ? 0.0 : sp.s;
            rep.is_nts = true;
            rep.is_positive = false;
            rep.inf_positive = true;
            if (sp.alpha <= 0.0) {
                rep.dec_exponent = n + s;
            } else if (sp.alpha < n + s) {
                rep.dec_exponent = n + s - sp.alpha;
                rep.notes.push_back("log correction: decay exponent capped at n+s-alpha; "
                                    "the boundary value n+s is undetermined for alpha > 0");
            } else if (sp.alpha == n + s) {
                rep.dec_exponent = 0.0;
            } else {
                rep.notes.push_back("profile increases near the support boundary; no decay exponent");
            }
            break;
        }
        case KernelFamily::TruncatedFractional:
            rep.is_nts = true;
            rep.is_positive = false;
            rep.inf_positive = true;
            rep.dec_exponent = n + sp.s;
            break;
        case KernelFamily::ConstantBall:
            rep.is_nts = true;
            rep.is_positive = false;
            rep.inf_positive = true;
            rep.dec_exponent = 0.0;
            break;
        case KernelFamily::Custom:
            break; // handled by the sampling path
    }
    if (rep.doubling_constant) rep.doubling_exponent = std::log2(*rep.doubling_constant);
}

void estimate_from_samples(const Kernel& k, const std::vector<double>& probes, KernelReport& rep) {
    rep.analytic = false;
    rep.notes.push_back("flags estimated from probe samples, not proved");
    rep.is_far_integrable = k.far_integrable();
    rep.is_non_integrable = k.non_integrable();
    rep.doubling_radius = k.doubling_radius();
    const int n = k.dim();

    std::vector<double> r = probes;
    if (r.empty()) {
        double hi = std::isinf(k.support_radius()) ? 8.0 : k.support_radius();
        for (int i = 0; i < 24; ++i) r.push_back(hi * std::pow(2.0, i - 20));
    }
    if (r.size() < 2) r.push_back(2.0 * r.front());
    double q_hat = kInf;
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        double k0 = k.radial(r[i]), k1 = k.radial(r[i + 1]);
        if (k1 <= 0.0 || k0 <= 0.0) continue;
        double slope = std::log(k0 / k1) / std::log(r[i + 1] / r[i]);
        q_hat = std::min(q_hat, slope);
        if (slope < 0.0) monotone = false;
    }
    if (monotone && std::isfinite(q_hat)) rep.dec_exponent = std::max(0.0, q_hat);
    if (std::isinf(k.doubling_radius())) {
        double c_hat = 0.0;
        for (double rho : r) {
            double k2 = k.radial(2.0 * rho);
            if (k2 > 0.0) c_hat = std::max(c_hat, k.radial(rho) / k2);
        }
        if (c_hat >= 1.0) {
            rep.doubling_constant = c_hat;
            rep.doubling_exponent = std::log2(c_hat);
        }
    }
    rep.is_positive = std::isinf(k.support_radius());
    rep.inf_positive = k.radial(r.front()) > 0.0 &&
                       k.radial(r.front()) >= k.radial(std::min(1.0, r.back()));
    // near-origin moment checks from the first-segment slope
    double m0 = std::log(k.radial(r[1]) / k.radial(r[0])) / std::log(r[1] / r[0]);
    rep.is_nts = m0 > -double(n) - 1.0 && rep.is_far_integrable;
}

} // namespace

KernelReport check_assumptions(const Kernel& kernel, const std::vector<double>& probe_radii) {
    for (double p : probe_radii)
        if (!(p > 0.0)) throw InvalidParameter("probe radii must be positive");
    for (std::size_t i = 0; i + 1 < probe_radii.size(); ++i)
        if (!(probe_radii[i] < probe_radii[i + 1]))
            throw InvalidParameter("probe radii must be strictly increasing");
    KernelReport rep;
    if (kernel.spec().family == KernelFamily::Custom)
        estimate_from_samples(kernel, probe_radii, rep);
    else
        classify_builtin(kernel, rep);
    rep.strict_radial_decay = rep.is_radial && rep.dec_exponent && *rep.dec_exponent > 0.0;
    if (rep.is_nts && rep.dec_exponent && !(*rep.dec_exponent < kernel.dim() + 1.0))
        throw DegenerateKernel("reported decay exponent must stay below n+1 for Nts kernels");
    return rep;
}

std::string KernelReport::pretty(int dim) const {
    std::ostringstream os;
    auto flag = [&](const char* name, bool v) { os << "  " << name << ": " << (v ? "yes" : "no") << "\n"; };
    os << "kernel assumptions (n=" << dim << ", " << (analytic ? "closed-form" : "estimated") << ")\n";
    flag("symmetric        (Sym)", is_symmetric);
    flag("radial           (Rad)", is_radial);
    flag("strict decay     (Rad+)", strict_radial_decay);
    flag("far integrable   (Far)", is_far_integrable);
    flag("not too singular (Nts)", is_nts);
    flag("non-integrable   (Nint)", is_non_integrable);
    flag("positive         (Pos)", is_positive);
    flag("inf near origin  (Inf)", inf_positive);
    os << "  decay exponent q: ";
    if (dec_exponent) os << *dec_exponent << "\n"; else os << "undetermined\n";
    os << "  doubling radius D: ";
    if (std::isinf(doubling_radius)) os << "inf\n"; else os << doubling_radius << "\n";
    if (doubling_constant)
        os << "  doubling constant C: " << *doubling_constant
           << "  (exponent p = " << *doubling_exponent << ")\n";
    for (const auto& nte : notes) os << "  note: " << nte << "\n";
    return os.str();
}

namespace {

// Offsets with 0 < |D|_2 <= W, plus the lattice kernel sum over them.
std::vector<Offset> euclidean_window(int dim, int W) {
    std::vector<Offset> out;
    if (dim == 1) {
        for (int dx = -W; dx <= W; ++dx)
            if (dx != 0) out.push_back({dx, 0});
        return out;
    }
    const std::int64_t W2 = std::int64_t(W) * W;
    for (int dy = -W; dy <= W; ++dy)
        for (int dx = -W; dx <= W; ++dx)
            if ((dx || dy) && std::int64_t(dx) * dx + std::int64_t(dy) * dy <= W2)
                out.push_back({dx, dy});
    return out;
}

// deterministic pairwise summation over a fixed-order value buffer
double pairwise_sum(std::vector<double>& buf, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += buf[i];
        return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(buf, lo, mid) + pairwise_sum(buf, mid, hi);
}

double rasterized_ball_perimeter(const Kernel& kernel, double r, double h, double* far_slack) {
    const int n = kernel.dim();
    const double h2n = std::pow(h, 2 * n);
    const double hn = std::pow(h, n);
    // rasterize the ball on a centered grid with a 2-cell margin
    int half = int(std::ceil(r / h)) + 2;
    int nx = 2 * half + 1;
    GridDomain grid = n == 1 ? GridDomain::line(nx, h, -half * h)
                             : GridDomain::plane(nx, nx, h, {-half * h, -half * h});
    DiscreteSet ball = make_ball_set(grid, {0.0, 0.0}, r);
    const auto cells = ball.cells();
    const double count = double(ball.cell_count());

    // every pair offset inside the ball has |D| <= 2r/h + 1
    int Wpair = int(std::ceil(2.0 * r / h)) + 1;

    double support = kernel.support_radius();
    int Wmass;
    double far_mass = 0.0; // per-cell kernel mass beyond the lattice window
    if (std::isfinite(support)) {
        // compactly supported: the lattice window covers the whole kernel
        Wmass = int(std::ceil(support / h)) + 1;
    } else {
        Wmass = std::max(Wpair + 2, int(std::ceil(4.0 * r / h)));
        far_mass = phi_K(kernel, Wmass * h, kInf);
    }

    // lattice mass of the kernel over the window (cell i against all of Z^n)
    auto window = euclidean_window(n, Wmass);
    std::vector<double> terms;
    terms.reserve(window.size());
    for (const auto& d : window) {
        double rho = h * (n == 1 ? std::abs(d.dx) : std::hypot(double(d.dx), double(d.dy)));
        double v = kernel.radial(rho);
        if (v > 0.0) terms.push_back(v);
    }
    std::sort(terms.begin(), terms.end());
    double lattice_mass = pairwise_sum(terms, 0, terms.size());

    // self-interaction of the ball, grouped by offset
    auto pair_window = euclidean_window(n, std::min(Wpair, Wmass));
    double self = 0.0;
    {
        std::vector<double> vals;
        vals.reserve(pair_window.size());
        for (const auto& d : pair_window) {
            std::int64_t pairs = 0;
            for (int i : cells) {
                int jx = grid.cell_x(i) + d.dx, jy = grid.cell_y(i) + d.dy;
                if (grid.contains(jx, jy) && ball.test(grid.index(jx, jy))) ++pairs;
            }
            if (pairs == 0) continue;
            double rho = h * (n == 1 ? std::abs(d.dx) : std::hypot(double(d.dx), double(d.dy)));
            vals.push_back(double(pairs) * kernel.radial(rho));
        }
        std::sort(vals.begin(), vals.end());
        self = pairwise_sum(vals, 0, vals.size());
    }

    // cut mass = count * (window mass) - self interactions, plus the
    // analytic far field (all far cells lie outside the ball)
    double per = h2n * (count * lattice_mass - self) + count * hn * far_mass;
    if (far_slack) {
        *far_slack = 0.0;
        if (far_mass > 0.0) {
            double lo = phi_K(kernel, std::max((Wmass - 1) * h, 1e-12), kInf);
            double hi2 = phi_K(kernel, (Wmass + 1) * h, kInf);
            *far_slack = 0.5 * count * hn * (lo - hi2);
        }
    }
    return per;
}

} // namespace

BetaResult beta_K(const Kernel& kernel, double volume, int refinement_levels) {
    if (!(volume > 0.0)) throw InvalidParameter("beta_K needs a positive volume");
    if (refinement_levels < 1) throw InvalidParameter("beta_K needs refinement_levels >= 1");
    if (!kernel.far_integrable()) return {kInf, kInf, 0.0}; // perimeter of any bounded set is +inf
    const double r = ball_radius_of_volume(kernel.dim(), volume);
    int levels = std::max(refinement_levels, 2) + 1; // one extra coarse level for the estimate
    double prev = 0.0, cur = 0.0, slack = 0.0, h = 0.0;
    for (int l = 1; l < levels; ++l) {
        int cells_per_radius = 6 << l;
        h = r / cells_per_radius;
        prev = cur;
        cur = rasterized_ball_perimeter(kernel, r, h, &slack);
    }
    return {cur, std::abs(cur - prev) + slack, h};
}

KernelTable::KernelTable(int dim, double spacing, int window,
                         std::vector<std::pair<Offset, double>> weights, double tail_mass,
                         bool integrable_kernel)
    : dim_(dim), h_(spacing), window_(window), tail_mass_(tail_mass),
      integrable_(integrable_kernel), weights_(std::move(weights)) {
    total_weight_ = 0.0;
    for (auto& [off, w] : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidParameter("table weights must be finite and nonnegative");
        total_weight_ += w;
    }
}

KernelTable tabulate_offsets(const Kernel& kernel, const GridDomain& grid, int window) {
    if (window < 1) throw WindowTooSmall("window must span at least one cell");
    const int n = kernel.dim();
    if (n != grid.dim()) throw GridMismatch("kernel dimension vs grid dimension");
    const double h = grid.spacing();
    const double h2n = std::pow(h, 2 * n);
    std::vector<std::pair<Offset, double>> weights;
    const int wy = n == 2 ? window : 0;
    for (int dy = -wy; dy <= wy; ++dy) {
        for (int dx = -window; dx <= window; ++dx) {
            if (dx == 0 && dy == 0) continue;
            double rho = h * (n == 1 ? std::abs(dx) : std::hypot(double(dx), double(dy)));
            double w = kernel.radial(rho) * h2n;
            if (w > 0.0) weights.push_back({{dx, dy}, w});
        }
    }
    double tail;
    if (!kernel.far_integrable()) {
        tail = kInf;
    } else {
        double sup = kernel.support_radius();
        if (std::isfinite(sup))
            tail = window * h >= sup ? 0.0 : phi_K(kernel, window * h, sup);
        else
            tail = phi_K(kernel, window * h, kInf);
    }
    return KernelTable(n, h, window, std::move(weights), tail,
                       kernel.far_integrable() && !kernel.non_integrable());
}

// ---------------------------------------------------------------------------
// JSON serialization of kernel specs

std::pair<KernelSpec, std::optional<int>> kernel_spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("kernel JSON: ") + e.what());
    }
    if (!j.contains("family")) throw InvalidParameter("kernel JSON: missing \"family\"");
    std::string fam = j.at("family").get<std::string>();
    int dim = j.value("n", 1);
    KernelSpec spec;
    if (fam == "fractional") spec = KernelSpec::fractional(j.at("s").get<double>(), dim);
    else if (fam == "two_exponent") spec = KernelSpec::two_exponent(j.at("s0").get<double>(), j.at("s1").get<double>(), dim);
    else if (fam == "logarithmic") spec = KernelSpec::logarithmic(j.at("alpha").get<double>(), dim);
    else if (fam == "fraclog") spec = KernelSpec::fraclog(j.at("s").get<double>(), j.at("alpha").get<double>(), dim);
    else if (fam == "truncated_fractional") spec = KernelSpec::truncated_fractional(j.at("s").get<double>(), j.at("cutoff").get<double>(), dim);
    else if (fam == "constant_ball") spec = KernelSpec::constant_ball(j.at("radius").get<double>(), dim);
    else if (fam == "custom") spec = KernelSpec::custom(j.at("radii").get<std::vector<double>>(),
                                                        j.at("values").get<std::vector<double>>(), dim);
    else throw InvalidParameter("kernel JSON: unknown family \"" + fam + "\"");
    std::optional<int> window;
    if (j.contains("window")) window = j.at("window").get<int>();
    return {spec, window};
}

std::string kernel_spec_to_json(const KernelSpec& spec, std::optional<int> window) {
    nlohmann::json j;
    j["family"] = family_name(spec.family);
    j["n"] = spec.dim;
    switch (spec.family) {
        case KernelFamily::Fractional: j["s"] = spec.s; break;
        case KernelFamily::TwoExponent: j["s0"] = spec.s0; j["s1"] = spec.s1; break;
        case KernelFamily::Logarithmic: j["alpha"] = spec.alpha; break;
        case KernelFamily::FracLog: j["s"] = spec.s; j["alpha"] = spec.alpha; break;
        case KernelFamily::TruncatedFractional: j["s"] = spec.s; j["cutoff"] = spec.cutoff; break;
        case KernelFamily::ConstantBall: j["radius"] = spec.radius; break;
        case KernelFamily::Custom: j["radii"] = spec.custom_radii; j["values"] = spec.custom_values; break;
    }
    if (window) j["window"] = *window;
    return j.dump();
}

} // namespace nlbv
