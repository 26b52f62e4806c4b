#include "nlbv/fidelity.hpp"

#include <algorithm>
#include <cmath>

#include "nlbv/parallel.hpp"

namespace nlbv {

std::vector<SweepRecord> sweep_geometric(const DiscreteSet& datum,
                                         const std::vector<double>& lambdas,
                                         const EnergyModel& model, int threads) {
    auto records = parallel_map(
        lambdas,
        [&](double lambda) {
            GeomSolution sol = solve_geometric(datum, lambda, model);
            SweepRecord rec;
            rec.lambda = lambda;
            rec.energy = sol.energy;
            rec.mu = model.weight().symmetric_difference(sol.minimal, datum);
            rec.n_min = sol.minimal.cell_count();
            rec.n_max = sol.maximal.cell_count();
            rec.is_jump_candidate = !(sol.minimal == sol.maximal);
            return rec;
        },
        threads);
    return records;
}

std::vector<SweepRecord> sweep_functional(const DiscreteFunction& datum,
                                          const std::vector<double>& lambdas,
                                          const EnergyModel& model, int levels, int threads) {
    auto records = parallel_map(
        lambdas,
        [&](double lambda) {
            FunctionalSolution lo = solve_functional(datum, lambda, model, levels, Stacking::Minimal);
            FunctionalSolution hi = solve_functional(datum, lambda, model, levels, Stacking::Maximal);
            SweepRecord rec;
            rec.lambda = lambda;
            rec.energy = lo.energy;
            rec.mu = model.weight().l1_distance(lo.u, lo.datum);
            rec.n_min = (lo.u.values() != 0.0).count();
            rec.n_max = (hi.u.values() != 0.0).count();
            rec.is_jump_candidate = (lo.u.values() != hi.u.values()).any();
            return rec;
        },
        threads);
    return records;
}

BallThreshold ball_threshold(const DiscreteSet& ball, const EnergyModel& model, double tol) {
    if (ball.empty()) throw InvalidParameter("threshold probe needs a nonempty datum");
    if (!(tol > 0)) throw InvalidParameter("bisection tolerance must be positive");
    auto empty_at = [&](double lambda) {
        return solve_geometric(ball, lambda, model).minimal.empty();
    };
    BallThreshold out;
    out.h = cheeger_solve(ball, model).h;
    out.tol = tol;

    double lo = 1e-9 * out.h;
    if (!empty_at(lo)) { out.lambda_star = 0.0; return out; }
    double hi = 2.0 * out.h;
    while (empty_at(hi)) hi *= 2.0; // grow until the solution is nonempty
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (empty_at(mid)) lo = mid;
        else hi = mid;
    }
    out.lambda_star = 0.5 * (lo + hi);
    return out;
}

double high_fidelity_lambda(double r, const EnergyModel& model) {
    DiscreteSet ball = make_ball_set(model.grid(), model.grid().grid_center(), r);
    if (ball.empty()) throw InvalidParameter("radius too small for the grid");
    double p = k_perimeter(ball, model.table(),
                           model.exterior() == Exterior::None ? Exterior::None : Exterior::Zero);
    return 2.0 * p / (model.weight().w_lo() * ball.volume());
}

double low_fidelity_bound(const Kernel& kernel, double R, double w_hi, double calibrated_C) {
    if (!(calibrated_C > 0)) throw InvalidParameter("calibrated constant must be positive");
    double D = kernel.doubling_radius();
    if (std::isfinite(D) && !(4.0 * R < D))
        throw BadRange("low-fidelity bound needs R < D/4");
    return 2.0 * phi_K(kernel, 4.0 * R, D) / (w_hi * calibrated_C);
}

double calibrate_lusin_constant(const Kernel& kernel, const EnergyModel& model,
                                const DiscreteSet& reference_ball, double r_ref, double tol) {
    BallThreshold th = ball_threshold(reference_ball, model, tol);
    double D = kernel.doubling_radius();
    if (std::isfinite(D) && !(4.0 * r_ref < D))
        throw BadRange("reference ball too large for the doubling radius");
    return 2.0 * phi_K(kernel, 4.0 * r_ref, D) / (model.weight().w_hi() * th.lambda_star);
}

RegimeReport cheeger_lambda_regimes(const DiscreteSet& E, const EnergyModel& model) {
    RegimeReport rep;
    CheegerResult ch = cheeger_solve(E, model);
    rep.h = ch.h;
    // 64 quanta of the lambda resolution of the fidelity units
    rep.eps = 64.0 / (model.fp().scale * model.weight().w_lo() * model.grid().cell_measure());

    GeomSolution below = solve_geometric(E, std::max(rep.h - rep.eps, rep.eps), model);
    rep.below_empty = below.minimal.empty() && below.maximal.empty();

    // exact tie at the rational h: P* nu(C and E) == N* P(C), cross-multiplied
    cap_t pc = model.perimeter_fp(ch.cheeger_set);
    cap_t nc = model.nu_fp(ch.cheeger_set.set_intersection(E));
    rep.tie_at_h = ch.h_num * nc == ch.h_den * pc;

    GeomSolution above = solve_geometric(E, rep.h + rep.eps, model);
    rep.above_is_datum = above.minimal == E && above.maximal == E;

    // binary functional datum at h: every level of the maximal stack is a
    // Cheeger set of E or empty
    FunctionalSolution fu = solve_functional(DiscreteFunction::indicator(E), rep.h, model, 2,
                                             Stacking::Maximal);
    rep.functional_levels_cheeger = true;
    for (double t : {0.0, 0.5}) {
        DiscreteSet level = fu.u.superlevel(t);
        if (level.empty()) continue;
        cap_t p = model.perimeter_fp(level);
        cap_t nu = model.nu_fp(level);
        if (ch.h_num * nu != ch.h_den * p) rep.functional_levels_cheeger = false;
    }
    return rep;
}

} // namespace nlbv
