#include "nlbv/func.hpp"

#include <algorithm>
#include <cmath>

#include "nlbv/parallel.hpp"

namespace nlbv {

namespace {

std::vector<double> distinct_values(const DiscreteFunction& f) {
    std::vector<double> v(f.values().data(), f.values().data() + f.grid().size());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Exact solve for nonnegative data: one geometric solve per distinct
// positive value, stacked bottom-up. Nesting is guaranteed by the lattice
// comparison property of the cut solver; the guard stays as an assertion.
DiscreteFunction solve_nonnegative(const DiscreteFunction& f, double lambda,
                                   const EnergyModel& model, Stacking stacking, int threads,
                                   int* solve_count) {
    std::vector<double> values = distinct_values(f);
    if (values.empty() || values.back() <= 0.0) return DiscreteFunction(f.grid());
    if (values.front() < 0.0) throw InvalidParameter("solve_nonnegative needs f >= 0");
    if (values.front() > 0.0) values.insert(values.begin(), 0.0);

    std::vector<double> cuts(values.begin() + 1, values.end());
    auto solutions = parallel_map(
        cuts,
        [&](double v) {
            DiscreteSet datum = f.superlevel(std::nexttoward(v, -kInf));
            GeomSolution sol = solve_geometric(datum, lambda, model);
            return stacking == Stacking::Minimal ? sol.minimal : sol.maximal;
        },
        threads);
    if (solve_count) *solve_count += int(solutions.size());

    Eigen::ArrayXd u = Eigen::ArrayXd::Zero(f.grid().size());
    for (std::size_t k = 0; k < solutions.size(); ++k) {
        if (k > 0 && !solutions[k].subset_of(solutions[k - 1]))
            throw NestingViolation("per-level geometric solutions failed to nest");
        double gap = values[k + 1] - values[k];
        for (int i = 0; i < f.grid().size(); ++i)
            if (solutions[k].test(i)) u[i] += gap;
    }
    return DiscreteFunction(f.grid(), std::move(u));
}

} // namespace

FunctionalSolution solve_functional(const DiscreteFunction& f, double lambda,
                                    const EnergyModel& model, int levels, Stacking stacking,
                                    int threads) {
    if (!(lambda > 0)) throw InvalidParameter("fidelity parameter must be positive");
    require_same_grid(f.grid(), model.grid(), "functional datum");

    DiscreteFunction datum = f;
    std::vector<double> thresholds;
    double delta = 0.0;
    if (int(distinct_values(f).size()) > levels) {
        QuantizeResult q = quantize(f, levels);
        datum = q.quantized;
        thresholds = q.thresholds;
        delta = q.delta;
    }

    // both signs stack with the same extremal choice, so flipping the
    // datum flips the solution exactly
    Eigen::ArrayXd plus = datum.values().max(0.0);
    Eigen::ArrayXd minus = (-datum.values()).max(0.0);
    int solves = 0;
    DiscreteFunction u_plus =
        solve_nonnegative(DiscreteFunction(f.grid(), plus), lambda, model, stacking, threads, &solves);
    DiscreteFunction u_minus =
        solve_nonnegative(DiscreteFunction(f.grid(), minus), lambda, model, stacking, threads, &solves);

    FunctionalSolution out{DiscreteFunction(f.grid(), u_plus.values() - u_minus.values()),
                           datum,
                           {},
                           std::move(thresholds),
                           0.0,
                           solves};
    out.energy = functional_energy(out.u, datum, lambda, model.weight(), model.table(),
                                   model.exterior());
    double nu_grid = model.weight().density().sum() * model.grid().cell_measure();
    out.quantization_bound = lambda * nu_grid * delta / 2.0;
    return out;
}

SolutionAlgebraReport verify_solution_algebra(const DiscreteFunction& f, double lambda,
                                              const EnergyModel& model, int levels) {
    SolutionAlgebraReport rep;
    FunctionalSolution base = solve_functional(f, lambda, model, levels);
    const Eigen::ArrayXd& u = base.u.values();

    std::vector<double> values = distinct_values(base.datum);
    double gap = values.size() >= 2 ? values[1] - values[0] : 1.0;

    auto resolve = [&](const Eigen::ArrayXd& g) {
        return solve_functional(DiscreteFunction(f.grid(), g), lambda, model, levels).u.values();
    };

    rep.shift_exact = (resolve(base.datum.values() + gap) - (u + gap)).abs().maxCoeff() == 0.0;
    rep.flip_exact = (resolve(-base.datum.values()) + u).abs().maxCoeff() == 0.0;

    double c = values[values.size() / 2];
    rep.truncate_min_exact = (resolve(base.datum.values().min(c)) - u.min(c)).abs().maxCoeff() == 0.0;
    rep.truncate_max_exact = (resolve(base.datum.values().max(c)) - u.max(c)).abs().maxCoeff() == 0.0;

    Eigen::ArrayXd up = resolve(base.datum.values().max(0.0));
    Eigen::ArrayXd un = resolve((-base.datum.values()).max(0.0));
    rep.split_consistent = (up - u.max(0.0)).abs().maxCoeff() == 0.0 &&
                           (un - (-u).max(0.0)).abs().maxCoeff() == 0.0;
    return rep;
}

} // namespace nlbv
