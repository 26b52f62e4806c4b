#include "nlbv/geom.hpp"

namespace nlbv {

EnergyModel::EnergyModel(const GridDomain& grid, const KernelTable& table, const WeightMeasure& nu,
                         Exterior exterior, FixedPointScale fp)
    : grid_(grid), table_(table), nu_(nu), exterior_(exterior), fp_(fp) {
    table_.require_grid(grid_);
    require_same_grid(grid_, nu_.grid(), "energy model weight measure");
    if (exterior_ == Exterior::Full)
        throw InvalidParameter("energy model exterior must be Zero or None");
    qweights_.reserve(table_.weights().size());
    for (const auto& [off, w] : table_.weights()) {
        cap_t q = fp_.quantize(w);
        if (q > 0) qweights_.push_back({off, q});
    }
    qboundary_.assign(grid_.size(), 0);
    qnu_.assign(grid_.size(), 0);
    for (int i = 0; i < grid_.size(); ++i) {
        int x = grid_.cell_x(i), y = grid_.cell_y(i);
        cap_t b = 0;
        for (const auto& [off, qw] : qweights_)
            if (!grid_.contains(x + off.dx, y + off.dy)) b += qw;
        qboundary_[i] = b;
        qnu_[i] = fp_.quantize(nu_.density()[i] * grid_.cell_measure());
    }
}

cap_t EnergyModel::nu_fp(const DiscreteSet& set) const {
    require_same_grid(grid_, set.grid(), "nu_fp");
    cap_t s = 0;
    for (int i = 0; i < grid_.size(); ++i)
        if (set.test(i)) s += qnu_[i];
    return s;
}

cap_t EnergyModel::nu_total_fp() const {
    cap_t s = 0;
    for (int i = 0; i < grid_.size(); ++i) s += qnu_[i];
    return s;
}

cap_t EnergyModel::perimeter_fp(const DiscreteSet& set, Exterior exterior) const {
    require_same_grid(grid_, set.grid(), "perimeter_fp");
    cap_t pairs = 0, cross = 0;
    for (int i = 0; i < grid_.size(); ++i) {
        const bool in = set.test(i);
        int x = grid_.cell_x(i), y = grid_.cell_y(i);
        for (const auto& [off, qw] : qweights_) {
            int jx = x + off.dx, jy = y + off.dy;
            if (grid_.contains(jx, jy)) {
                if (in != set.test(grid_.index(jx, jy))) pairs += qw;
            } else if (exterior == Exterior::Zero) {
                if (in) cross += qw;
            } else if (exterior == Exterior::Full) {
                if (!in) cross += qw;
            }
        }
    }
    return pairs / 2 + cross;
}

cap_t EnergyModel::geometric_energy_fp(const DiscreteSet& U, const DiscreteSet& E, double lambda,
                                       bool exterior_in_datum) const {
    Exterior ext = exterior_ == Exterior::None ? Exterior::None
                   : exterior_in_datum         ? Exterior::Full
                                               : Exterior::Zero;
    cap_t e = perimeter_fp(U, ext);
    for (int i = 0; i < grid_.size(); ++i)
        if (U.test(i) != E.test(i)) e += lambda_unit(i, lambda);
    return e;
}

CutProblem EnergyModel::build_geometric_cut(const DiscreteSet& E, double lambda,
                                            bool exterior_in_datum) const {
    require_same_grid(grid_, E.grid(), "geometric cut datum");
    CutProblem problem(int(grid_.size()));
    for (int i = 0; i < grid_.size(); ++i) {
        cap_t lam = lambda_unit(i, lambda);
        if (E.test(i)) problem.add_exclusion_cost(i, lam);
        else problem.add_membership_cost(i, lam);
        if (exterior_ == Exterior::Zero && qboundary_[i] != 0) {
            // boundary mass is paid on the side that differs from the exterior
            if (exterior_in_datum) problem.add_exclusion_cost(i, qboundary_[i]);
            else problem.add_membership_cost(i, qboundary_[i]);
        }
        int x = grid_.cell_x(i), y = grid_.cell_y(i);
        for (const auto& [off, qw] : qweights_) {
            if (off.dx < 0 || (off.dx == 0 && off.dy < 0)) continue; // one arc per unordered pair
            int jx = x + off.dx, jy = y + off.dy;
            if (grid_.contains(jx, jy)) problem.add_pairwise(i, grid_.index(jx, jy), qw);
        }
    }
    return problem;
}

namespace {

DiscreteSet set_from_mask(const GridDomain& grid, const std::vector<char>& mask) {
    DiscreteSet s(grid);
    for (int i = 0; i < grid.size(); ++i)
        if (mask[i]) s.set(i, true);
    return s;
}

} // namespace

GeomSolution solve_geometric(const DiscreteSet& E, double lambda, const EnergyModel& model,
                             bool exterior_in_datum) {
    if (!(lambda > 0)) throw InvalidParameter("fidelity parameter must be positive");
    CutProblem problem = model.build_geometric_cut(E, lambda, exterior_in_datum);
    CutSolution cut = solve_cut(problem);
    GeomSolution sol{set_from_mask(model.grid(), cut.minimal_set),
                     set_from_mask(model.grid(), cut.maximal_set),
                     {}, cut.min_energy, lambda};
    Exterior ext = model.exterior() == Exterior::None ? Exterior::None
                   : exterior_in_datum                ? Exterior::Full
                                                      : Exterior::Zero;
    sol.energy = geometric_energy(sol.minimal, E, lambda, model.weight(), model.table(), ext);
    return sol;
}

bool verify_complement(const DiscreteSet& E, double lambda, const EnergyModel& model) {
    GeomSolution direct = solve_geometric(E, lambda, model, false);
    GeomSolution complemented = solve_geometric(E.complement(), lambda, model, true);
    return complemented.minimal == direct.maximal.complement() &&
           complemented.maximal == direct.minimal.complement();
}

bool verify_comparison(const DiscreteSet& E2, const DiscreteSet& E1, double lambda,
                       const EnergyModel& model) {
    if (!E2.subset_of(E1)) throw InvalidParameter("verify_comparison expects E2 subset of E1");
    GeomSolution s2 = solve_geometric(E2, lambda, model);
    GeomSolution s1 = solve_geometric(E1, lambda, model);
    return s2.minimal.subset_of(s1.minimal) && s2.maximal.subset_of(s1.maximal);
}

bool verify_lattice_closure(const DiscreteSet& E, double lambda, const EnergyModel& model,
                            const DiscreteSet& U1, const DiscreteSet& U2) {
    cap_t best = solve_geometric(E, lambda, model).energy_fp;
    if (model.geometric_energy_fp(U1, E, lambda) != best) return false;
    if (model.geometric_energy_fp(U2, E, lambda) != best) return false;
    return model.geometric_energy_fp(U1.set_union(U2), E, lambda) == best &&
           model.geometric_energy_fp(U1.set_intersection(U2), E, lambda) == best;
}

} // namespace nlbv
