#include "nlbv/energy.hpp"

#include <algorithm>
#include <cmath>

namespace nlbv {

std::vector<double> boundary_mass(const GridDomain& grid, const KernelTable& table) {
    table.require_grid(grid);
    std::vector<double> b(grid.size(), 0.0);
    for (int i = 0; i < grid.size(); ++i) {
        long double acc = 0.0L;
        int x = grid.cell_x(i), y = grid.cell_y(i);
        for (const auto& [off, w] : table.weights())
            if (!grid.contains(x + off.dx, y + off.dy)) acc += w;
        b[i] = double(acc);
    }
    return b;
}

double k_variation(const DiscreteFunction& u, const KernelTable& table, Exterior exterior) {
    if (exterior == Exterior::Full)
        throw InvalidParameter("k_variation: functions extend by 0, Exterior::Full is for sets");
    const GridDomain& grid = u.grid();
    table.require_grid(grid);
    const bool zero_ext = exterior == Exterior::Zero;
    long double pairs = 0.0L, ext = 0.0L;
    for (int i = 0; i < grid.size(); ++i) {
        const double ui = u[i];
        int x = grid.cell_x(i), y = grid.cell_y(i);
        for (const auto& [off, w] : table.weights()) {
            int jx = x + off.dx, jy = y + off.dy;
            if (grid.contains(jx, jy))
                pairs += std::abs(ui - u[grid.index(jx, jy)]) * w;
            else if (zero_ext)
                ext += std::abs(ui) * w;
        }
    }
    return double(pairs / 2.0L + ext);
}

double k_perimeter(const DiscreteSet& E, const KernelTable& table, Exterior exterior) {
    const GridDomain& grid = E.grid();
    table.require_grid(grid);
    long double pairs = 0.0L, cross = 0.0L;
    for (int i = 0; i < grid.size(); ++i) {
        const bool in = E.test(i);
        int x = grid.cell_x(i), y = grid.cell_y(i);
        for (const auto& [off, w] : table.weights()) {
            int jx = x + off.dx, jy = y + off.dy;
            if (grid.contains(jx, jy)) {
                if (in != E.test(grid.index(jx, jy))) pairs += w;
            } else if (exterior == Exterior::Zero) {
                if (in) cross += w;
            } else if (exterior == Exterior::Full) {
                if (!in) cross += w;
            }
        }
    }
    return double(pairs / 2.0L + cross);
}

double k_perimeter_relative(const DiscreteSet& E, const DiscreteSet& A, const KernelTable& table) {
    const GridDomain& grid = E.grid();
    require_same_grid(grid, A.grid(), "relative perimeter");
    table.require_grid(grid);
    long double inside = 0.0L, cross = 0.0L;
    for (int i = 0; i < grid.size(); ++i) {
        if (!A.test(i)) continue;
        const bool in = E.test(i);
        int x = grid.cell_x(i), y = grid.cell_y(i);
        for (const auto& [off, w] : table.weights()) {
            int jx = x + off.dx, jy = y + off.dy;
            if (grid.contains(jx, jy)) {
                int j = grid.index(jx, jy);
                bool differs = in != E.test(j);
                if (A.test(j)) { if (differs) inside += w; }
                else if (differs) cross += w;
            } else if (in) {
                cross += w; // exterior is in A^c with chi_E = 0
            }
        }
    }
    return double(inside / 2.0L + cross);
}

std::pair<double, double> integrable_identity(const DiscreteSet& E, const KernelTable& table) {
    if (!table.integrable_kernel())
        throw NonIntegrableKernel("integrable identity needs a finite-mass kernel");
    const GridDomain& grid = E.grid();
    table.require_grid(grid);
    double lhs = k_perimeter(E, table, Exterior::Zero);
    // discrete ||K||_1 = total table weight / h^n; |E| = count * h^n
    long double self = 0.0L;
    for (int i = 0; i < grid.size(); ++i) {
        if (!E.test(i)) continue;
        int x = grid.cell_x(i), y = grid.cell_y(i);
        for (const auto& [off, w] : table.weights()) {
            int jx = x + off.dx, jy = y + off.dy;
            if (grid.contains(jx, jy) && E.test(grid.index(jx, jy))) self += w;
        }
    }
    double rhs = table.total_weight() * double(E.cell_count()) - double(self);
    return {lhs, rhs};
}

std::vector<CoareaTerm> coarea_decompose(const DiscreteFunction& u, const KernelTable& table,
                                         Exterior exterior) {
    if (exterior == Exterior::Full)
        throw InvalidParameter("coarea: functions extend by 0, Exterior::Full is for sets");
    const GridDomain& grid = u.grid();
    table.require_grid(grid);
    std::vector<double> values(u.values().data(), u.values().data() + grid.size());
    values.push_back(0.0); // exterior value
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<CoareaTerm> terms;
    for (std::size_t j = 0; j + 1 < values.size(); ++j) {
        double t = values[j];
        DiscreteSet level = u.superlevel(t);
        // under the zero extension the exterior belongs to {u > t} iff t < 0
        Exterior mode = exterior == Exterior::None ? Exterior::None
                        : t < 0.0                  ? Exterior::Full
                                                   : Exterior::Zero;
        terms.push_back({t, values[j + 1] - t, k_perimeter(level, table, mode)});
    }
    return terms;
}

EnergyBreakdown functional_energy(const DiscreteFunction& u, const DiscreteFunction& f,
                                  double lambda, const WeightMeasure& nu, const KernelTable& table,
                                  Exterior exterior) {
    require_same_grid(u.grid(), f.grid(), "functional energy");
    EnergyBreakdown e;
    e.tv_term = k_variation(u, table, exterior);
    e.fidelity_term = nu.l1_distance(u, f);
    e.lambda = lambda;
    e.total = e.tv_term + lambda * e.fidelity_term;
    return e;
}

EnergyBreakdown geometric_energy(const DiscreteSet& U, const DiscreteSet& E, double lambda,
                                 const WeightMeasure& nu, const KernelTable& table,
                                 Exterior exterior) {
    require_same_grid(U.grid(), E.grid(), "geometric energy");
    EnergyBreakdown e;
    e.tv_term = k_perimeter(U, table, exterior);
    e.fidelity_term = nu.symmetric_difference(U, E);
    e.lambda = lambda;
    e.total = e.tv_term + lambda * e.fidelity_term;
    return e;
}

} // namespace nlbv
