#include "nlbv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlbv/cheeger.hpp"
#include "nlbv/fidelity.hpp"
#include "nlbv/func.hpp"
#include "nlbv/geom.hpp"
#include "nlbv/rearrange.hpp"
#include "nlbv/rng.hpp"

namespace nlbv {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void add(std::vector<CheckResult>& out, const char* suite, const char* name, bool pass,
         std::string detail = "") {
    out.push_back({suite, name, pass, std::move(detail)});
}

EnergyModel make_model(const GridDomain& grid, const Kernel& kernel, int window,
                       Exterior ext = Exterior::Zero, double w = 1.0) {
    KernelTable table = tabulate_offsets(kernel, grid, window);
    return EnergyModel(grid, table, WeightMeasure::constant(grid, w), ext);
}

DiscreteSet set_from_mask(const GridDomain& grid, std::uint32_t mask) {
    DiscreteSet s(grid);
    for (int i = 0; i < grid.size(); ++i)
        if ((mask >> i) & 1u) s.set(i, true);
    return s;
}

// Exhaustive ratio minimization over all nonempty subsets with gray-code
// incremental perimeter updates. Returns (p, nu) of the best ratio.
std::pair<cap_t, cap_t> exhaustive_cheeger(const DiscreteSet& omega, const EnergyModel& model) {
    const GridDomain& grid = model.grid();
    std::vector<int> cells = omega.cells();
    const int m = int(cells.size());
    std::vector<int> pos(grid.size(), -1);
    for (int k = 0; k < m; ++k) pos[cells[k]] = k;

    DiscreteSet current(grid);
    cap_t p = 0, nu = 0;
    cap_t best_p = 0, best_n = 0;
    // join and leave are symmetric: the perimeter change only depends on
    // the (unchanged) membership of the neighbors
    auto flip = [&](int k) {
        int i = cells[k];
        int x = grid.cell_x(i), y = grid.cell_y(i);
        cap_t delta = 0;
        for (const auto& [off, qw] : model.qweights()) {
            int jx = x + off.dx, jy = y + off.dy;
            if (grid.contains(jx, jy))
                delta += current.test(grid.index(jx, jy)) ? -qw : qw;
            else if (model.exterior() == Exterior::Zero)
                delta += qw;
        }
        if (!current.test(i)) { p += delta; nu += model.qnu(i); current.set(i, true); }
        else                  { p -= delta; nu -= model.qnu(i); current.set(i, false); }
    };
    std::uint64_t prev = 0;
    for (std::uint64_t g = 1; g < (std::uint64_t(1) << m); ++g) {
        std::uint64_t gray = g ^ (g >> 1);
        std::uint64_t changed = gray ^ prev;
        prev = gray;
        int k = 0;
        while (!((changed >> k) & 1)) ++k;
        flip(k);
        if (nu > 0 && (best_n == 0 || p * best_n < best_p * nu)) { best_p = p; best_n = nu; }
    }
    return {best_p, best_n};
}

// ---------------------------------------------------------------------- //

void suite_energy(std::vector<CheckResult>& out, std::uint64_t seed) {
    const char* S = "energy";
    Rng rng(seed);
    Kernel frac = make_kernel(KernelSpec::fractional(0.5, 2));
    GridDomain g6 = GridDomain::plane(6, 6, 1.0);
    KernelTable t6 = tabulate_offsets(frac, g6, 3);

    { // submodularity, 200 random pairs
        double worst = 0.0;
        bool nested_equal = true;
        for (int it = 0; it < 200; ++it) {
            DiscreteSet E = rng.random_set(g6, 0.4), F = rng.random_set(g6, 0.4);
            double lhs = k_perimeter(E.set_intersection(F), t6) + k_perimeter(E.set_union(F), t6);
            double rhs = k_perimeter(E, t6) + k_perimeter(F, t6);
            worst = std::max(worst, lhs - rhs);
            DiscreteSet N = E.set_intersection(F); // N subset of E: equality case
            double l2 = k_perimeter(N.set_intersection(E), t6) + k_perimeter(N.set_union(E), t6);
            double r2 = k_perimeter(N, t6) + k_perimeter(E, t6);
            if (std::abs(l2 - r2) > 1e-12 * (1.0 + r2)) nested_equal = false;
        }
        add(out, S, "submodularity", worst <= 1e-12, "max violation " + fmt(worst));
        add(out, S, "submodularity_nested_equality", nested_equal);
    }
    { // complement invariance through exterior bookkeeping
        bool ok = true;
        for (int it = 0; it < 50; ++it) {
            DiscreteSet E = rng.random_set(g6, 0.5);
            double a = k_perimeter(E, t6, Exterior::Zero);
            double b = k_perimeter(E.complement(), t6, Exterior::Full);
            if (std::abs(a - b) > 1e-12 * (1.0 + a)) ok = false;
        }
        add(out, S, "complement_invariance", ok);
    }
    { // translation invariance for interior shifts
        GridDomain g12 = GridDomain::plane(12, 12, 1.0);
        KernelTable t12 = tabulate_offsets(frac, g12, 2);
        bool ok = true;
        for (int it = 0; it < 40; ++it) {
            DiscreteSet E(g12);
            for (int rep = 0; rep < 8; ++rep)
                E.set(g12.index(rng.uniform_int(3, 6), rng.uniform_int(3, 6)), true);
            int zx = rng.uniform_int(0, 2), zy = rng.uniform_int(0, 2);
            DiscreteSet Ez(g12);
            for (int i : E.cells()) Ez.set(g12.index(g12.cell_x(i) + zx, g12.cell_y(i) + zy), true);
            double a = k_perimeter(E, t12), b = k_perimeter(Ez, t12);
            if (std::abs(a - b) > 1e-12 * (1.0 + a)) ok = false;
        }
        add(out, S, "translation_invariance", ok);
    }
    { // coarea identity across three kernels, with sign-crossing data
        GridDomain g8 = GridDomain::plane(8, 8, 1.0);
        std::vector<Kernel> kernels = {frac, make_kernel(KernelSpec::constant_ball(2.0, 2)),
                                       make_kernel(KernelSpec::fraclog(0.25, 0.5, 2))};
        double worst = 0.0;
        for (const Kernel& k : kernels) {
            KernelTable t = tabulate_offsets(k, g8, 3);
            for (int it = 0; it < 30; ++it) {
                DiscreteFunction u = rng.random_levels(g8, 4);
                if (it % 2) u = DiscreteFunction(g8, u.values() - 0.5);
                double tv = k_variation(u, t);
                double sum = 0.0;
                for (const auto& term : coarea_decompose(u, t)) sum += term.gap * term.perimeter;
                worst = std::max(worst, std::abs(sum - tv) / (1.0 + tv));
            }
        }
        add(out, S, "coarea_identity", worst <= 1e-9, "max rel err " + fmt(worst));
    }
    { // integrable-kernel identity
        Kernel cb = make_kernel(KernelSpec::constant_ball(2.0, 2));
        GridDomain g5 = GridDomain::plane(5, 5, 1.0);
        KernelTable t5 = tabulate_offsets(cb, g5, 2);
        bool ok = true;
        for (int it = 0; it < 30; ++it) {
            DiscreteSet E = it == 0 ? DiscreteSet(g5) : rng.random_set(g5, 0.5);
            auto [lhs, rhs] = integrable_identity(E, t5);
            if (std::abs(lhs - rhs) > 1e-12 * (1.0 + std::abs(rhs))) ok = false;
        }
        // [u] <= ||K||_1 ||u||_1 on the same truncation
        for (int it = 0; it < 30; ++it) {
            DiscreteFunction u = rng.random_levels(g5, 6);
            double tv = k_variation(u, t5);
            double bound = t5.total_weight() / g5.cell_measure() * u.values().abs().sum() *
                           g5.cell_measure();
            if (tv > bound * (1.0 + 1e-12)) ok = false;
        }
        add(out, S, "integrable_identity", ok);
    }
    { // intersection with half planes; every violation counts as a failure
        GridDomain g10 = GridDomain::plane(10, 10, 1.0);
        KernelTable t10 = tabulate_offsets(frac, g10, 4);
        int violations = 0;
        for (int it = 0; it < 100; ++it) {
            DiscreteSet E = rng.random_set(g10, 0.45);
            DiscreteSet H(g10);
            int c = rng.uniform_int(1, 8);
            bool axis_x = rng.uniform_int(0, 1) == 1, flip = rng.uniform_int(0, 1) == 1;
            for (int i = 0; i < g10.size(); ++i) {
                int coord = axis_x ? g10.cell_x(i) : g10.cell_y(i);
                if (flip ? coord >= c : coord < c) H.set(i, true);
            }
            double pe = k_perimeter(E, t10);
            double pi = k_perimeter(E.set_intersection(H), t10);
            if (pi > pe * (1.0 + 1e-12)) ++violations;
        }
        add(out, S, "halfplane_intersection", violations == 0,
            std::to_string(violations) + " violations");
    }
    { // lattice mass bookkeeping vs the kernel's annulus mass; boundary
      // cell counts oscillate, so the trend is judged on resolution pairs
        Kernel cb = make_kernel(KernelSpec::constant_ball(1.5, 2));
        double M = cb.l1_mass();
        auto err_at = [&](double h) {
            GridDomain g = GridDomain::plane(3, 3, h);
            KernelTable t = tabulate_offsets(cb, g, int(std::ceil(1.5 / h)) + 1);
            double m = t.total_weight() / g.cell_measure() + t.tail_mass();
            return std::abs(m - (M - phi_K(cb, 1e-12, h / 2)));
        };
        double e1 = err_at(0.25), e2 = err_at(0.125), e3 = err_at(0.0625), e4 = err_at(0.03125);
        bool small = std::max({e1, e2, e3, e4}) <= 0.05 * M;
        bool trend = std::max(e3, e4) <= std::max(e1, e2);
        add(out, S, "table_mass_consistency", small && trend,
            "errors " + fmt(e1) + " " + fmt(e2) + " " + fmt(e3) + " " + fmt(e4));
    }
}

// ---------------------------------------------------------------------- //

void suite_geom(std::vector<CheckResult>& out, std::uint64_t seed) {
    const char* S = "geom";
    Rng rng(seed + 1);
    Kernel frac = make_kernel(KernelSpec::fractional(0.5, 2));
    GridDomain g3 = GridDomain::plane(3, 3, 1.0);

    { // exhaustive minimization and extremal sets on 3x3
        bool ok = true;
        for (int it = 0; it < 200 && ok; ++it) {
            Eigen::ArrayXd w(g3.size());
            for (int i = 0; i < g3.size(); ++i) w[i] = 0.5 + 1.5 * rng.uniform01();
            EnergyModel model(g3, tabulate_offsets(frac, g3, 2),
                              WeightMeasure(g3, w), Exterior::Zero);
            DiscreteSet E = rng.random_set(g3, 0.5);
            double lambda = 0.05 + 3.0 * rng.uniform01();
            GeomSolution sol = solve_geometric(E, lambda, model);
            CutProblem problem = model.build_geometric_cut(E, lambda);
            cap_t best = problem.energy(std::vector<char>(9, 0));
            std::uint32_t best_and = 0x1ff, best_or = 0;
            bool first = true;
            for (std::uint32_t mask = 0; mask < 512; ++mask) {
                std::vector<char> in(9);
                for (int i = 0; i < 9; ++i) in[i] = (mask >> i) & 1u;
                cap_t e = problem.energy(in);
                if (first || e < best) { best = e; best_and = mask; best_or = mask; first = false; }
                else if (e == best) { best_and &= mask; best_or |= mask; }
            }
            if (sol.energy_fp != best) ok = false;
            if (!(sol.minimal == set_from_mask(g3, best_and))) ok = false;
            if (!(sol.maximal == set_from_mask(g3, best_or))) ok = false;
        }
        add(out, S, "exhaustive_3x3", ok);
    }

    EnergyModel m4 = make_model(GridDomain::plane(4, 4, 1.0), frac, 2);
    { // extreme fidelity values
        DiscreteSet E = rng.random_set(m4.grid(), 0.4);
        while (E.empty()) E = rng.random_set(m4.grid(), 0.4);
        double pe = k_perimeter(E, m4.table());
        double huge = 2.0 * pe / (m4.weight().w_lo() * m4.grid().cell_measure()) + 1.0;
        GeomSolution hi = solve_geometric(E, huge, m4);
        GeomSolution lo = solve_geometric(E, 1e-7, m4);
        add(out, S, "lambda_extremes",
            hi.minimal == E && hi.maximal == E && lo.minimal.empty() && lo.maximal.empty());
    }
    { // complement identity
        bool ok = true;
        for (int it = 0; it < 50; ++it)
            if (!verify_complement(rng.random_set(m4.grid(), 0.5), 0.1 + rng.uniform01(), m4))
                ok = false;
        add(out, S, "complement_identity", ok);
    }
    { // comparison principle on nested data
        bool ok = true;
        for (int it = 0; it < 100; ++it) {
            DiscreteSet E1 = rng.random_set(m4.grid(), 0.6);
            DiscreteSet E2 = E1.set_intersection(rng.random_set(m4.grid(), 0.6));
            if (!verify_comparison(E2, E1, 0.1 + rng.uniform01(), m4)) ok = false;
        }
        add(out, S, "comparison_nesting", ok);
    }
    { // solutions form a lattice
        bool ok = true;
        for (int it = 0; it < 20; ++it) {
            DiscreteSet E = rng.random_set(m4.grid(), 0.5);
            double lambda = 0.2 + rng.uniform01();
            GeomSolution sol = solve_geometric(E, lambda, m4);
            if (!verify_lattice_closure(E, lambda, m4, sol.minimal, sol.maximal)) ok = false;
        }
        add(out, S, "lattice_closure", ok);
    }
    { // testing against the empty set plus random perturbation certificates
        bool ok = true;
        for (int it = 0; it < 30; ++it) {
            DiscreteSet E = rng.random_set(m4.grid(), 0.5);
            double lambda = 0.1 + 2.0 * rng.uniform01();
            GeomSolution sol = solve_geometric(E, lambda, m4);
            double lhs = k_perimeter(sol.minimal, m4.table()) +
                         lambda * m4.weight().symmetric_difference(sol.minimal, E);
            if (lhs > lambda * m4.weight().measure(E) * (1.0 + 1e-9) + 1e-9) ok = false;
            CutProblem problem = m4.build_geometric_cut(E, lambda);
            std::vector<char> in(m4.grid().size());
            for (int i = 0; i < m4.grid().size(); ++i) in[i] = sol.minimal.test(i);
            for (int flip = 0; flip < 1000; ++flip) {
                int i = rng.uniform_int(0, int(m4.grid().size()) - 1);
                in[i] ^= 1;
                if (problem.energy(in) < sol.energy_fp) ok = false;
                in[i] ^= 1;
            }
        }
        add(out, S, "empty_test_and_perturbations", ok);
    }
    { // measure of the minimal solution grows with lambda
        DiscreteSet E = rng.random_set(m4.grid(), 0.5);
        double prev_nu = -1.0, prev_mu = kInf;
        bool ok = true;
        for (int k = 1; k <= 20; ++k) {
            GeomSolution sol = solve_geometric(E, 0.15 * k, m4);
            double nu = m4.weight().measure(sol.minimal);
            double mu = m4.weight().symmetric_difference(sol.minimal, E);
            if (nu < prev_nu - 1e-12 || mu > prev_mu + 1e-9) ok = false;
            prev_nu = nu;
            prev_mu = mu;
        }
        add(out, S, "lambda_monotonicity", ok);
    }
}

// ---------------------------------------------------------------------- //

void suite_cheeger(std::vector<CheckResult>& out, std::uint64_t seed) {
    const char* S = "cheeger";
    Rng rng(seed + 2);
    Kernel frac = make_kernel(KernelSpec::fractional(0.5, 2));

    { // two-path: Dinkelbach vs exhaustive ratio minimization
        bool ok = true, cert_ok = true, trace_ok = true;
        for (int it = 0; it < 30 && ok; ++it) {
            int n = it < 20 ? 3 : 4;
            GridDomain g = GridDomain::plane(n, n, 1.0);
            EnergyModel model = make_model(g, frac, 2);
            DiscreteSet omega = rng.random_set(g, 0.7);
            if (omega.empty()) omega.set(0, true);
            CheegerResult res = cheeger_solve(omega, model);
            auto [bp, bn] = exhaustive_cheeger(omega, model);
            if (res.h_num * bn != res.h_den * bp) ok = false;
            if (!certificate_check(res, omega, model)) cert_ok = false;
            if (certificate_sup_norm(res, model) > 1.0 + 1e-15) cert_ok = false;
            for (std::size_t k = 0; k + 1 < res.trace.size(); ++k)
                if (!(res.trace[k + 1].ratio < res.trace[k].ratio)) trace_ok = false;
            // a tampered certificate must be rejected
            CheegerResult bad = res;
            for (auto& f : bad.certificate.pair_flow)
                if (f != 0) { f = 0; break; }
            if (bad.certificate.pair_flow != res.certificate.pair_flow &&
                certificate_check(bad, omega, model))
                cert_ok = false;
        }
        add(out, S, "exhaustive_two_path", ok);
        add(out, S, "certificate_valid_and_tamperproof", cert_ok);
        add(out, S, "dinkelbach_trace_decreasing", trace_ok);
    }
    { // weak Faber-Krahn bound with a fully tabulated compact kernel; an
      // elongated domain keeps real margin over the rasterization gap
        Kernel trunc = make_kernel(KernelSpec::truncated_fractional(0.5, 0.5, 2));
        GridDomain g = GridDomain::plane(36, 10, 0.05);
        EnergyModel model = make_model(g, trunc, 10);
        DiscreteSet omega(g);
        for (int i = 0; i < g.size(); ++i)
            if (g.cell_x(i) >= 2 && g.cell_x(i) < 34 && g.cell_y(i) >= 3 && g.cell_y(i) < 7)
                omega.set(i, true);
        CheegerResult res = cheeger_solve(omega, model);
        BetaResult beta = beta_K(trunc, omega.volume(), 2);
        double bound = (beta.value - beta.error_estimate) /
                       (model.weight().w_hi() * omega.volume());
        add(out, S, "faber_krahn_weak", res.h >= bound,
            "h " + fmt(res.h) + " bound " + fmt(bound));
    }
    { // far-apart copies share the Cheeger constant (compact kernel)
        Kernel cb = make_kernel(KernelSpec::constant_ball(2.0, 2));
        GridDomain g = GridDomain::plane(16, 6, 1.0);
        EnergyModel model = make_model(g, cb, 2);
        DiscreteSet one(g), two(g);
        for (int y = 1; y < 4; ++y)
            for (int x = 1; x < 4; ++x) {
                one.set(g.index(x, y), true);
                two.set(g.index(x, y), true);
                two.set(g.index(x + 11, y), true);
            }
        CheegerResult a = cheeger_solve(one, model), b = cheeger_solve(two, model);
        add(out, S, "far_copies_same_h", a.h_num * b.h_den == a.h_den * b.h_num);
    }
    { // a single cell is always calibrable
        GridDomain g = GridDomain::plane(4, 4, 1.0);
        EnergyModel model = make_model(g, frac, 2);
        DiscreteSet single(g);
        single.set(g.index(1, 2), true);
        CalibrabilityResult cal = calibrability_check(single, model);
        add(out, S, "single_cell_calibrable", cal.is_calibrable && cal.gap == 0.0);
    }
    { // rasterized ball: calibrable within the discretization tolerance
        GridDomain g = GridDomain::plane(28, 28, 1.0 / 28);
        EnergyModel model = make_model(g, frac, 6);
        DiscreteSet ball = make_ball_set(g, g.grid_center(), 0.35);
        CalibrabilityResult cal = calibrability_check(ball, model);
        double density = double(model.perimeter_fp(ball)) / double(model.nu_fp(ball));
        double tol = 2.0 * g.spacing() * density;
        add(out, S, "ball_calibrable", std::abs(cal.gap) / cal.cheeger.h <= tol,
            "rel gap " + fmt(std::abs(cal.gap) / cal.cheeger.h) + " tol " + fmt(tol));
        ErosionDiagnostic ero = erosion_diagnostic(cal.cheeger, model);
        add(out, S, "erosion_never_improves", !ero.erosion_possible || ero.ratio_strictly_worse);
    }
    { // eigenvalue relation
        GridDomain g = GridDomain::plane(8, 8, 1.0);
        EnergyModel model = make_model(g, frac, 3);
        DiscreteSet omega = make_ball_set(g, g.grid_center(), 2.9);
        EigenRelationReport rep = eigen_relation_check(omega, model, 100, seed + 7);
        add(out, S, "eigen_relation",
            rep.indicator_ratio_matches && rep.random_ratios_above && rep.achiever_levels_optimal,
            std::to_string(rep.random_checked) + " random candidates");
    }
    { // sup bound for the indicator eigenfunction. With the lattice beta
      // the calibrable-ball case is the exact equality; the kernel beta is
      // exercised on a measure whose global sup density is far from the
      // domain, so the bound carries real slack.
        GridDomain g = GridDomain::plane(30, 30, 0.1);
        KernelTable table = tabulate_offsets(frac, g, 7);
        DiscreteSet omega = prefix_ball(g, 316);
        EnergyModel flat(g, table, WeightMeasure::constant(g, 1.0), Exterior::Zero);
        CheegerResult res = cheeger_solve(omega, flat);
        DiscreteFunction cand = DiscreteFunction::indicator(res.cheeger_set);
        LinfBoundResult lattice = linf_bound_check(omega, flat, frac, cand, BetaSource::Lattice);
        Eigen::ArrayXd w = Eigen::ArrayXd::Constant(g.size(), 1.0);
        for (int y = 0; y < 3; ++y)
            for (int x = 0; x < 3; ++x) w[g.index(x, y)] = 5.0;
        EnergyModel lopsided(g, table, WeightMeasure(g, w), Exterior::Zero);
        CheegerResult res2 = cheeger_solve(omega, lopsided);
        LinfBoundResult kernelb = linf_bound_check(omega, lopsided, frac,
                                                   DiscreteFunction::indicator(res2.cheeger_set));
        add(out, S, "linf_bound_lattice_beta", lattice.ok,
            "lhs " + fmt(lattice.lhs) + " rhs " + fmt(lattice.rhs));
        add(out, S, "linf_bound_kernel_beta", kernelb.ok,
            "lhs " + fmt(kernelb.lhs) + " rhs " + fmt(kernelb.rhs));
    }
}

// ---------------------------------------------------------------------- //

void suite_fidelity(std::vector<CheckResult>& out, std::uint64_t seed) {
    const char* S = "fidelity";
    Rng rng(seed + 3);
    Kernel frac = make_kernel(KernelSpec::fractional(0.5, 2));

    { // three regimes around the Cheeger constant of a calibrable ball
        GridDomain g = GridDomain::plane(26, 26, 1.0 / 13);
        EnergyModel model = make_model(g, frac, 5);
        DiscreteSet ball = make_ball_set(g, g.grid_center(), 0.42);
        RegimeReport rep = cheeger_lambda_regimes(ball, model);
        add(out, S, "ball_regimes",
            rep.below_empty && rep.tie_at_h && rep.above_is_datum && rep.functional_levels_cheeger,
            "h " + fmt(rep.h));
    }
    { // mu is nonincreasing along every sweep
        GridDomain g = GridDomain::plane(8, 8, 1.0);
        EnergyModel model = make_model(g, frac, 3);
        std::vector<double> lambdas;
        for (int k = 1; k <= 12; ++k) lambdas.push_back(0.2 * k);
        bool ok = true;
        for (int it = 0; it < 20; ++it) {
            DiscreteSet E = rng.random_set(g, 0.4);
            auto records = sweep_geometric(E, lambdas, model);
            for (std::size_t k = 0; k + 1 < records.size(); ++k)
                if (records[k + 1].mu > records[k].mu + 1e-9) ok = false;
        }
        add(out, S, "mu_monotone", ok);
    }
    { // bisection threshold against the Dinkelbach constant
        GridDomain g = GridDomain::plane(20, 20, 0.1);
        EnergyModel model = make_model(g, frac, 5);
        DiscreteSet ball = make_ball_set(g, g.grid_center(), 0.6);
        double tol = 1e-5;
        BallThreshold th = ball_threshold(ball, model, tol * 4.0);
        double quantum = 1.0 / (model.fp().scale * model.weight().w_lo() * g.cell_measure());
        add(out, S, "threshold_matches_h", std::abs(th.lambda_star - th.h) <= th.tol + 2 * quantum,
            "lambda* " + fmt(th.lambda_star) + " h " + fmt(th.h));
    }
    { // high-fidelity guarantee: ball and union of two balls reproduced
        GridDomain g = GridDomain::plane(30, 30, 0.1);
        EnergyModel model = make_model(g, frac, 5);
        double r = 0.45;
        double lam = high_fidelity_lambda(r, model);
        DiscreteSet ball = make_ball_set(g, g.grid_center(), r);
        GeomSolution sol = solve_geometric(ball, lam, model);
        bool ok = sol.minimal == ball && sol.maximal == ball;
        auto c = g.grid_center();
        DiscreteSet uni = make_ball_set(g, {c[0] - 0.55, c[1]}, r)
                              .set_union(make_ball_set(g, {c[0] + 0.62, c[1] + 0.2}, r + 0.1));
        GeomSolution sol2 = solve_geometric(uni, lam, model);
        if (!(sol2.minimal == uni && sol2.maximal == uni)) ok = false;
        add(out, S, "high_fidelity_reproduces", ok);
    }
    { // low-fidelity guarantee with the calibrated constant
        GridDomain g = GridDomain::plane(24, 24, 1.0 / 12);
        EnergyModel model = make_model(g, frac, 6);
        double r_ref = 0.45;
        DiscreteSet ref = make_ball_set(g, g.grid_center(), r_ref);
        double C = calibrate_lusin_constant(frac, model, ref, r_ref, 1e-5);
        double bound = low_fidelity_bound(frac, r_ref, model.weight().w_hi(), C);
        bool ok = true;
        for (int it = 0; it < 20 && ok; ++it) {
            DiscreteFunction f = rng.random_levels(g, 3);
            Eigen::ArrayXd masked = f.values();
            for (int i = 0; i < g.size(); ++i) {
                double dx = g.center_x(i) - g.grid_center()[0];
                double dy = g.center_y(i) - g.grid_center()[1];
                if (dx * dx + dy * dy > r_ref * r_ref) masked[i] = 0.0;
            }
            DiscreteFunction fm(g, masked);
            for (double frac_of_bound : {0.3, 0.7, 0.98}) {
                FunctionalSolution u = solve_functional(fm, frac_of_bound * bound, model, 4);
                if ((u.u.values() != 0.0).any()) ok = false;
            }
        }
        add(out, S, "low_fidelity_zero", ok, "bound " + fmt(bound));
    }
    { // a ball datum has a single jump candidate, at the Cheeger value
        GridDomain g = GridDomain::plane(18, 18, 1.0 / 9);
        EnergyModel model = make_model(g, frac, 5);
        DiscreteSet ball = make_ball_set(g, g.grid_center(), 0.44);
        double h = cheeger_solve(ball, model).h;
        std::vector<double> lambdas;
        for (int k = 0; k <= 20; ++k) lambdas.push_back(h * (0.6 + 0.04 * k));
        auto records = sweep_geometric(ball, lambdas, model);
        bool ok = true;
        int jumps = 0;
        for (const auto& rec : records) {
            if (rec.is_jump_candidate) ++jumps;
            if (rec.lambda < h * 0.999 && rec.n_min != 0) ok = false;
            if (rec.lambda > h * 1.001 && rec.n_min != ball.cell_count()) ok = false;
        }
        add(out, S, "single_jump_at_h", ok && jumps <= 1, std::to_string(jumps) + " jumps");
    }
}

// ---------------------------------------------------------------------- //

void suite_rearrange(std::vector<CheckResult>& out, std::uint64_t seed) {
    const char* S = "rearrange";
    Rng rng(seed + 4);

    { // 1-d rearrangement inequality is exact
        Kernel frac1 = make_kernel(KernelSpec::fractional(0.5, 1));
        GridDomain line = GridDomain::line(64, 1.0);
        KernelTable t = tabulate_offsets(frac1, line, 12);
        bool ok = true;
        for (int it = 0; it < 200; ++it) {
            Eigen::ArrayXd v = Eigen::ArrayXd::Zero(line.size());
            for (int i = 14; i < 50; ++i) v[i] = rng.uniform01();
            RearrangementCheck chk =
                rearrangement_inequality_check(DiscreteFunction(line, v), t, 0.0);
            if (chk.tv_rearranged > chk.tv_u * (1.0 + 1e-12)) ok = false;
        }
        add(out, S, "rearrangement_1d_exact", ok);
    }
    Kernel frac2 = make_kernel(KernelSpec::fractional(0.5, 2));
    { // 2-d inequality within the lattice tolerance
        GridDomain g = GridDomain::plane(16, 16, 1.0);
        KernelTable t = tabulate_offsets(frac2, g, 5);
        bool ok = true;
        for (int it = 0; it < 200; ++it) {
            DiscreteFunction u = rng.random_levels(g, 5);
            RearrangementCheck chk = rearrangement_inequality_check(u, t, 0.1);
            if (!chk.ok) ok = false;
        }
        add(out, S, "rearrangement_2d_tolerance", ok);
    }
    { // isoperimetric inequality against the prefix ball
        GridDomain g = GridDomain::plane(16, 16, 1.0);
        KernelTable t = tabulate_offsets(frac2, g, 5);
        bool ok = true, equality = true;
        for (int it = 0; it < 500; ++it) {
            DiscreteSet E = rng.random_set(g, 0.2 + 0.5 * rng.uniform01());
            if (!isoperimetric_check(E, t, 0.1).ok) ok = false;
        }
        DiscreteSet ball = prefix_ball(g, 60);
        IsoperimetricCheck chk = isoperimetric_check(ball, t, 0.0);
        if (std::abs(chk.p_set - chk.p_ball) > 1e-12 * chk.p_set) equality = false;
        add(out, S, "isoperimetric_random_sets", ok);
        add(out, S, "isoperimetric_ball_fixed_point", equality);
    }
    { // rearrangement preserves values, mass, and prefix structure
        GridDomain g = GridDomain::plane(9, 9, 1.0);
        bool ok = true;
        for (int it = 0; it < 50; ++it) {
            DiscreteFunction u = rng.random_levels(g, 6);
            DiscreteFunction star = sym_decreasing_rearrangement(u);
            std::vector<double> a(u.values().data(), u.values().data() + g.size());
            std::vector<double> b(star.values().data(), star.values().data() + g.size());
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b) ok = false;
            if (std::abs(u.values().abs().sum() - star.values().sum()) > 1e-12) ok = false;
            for (double t : {0.2, 0.5, 0.8}) {
                DiscreteSet level = star.superlevel(t);
                if (!(level == prefix_ball(g, level.cell_count()))) ok = false;
            }
        }
        add(out, S, "rearrangement_equimeasurable", ok);
    }
    { // isoperimetric ratio monotone under dilation
        GridDomain g = GridDomain::plane(12, 12, 0.25);
        DiscreteSet ball = make_ball_set(g, g.grid_center(), 1.1);
        DilationReport r1 = dilation_monotonicity_check(ball, frac2, {1.0, 2.0, 4.0}, 2.5, 20);
        Kernel cb = make_kernel(KernelSpec::constant_ball(1.0, 2));
        DilationReport r2 = dilation_monotonicity_check(ball, cb, {1.0, 2.0, 4.0}, 0.0, 20);
        add(out, S, "dilation_monotone_fractional", r1.nonincreasing && r1.strictly_decreasing);
        add(out, S, "dilation_monotone_constant_ball", r2.nonincreasing);
    }
    { // the lattice tolerance shrinks under refinement
        auto run = [&](int n) {
            GridDomain g = GridDomain::plane(n, n, 16.0 / n);
            KernelTable t = tabulate_offsets(frac2, g, std::max(4, n / 3));
            Rng local(seed + 9);
            Eigen::ArrayXd v(g.size());
            for (int i = 0; i < g.size(); ++i) {
                double x = g.center_x(i) / 16.0, y = g.center_y(i) / 16.0;
                (void)local;
                v[i] = std::max(0.0, std::sin(3.1 * x) * std::sin(2.7 * y + 0.4));
            }
            return rearrangement_inequality_check(DiscreteFunction(g, v), t, 0.1);
        };
        RearrangementCheck coarse = run(16), fine = run(32);
        add(out, S, "refinement_shrinks_tolerance",
            coarse.ok && fine.ok && fine.tolerance < coarse.tolerance,
            "tol " + fmt(coarse.tolerance) + " -> " + fmt(fine.tolerance));
    }
}

} // namespace

std::vector<CheckResult> verify_energy(std::uint64_t seed) {
    std::vector<CheckResult> out;
    suite_energy(out, seed);
    return out;
}
std::vector<CheckResult> verify_geom(std::uint64_t seed) {
    std::vector<CheckResult> out;
    suite_geom(out, seed);
    return out;
}
std::vector<CheckResult> verify_cheeger(std::uint64_t seed) {
    std::vector<CheckResult> out;
    suite_cheeger(out, seed);
    return out;
}
std::vector<CheckResult> verify_fidelity(std::uint64_t seed) {
    std::vector<CheckResult> out;
    suite_fidelity(out, seed);
    return out;
}
std::vector<CheckResult> verify_rearrange(std::uint64_t seed) {
    std::vector<CheckResult> out;
    suite_rearrange(out, seed);
    return out;
}

std::vector<CheckResult> run_verify_suite(const std::string& name, std::uint64_t seed) {
    if (name == "energy") return verify_energy(seed);
    if (name == "geom") return verify_geom(seed);
    if (name == "cheeger") return verify_cheeger(seed);
    if (name == "fidelity") return verify_fidelity(seed);
    if (name == "rearrange") return verify_rearrange(seed);
    if (name == "all") {
        std::vector<CheckResult> out = verify_energy(seed);
        for (auto&& suite : {verify_geom(seed), verify_cheeger(seed), verify_fidelity(seed),
                             verify_rearrange(seed)})
            out.insert(out.end(), suite.begin(), suite.end());
        return out;
    }
    throw InvalidParameter("unknown verify suite: " + name);
}

} // namespace nlbv
