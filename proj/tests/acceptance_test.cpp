// Acceptance suite: one test case per criterion, each printing a
// [criterion N] PASS/FAIL line with its runtime.

#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nlbv/cheeger.hpp"
#include "nlbv/fidelity.hpp"
#include "nlbv/func.hpp"
#include "nlbv/pnm.hpp"
#include "nlbv/rearrange.hpp"
#include "nlbv/rng.hpp"

using namespace nlbv;

namespace {

struct Criterion {
    const char* label;
    bool ok = true;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit Criterion(const char* l) : label(l) {}
    void note(bool pass) { ok = ok && pass; }
    ~Criterion() {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %s (%.2f s)\n", label, ok ? "PASS" : "FAIL", secs);
        std::fflush(stdout);
    }
};

#define ACC(c, expr)            \
    do {                        \
        bool _v = bool(expr);   \
        CHECK(_v);              \
        (c).note(_v);           \
    } while (0)

EnergyModel fractional_model(const GridDomain& g, int window, double w = 1.0) {
    Kernel f = make_kernel(KernelSpec::fractional(0.5, g.dim()));
    return EnergyModel(g, tabulate_offsets(f, g, window), WeightMeasure::constant(g, w),
                       Exterior::Zero);
}

// independent gray-code oracle for the best perimeter/measure ratio
std::pair<cap_t, cap_t> gray_code_best_ratio(const DiscreteSet& omega, const EnergyModel& model) {
    const GridDomain& grid = model.grid();
    std::vector<int> cells = omega.cells();
    DiscreteSet current(grid);
    cap_t p = 0, nu = 0, bp = 0, bn = 0;
    std::uint64_t prev = 0;
    for (std::uint64_t gcode = 1; gcode < (std::uint64_t(1) << cells.size()); ++gcode) {
        std::uint64_t gray = gcode ^ (gcode >> 1);
        int k = 0;
        std::uint64_t changed = gray ^ prev;
        prev = gray;
        while (!((changed >> k) & 1)) ++k;
        int i = cells[k];
        cap_t delta = 0;
        for (const auto& [off, qw] : model.qweights()) {
            int jx = grid.cell_x(i) + off.dx, jy = grid.cell_y(i) + off.dy;
            if (grid.contains(jx, jy)) delta += current.test(grid.index(jx, jy)) ? -qw : qw;
            else delta += qw;
        }
        if (!current.test(i)) { p += delta; nu += model.qnu(i); current.set(i, true); }
        else                  { p -= delta; nu -= model.qnu(i); current.set(i, false); }
        if (nu > 0 && (bn == 0 || p * bn < bp * nu)) { bp = p; bn = nu; }
    }
    return {bp, bn};
}

} // namespace

TEST_CASE("criterion 1: exhaustive geometric equivalence on 3x3") {
    Criterion c("criterion 1: exhaustive geometric equivalence");
    GridDomain g = GridDomain::plane(3, 3, 1.0);
    Kernel kern = make_kernel(KernelSpec::fractional(0.5, 2));
    KernelTable table = tabulate_offsets(kern, g, 2);
    Rng rng(2024);
    for (int it = 0; it < 200; ++it) {
        Eigen::ArrayXd w(g.size());
        for (int i = 0; i < g.size(); ++i) w[i] = 0.5 + 1.5 * rng.uniform01();
        EnergyModel model(g, table, WeightMeasure(g, w), Exterior::Zero);
        DiscreteSet E = rng.random_set(g, 0.5);
        double lambda = 0.05 + 3.0 * rng.uniform01();
        GeomSolution sol = solve_geometric(E, lambda, model);
        CutProblem problem = model.build_geometric_cut(E, lambda);

        cap_t best = 0;
        std::uint32_t and_mask = 0, or_mask = 0;
        bool first = true;
        for (std::uint32_t mask = 0; mask < 512; ++mask) {
            std::vector<char> in(9);
            for (int i = 0; i < 9; ++i) in[i] = (mask >> i) & 1u;
            cap_t e = problem.energy(in);
            if (first || e < best) { best = e; and_mask = or_mask = mask; first = false; }
            else if (e == best) { and_mask &= mask; or_mask |= mask; }
        }
        bool match = sol.energy_fp == best;
        for (int i = 0; i < 9; ++i) {
            match = match && sol.minimal.test(i) == bool((and_mask >> i) & 1u);
            match = match && sol.maximal.test(i) == bool((or_mask >> i) & 1u);
        }
        ACC(c, match);
        if (!match) break;
    }
}

TEST_CASE("criterion 2: coarea exactness") {
    Criterion c("criterion 2: coarea exactness");
    GridDomain g = GridDomain::plane(8, 8, 1.0);
    std::vector<Kernel> kernels = {make_kernel(KernelSpec::fractional(0.5, 2)),
                                   make_kernel(KernelSpec::constant_ball(2.5, 2)),
                                   make_kernel(KernelSpec::fraclog(0.25, 0.5, 2))};
    Rng rng(2025);
    for (const Kernel& k : kernels) {
        KernelTable t = tabulate_offsets(k, g, 3);
        double worst = 0.0;
        for (int it = 0; it < 100; ++it) {
            DiscreteFunction u = rng.random_levels(g, rng.uniform_int(2, 6));
            if (it % 2) u = DiscreteFunction(g, u.values() - 0.5);
            double tv = k_variation(u, t);
            double sum = 0.0;
            for (const auto& term : coarea_decompose(u, t)) sum += term.gap * term.perimeter;
            worst = std::max(worst, std::abs(sum - tv) / (1.0 + tv));
        }
        ACC(c, worst <= 1e-9);
    }
}

TEST_CASE("criterion 3: submodularity and complement invariance") {
    Criterion c("criterion 3: submodularity + complement invariance");
    GridDomain g = GridDomain::plane(6, 6, 1.0);
    Kernel kern = make_kernel(KernelSpec::fractional(0.5, 2));
    KernelTable t = tabulate_offsets(kern, g, 3);
    Rng rng(2026);
    bool sub_ok = true, comp_ok = true;
    for (int it = 0; it < 200; ++it) {
        DiscreteSet E = rng.random_set(g, 0.45), F = rng.random_set(g, 0.45);
        double lhs = k_perimeter(E.set_intersection(F), t) + k_perimeter(E.set_union(F), t);
        double rhs = k_perimeter(E, t) + k_perimeter(F, t);
        if (lhs > rhs + 1e-12 * (1.0 + rhs)) sub_ok = false;
        double a = k_perimeter(E, t);
        double b = k_perimeter(E.complement(), t, Exterior::Full);
        if (std::abs(a - b) > 1e-12 * (1.0 + a)) comp_ok = false;
    }
    ACC(c, sub_ok);
    ACC(c, comp_ok);
}

TEST_CASE("criterion 4: Cheeger two-path consistency") {
    Criterion c("criterion 4: Cheeger two-path consistency");
    Kernel kern = make_kernel(KernelSpec::fractional(0.5, 2));
    Rng rng(2027);
    for (int it = 0; it < 30; ++it) {
        int n = it < 20 ? 3 : 4;
        GridDomain g = GridDomain::plane(n, n, 1.0);
        EnergyModel model(g, tabulate_offsets(kern, g, 2), WeightMeasure::constant(g, 1.0),
                          Exterior::Zero);
        DiscreteSet omega = rng.random_set(g, 0.75);
        if (omega.empty()) omega.set(0, true);
        CheegerResult res = cheeger_solve(omega, model);
        auto [bp, bn] = gray_code_best_ratio(omega, model);
        ACC(c, res.h_num * bn == res.h_den * bp);
        ACC(c, certificate_check(res, omega, model));
    }
}

TEST_CASE("criterion 5: fidelity threshold equals the Cheeger constant") {
    Criterion c("criterion 5: fidelity-Cheeger threshold");
    GridDomain g = GridDomain::plane(32, 32, 0.125);
    EnergyModel model = fractional_model(g, 6);
    for (double r : {0.9, 1.2}) {
        DiscreteSet ball = make_ball_set(g, g.grid_center(), r);
        CheegerResult ch = cheeger_solve(ball, model);
        double tol = 1e-6 * ch.h;
        BallThreshold th = ball_threshold(ball, model, tol);
        double quantum = 1.0 / (model.fp().scale * model.weight().w_lo() * g.cell_measure());
        ACC(c, std::abs(th.lambda_star - ch.h) <= tol + 2.0 * quantum);

        double eps = 64.0 * quantum;
        GeomSolution below = solve_geometric(ball, ch.h - eps, model);
        GeomSolution above = solve_geometric(ball, ch.h + eps, model);
        ACC(c, below.minimal.empty() && below.maximal.empty());
        ACC(c, above.minimal == ball && above.maximal == ball);
    }
}

TEST_CASE("criterion 6: high-fidelity guarantee and fractional scaling") {
    Criterion c("criterion 6: high-fidelity guarantee");
    { // exact reproduction at the bound for three radii on 32x32
        GridDomain g = GridDomain::plane(32, 32, 0.125);
        EnergyModel model = fractional_model(g, 6);
        for (double r : {0.6, 0.9, 1.2}) {
            double lam = high_fidelity_lambda(r, model);
            DiscreteSet ball = make_ball_set(g, g.grid_center(), r);
            GeomSolution sol = solve_geometric(ball, lam, model);
            ACC(c, sol.minimal == ball && sol.maximal == ball);
        }
    }
    { // scaling of the constant under grid refinement (1-d, wide windows)
        Kernel kern = make_kernel(KernelSpec::fractional(0.5, 1));
        auto lambda_at = [&](double r, double h) {
            int window = int(std::lround(60.0 * r / h));
            int cells = int(std::lround(16.0 * r / h));
            GridDomain g = GridDomain::line(2 * cells + 9, h);
            EnergyModel model(g, tabulate_offsets(kern, g, window),
                              WeightMeasure::constant(g, 1.0), Exterior::Zero);
            return high_fidelity_lambda(r, model);
        };
        for (double h : {1.0 / 64, 1.0 / 128}) {
            double ratio = lambda_at(2.0, h) / lambda_at(1.0, h);
            ACC(c, std::abs(ratio - std::pow(2.0, -0.5)) <= 0.10 * std::pow(2.0, -0.5));
        }
    }
}

TEST_CASE("criterion 7: low-fidelity guarantee") {
    Criterion c("criterion 7: low-fidelity guarantee");
    Kernel kern = make_kernel(KernelSpec::fractional(0.5, 2));

    // geometrically similar grids per support radius
    auto model_for = [&](double R) {
        GridDomain g = GridDomain::plane(24, 24, R / 10.0);
        return EnergyModel(g, tabulate_offsets(kern, g, 6), WeightMeasure::constant(g, 1.0),
                           Exterior::Zero);
    };
    // calibrate once on the largest reference ball
    double R_ref = 4.0;
    EnergyModel ref_model = model_for(R_ref);
    DiscreteSet ref_ball =
        make_ball_set(ref_model.grid(), ref_model.grid().grid_center(), R_ref * 0.45);
    double C = calibrate_lusin_constant(kern, ref_model, ref_ball, R_ref * 0.45, 1e-6);
    ACC(c, C > 0.0);

    // the bound's R-dependence is exactly R^{-s}
    double b1 = low_fidelity_bound(kern, 1.0, 1.0, C);
    double b2 = low_fidelity_bound(kern, 2.0, 1.0, C);
    double b4 = low_fidelity_bound(kern, 4.0, 1.0, C);
    ACC(c, std::abs(b2 / b1 - std::pow(2.0, -0.5)) <= 0.15 * std::pow(2.0, -0.5));
    ACC(c, std::abs(b4 / b2 - std::pow(2.0, -0.5)) <= 0.15 * std::pow(2.0, -0.5));

    Rng rng(2028);
    for (double R : {1.0, 2.0, 4.0}) {
        EnergyModel model = model_for(R);
        double r_support = R * 0.45;
        double bound = low_fidelity_bound(kern, r_support, model.weight().w_hi(), C);
        bool all_zero = true;
        for (int it = 0; it < 20; ++it) {
            Eigen::ArrayXd v = Eigen::ArrayXd::Zero(model.grid().size());
            auto center = model.grid().grid_center();
            for (int i = 0; i < model.grid().size(); ++i) {
                double dx = model.grid().center_x(i) - center[0];
                double dy = model.grid().center_y(i) - center[1];
                if (dx * dx + dy * dy <= r_support * r_support)
                    v[i] = rng.uniform_int(0, 4) / 4.0;
            }
            for (double factor : {0.3, 0.7, 0.97}) {
                FunctionalSolution u = solve_functional(DiscreteFunction(model.grid(), v),
                                                        factor * bound, model, 5);
                if ((u.u.values() != 0.0).any()) all_zero = false;
            }
        }
        ACC(c, all_zero);
    }
}

TEST_CASE("criterion 8: functional solver optimality and algebra") {
    Criterion c("criterion 8: functional optimality + algebra");
    GridDomain g = GridDomain::plane(3, 3, 1.0);
    EnergyModel model = fractional_model(g, 2);
    Rng rng(2029);
    for (int it = 0; it < 12; ++it) {
        Eigen::ArrayXd v(g.size());
        for (int i = 0; i < g.size(); ++i) v[i] = rng.uniform_int(0, 2) / 2.0;
        DiscreteFunction f(g, v);
        double lambda = 0.1 + 2.0 * rng.uniform01();
        FunctionalSolution sol = solve_functional(f, lambda, model, 3);
        auto level_energy = [&](const DiscreteFunction& u) {
            cap_t total = 0;
            for (double t : {0.25, 0.75})
                total += model.geometric_energy_fp(u.superlevel(t), f.superlevel(t), lambda);
            return total;
        };
        cap_t solver_energy = level_energy(sol.u);
        bool beaten = false;
        for (int code = 0; code < 19683 && !beaten; ++code) {
            int cc = code;
            Eigen::ArrayXd cand(g.size());
            for (int i = 0; i < g.size(); ++i) { cand[i] = (cc % 3) / 2.0; cc /= 3; }
            if (level_energy(DiscreteFunction(g, cand)) < solver_energy) beaten = true;
        }
        ACC(c, !beaten);
    }
    // solution algebra: exact equivariances on a closed grid
    GridDomain g5 = GridDomain::plane(5, 5, 1.0);
    Kernel kern = make_kernel(KernelSpec::fractional(0.5, 2));
    EnergyModel closed(g5, tabulate_offsets(kern, g5, 2), WeightMeasure::constant(g5, 1.0),
                       Exterior::None);
    for (int it = 0; it < 3; ++it) {
        SolutionAlgebraReport rep =
            verify_solution_algebra(rng.random_levels(g5, 3), 0.3 + rng.uniform01(), closed, 4);
        ACC(c, rep.shift_exact);
        ACC(c, rep.flip_exact);
        ACC(c, rep.truncate_min_exact && rep.truncate_max_exact);
        ACC(c, rep.split_consistent);
    }
}

TEST_CASE("criterion 9: isoperimetric and rearrangement suites") {
    Criterion c("criterion 9: isoperimetric + rearrangement");
    Kernel kern = make_kernel(KernelSpec::fractional(0.5, 2));
    GridDomain g = GridDomain::plane(16, 16, 1.0);
    KernelTable t = tabulate_offsets(kern, g, 5);
    Rng rng(2030);

    bool iso_ok = true;
    for (int it = 0; it < 500; ++it) {
        DiscreteSet E = rng.random_set(g, 0.15 + 0.6 * rng.uniform01());
        if (!isoperimetric_check(E, t, 0.1).ok) iso_ok = false;
    }
    ACC(c, iso_ok);

    bool re_ok = true;
    for (int it = 0; it < 200; ++it) {
        if (!rearrangement_inequality_check(rng.random_levels(g, 6), t, 0.1).ok) re_ok = false;
    }
    ACC(c, re_ok);

    // one refinement halving: the same continuum data at h and h/2, the
    // lattice tolerance shrinks and the checks still pass
    auto sample = [&](int n, int field) {
        GridDomain gf = GridDomain::plane(n, n, 16.0 / n);
        Eigen::ArrayXd v(gf.size());
        for (int i = 0; i < gf.size(); ++i) {
            double x = gf.center_x(i) / 16.0, y = gf.center_y(i) / 16.0;
            v[i] = std::max(0.0, std::sin(2.9 * x + 0.37 * field) *
                                     std::sin(2.3 * y + 0.61 * field));
        }
        return DiscreteFunction(gf, v);
    };
    bool refine_ok = true;
    for (int field = 0; field < 6; ++field) {
        DiscreteFunction coarse = sample(16, field), fine = sample(32, field);
        KernelTable tc = tabulate_offsets(kern, coarse.grid(), 5);
        KernelTable tf = tabulate_offsets(kern, fine.grid(), 10);
        RearrangementCheck a = rearrangement_inequality_check(coarse, tc, 0.1);
        RearrangementCheck b = rearrangement_inequality_check(fine, tf, 0.1);
        if (!(a.ok && b.ok && b.tolerance < a.tolerance)) refine_ok = false;
    }
    ACC(c, refine_ok);
}

TEST_CASE("criterion 10: isoperimetric function behavior") {
    Criterion c("criterion 10: beta_K behavior");
    { // integrable kernel: beta(v)/v within 5% of the mass after halvings
        Kernel cb = make_kernel(KernelSpec::constant_ball(1.0, 1));
        double mass = cb.l1_mass();
        double v = 0.4;
        double gap = kInf;
        for (int k = 0; k < 4; ++k) {
            BetaResult b = beta_K(cb, v, 2);
            gap = std::abs(b.value / v - mass);
            v /= 2.0;
        }
        ACC(c, gap <= 0.05 * mass);
    }
    { // fractional: beta(v) v^{q/n-2} nonincreasing within reported error
        Kernel f = make_kernel(KernelSpec::fractional(0.5, 1));
        const double q = 1.5;
        double prev = kInf, prev_err = 0.0;
        bool mono = true;
        for (int k = 0; k < 10; ++k) {
            double v = 0.5 * std::pow(1.7, k);
            BetaResult b = beta_K(f, v, 2);
            double val = b.value * std::pow(v, q - 2.0);
            double err = b.error_estimate * std::pow(v, q - 2.0);
            if (!(val <= prev + err + prev_err)) mono = false;
            prev = val;
            prev_err = err;
        }
        ACC(c, mono);
    }
}

TEST_CASE("criterion 11: end-to-end determinism of the CLI") {
    Criterion c("criterion 11: end-to-end determinism");
#ifndef NLBV_CLI_PATH
    FAIL("CLI path not configured");
#else
    // a small noisy image plus a JSON config; two runs must be identical
    GridDomain g = GridDomain::plane(24, 24, 1.0);
    Rng rng(2031);
    Eigen::ArrayXd v(g.size());
    for (int i = 0; i < g.size(); ++i) {
        double dx = g.cell_x(i) - 11.5, dy = g.cell_y(i) - 11.5;
        v[i] = (dx * dx + dy * dy <= 49.0 ? 0.8 : 0.15) + 0.1 * rng.uniform01();
    }
    save_pgm("acc_in.pgm", DiscreteFunction(g, v.min(1.0)), 0.0, 1.0);
    {
        std::ofstream k("acc_kernel.json");
        k << R"({"family":"fractional","s":0.5,"n":2,"window":5})";
    }
    {
        std::ofstream cfg("acc_config.json");
        cfg << R"({"kernel":"acc_kernel.json","lambda":1.2,"levels":8,"pad":5})";
    }
    auto run = [&](const char* out, const char* csv) {
        std::ostringstream cmd;
        cmd << NLBV_CLI_PATH << " denoise --config acc_config.json --input acc_in.pgm --out "
            << out << " --csv " << csv << " > /dev/null";
        return std::system(cmd.str().c_str());
    };
    ACC(c, run("acc_u1.pgm", "acc_e1.csv") == 0);
    ACC(c, run("acc_u2.pgm", "acc_e2.csv") == 0);
    auto slurp = [](const char* path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string u1 = slurp("acc_u1.pgm"), u2 = slurp("acc_u2.pgm");
    ACC(c, !u1.empty());
    ACC(c, u1 == u2);
    ACC(c, slurp("acc_e1.csv") == slurp("acc_e2.csv"));
    // the denoised image differs from the input (the solver did something)
    ACC(c, u1 != slurp("acc_in.pgm"));
#endif
}
