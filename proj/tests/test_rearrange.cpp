#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nlbv/rearrange.hpp"
#include "nlbv/rng.hpp"

using namespace nlbv;

TEST_CASE("center ordering and prefix balls") {
    GridDomain g = GridDomain::plane(5, 5, 1.0);
    std::vector<int> order = center_ordering(g);
    CHECK(order.size() == 25);
    CHECK(order[0] == g.index(2, 2)); // the exact center comes first
    // distances are nondecreasing along the ordering
    auto d2 = [&](int i) {
        double dx = g.center_x(i) - g.grid_center()[0];
        double dy = g.center_y(i) - g.grid_center()[1];
        return dx * dx + dy * dy;
    };
    for (std::size_t k = 0; k + 1 < order.size(); ++k)
        CHECK(d2(order[k]) <= d2(order[k + 1]) + 1e-12);

    DiscreteSet ball = prefix_ball(g, 9);
    CHECK(ball.cell_count() == 9);
    CHECK(ball.test(g.index(2, 2)));
    CHECK_THROWS_AS(prefix_ball(g, 100), InvalidParameter);
}

TEST_CASE("rearrangement fixed points and equimeasurability") {
    GridDomain g = GridDomain::plane(9, 9, 0.5);
    // radially decreasing data are fixed points
    Eigen::ArrayXd radial(g.size());
    for (int i = 0; i < g.size(); ++i) {
        double dx = g.center_x(i) - g.grid_center()[0];
        double dy = g.center_y(i) - g.grid_center()[1];
        radial[i] = std::exp(-(dx * dx + dy * dy));
    }
    DiscreteFunction u(g, radial);
    DiscreteFunction star = sym_decreasing_rearrangement(u);
    CHECK((star.values() - u.values()).abs().maxCoeff() <= 1e-15);

    Rng rng(167);
    for (int it = 0; it < 30; ++it) {
        Eigen::ArrayXd v(g.size());
        for (int i = 0; i < g.size(); ++i) v[i] = rng.uniform01() * 2.0 - 0.7;
        DiscreteFunction w(g, v);
        DiscreteFunction ws = sym_decreasing_rearrangement(w);
        // value multiset of |w| preserved
        std::vector<double> a(g.size()), b(g.size());
        for (int i = 0; i < g.size(); ++i) { a[i] = std::abs(v[i]); b[i] = ws[i]; }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        for (int i = 0; i < g.size(); ++i) CHECK(a[i] == b[i]);
        // L1 norm preserved, superlevels are prefix balls of matching size
        CHECK(ws.values().sum() == doctest::Approx(w.values().abs().sum()).epsilon(1e-12));
        for (double t : {0.1, 0.4, 0.9}) {
            DiscreteSet level = ws.superlevel(t);
            CHECK(level == prefix_ball(g, level.cell_count()));
            std::int64_t abs_count = 0;
            for (int i = 0; i < g.size(); ++i)
                if (std::abs(v[i]) > t) ++abs_count;
            CHECK(level.cell_count() == abs_count);
        }
    }
}

TEST_CASE("rearrangement inequality") {
    { // exact in one dimension
        Kernel f1 = make_kernel(KernelSpec::fractional(0.3, 1));
        GridDomain line = GridDomain::line(48, 1.0);
        KernelTable t = tabulate_offsets(f1, line, 10);
        Rng rng(173);
        for (int it = 0; it < 100; ++it) {
            Eigen::ArrayXd v = Eigen::ArrayXd::Zero(line.size());
            for (int i = 12; i < 36; ++i) v[i] = rng.uniform01();
            RearrangementCheck chk = rearrangement_inequality_check(DiscreteFunction(line, v), t);
            CHECK(chk.tv_rearranged <= chk.tv_u * (1.0 + 1e-12));
        }
    }
    { // within the lattice tolerance in two dimensions
        Kernel f2 = make_kernel(KernelSpec::fractional(0.5, 2));
        GridDomain g = GridDomain::plane(14, 14, 1.0);
        KernelTable t = tabulate_offsets(f2, g, 4);
        Rng rng(179);
        for (int it = 0; it < 100; ++it) {
            RearrangementCheck chk =
                rearrangement_inequality_check(rng.random_levels(g, 5), t, 0.1);
            CHECK(chk.ok);
            CHECK(chk.tolerance == doctest::Approx(0.1 * t.spacing() * chk.tv_u));
        }
    }
    { // an indicator of a centered prefix ball is a fixed point
        Kernel f2 = make_kernel(KernelSpec::fractional(0.5, 2));
        GridDomain g = GridDomain::plane(11, 11, 1.0);
        KernelTable t = tabulate_offsets(f2, g, 4);
        DiscreteFunction chi = DiscreteFunction::indicator(prefix_ball(g, 21));
        RearrangementCheck chk = rearrangement_inequality_check(chi, t, 0.0);
        CHECK(chk.tv_rearranged == doctest::Approx(chk.tv_u).epsilon(1e-12));
    }
}

TEST_CASE("isoperimetric inequality") {
    Kernel f2 = make_kernel(KernelSpec::fractional(0.5, 2));
    GridDomain g = GridDomain::plane(16, 16, 1.0);
    KernelTable t = tabulate_offsets(f2, g, 5);
    Rng rng(181);
    for (int it = 0; it < 100; ++it) {
        DiscreteSet E = rng.random_set(g, 0.1 + 0.6 * rng.uniform01());
        IsoperimetricCheck chk = isoperimetric_check(E, t, 0.1);
        CHECK(chk.ok);
    }
    // equality for the prefix ball itself
    IsoperimetricCheck eq = isoperimetric_check(prefix_ball(g, 49), t, 0.0);
    CHECK(eq.p_set == doctest::Approx(eq.p_ball).epsilon(1e-12));
    CHECK(eq.ok);

    // scattered cells are far from optimal
    DiscreteSet scattered(g);
    for (int y = 1; y < 16; y += 3)
        for (int x = 1; x < 16; x += 3) scattered.set(g.index(x, y), true);
    IsoperimetricCheck far = isoperimetric_check(scattered, t, 0.0);
    CHECK(far.p_set > 1.5 * far.p_ball);
}

TEST_CASE("dilation monotonicity") {
    Kernel f2 = make_kernel(KernelSpec::fractional(0.5, 2));
    GridDomain g = GridDomain::plane(10, 10, 0.3);
    DiscreteSet ball = make_ball_set(g, g.grid_center(), 1.0);

    DilationReport rep = dilation_monotonicity_check(ball, f2, {1.0, 2.0, 4.0}, 2.5, 16);
    REQUIRE(rep.steps.size() == 3);
    CHECK(rep.nonincreasing);
    CHECK(rep.strictly_decreasing);
    // exponent 2 - q/n = 0.75 here; ratios must decay
    CHECK(rep.steps[2].ratio < rep.steps[0].ratio);

    // r = R: equality of the two entries
    DilationReport same = dilation_monotonicity_check(ball, f2, {2.0, 2.0}, 2.5, 16);
    CHECK(same.steps[0].ratio == doctest::Approx(same.steps[1].ratio));
    CHECK(same.nonincreasing);

    // constant-ball kernel has q = 0: exponent 2 applies
    Kernel cb = make_kernel(KernelSpec::constant_ball(1.0, 2));
    DilationReport rep2 = dilation_monotonicity_check(ball, cb, {1.0, 2.0, 4.0}, 0.0, 16);
    CHECK(rep2.nonincreasing);

    CHECK_THROWS_AS(dilation_monotonicity_check(DiscreteSet(g), f2, {1.0, 2.0}, 2.5),
                    InvalidParameter);
    CHECK_THROWS_AS(dilation_monotonicity_check(ball, f2, {2.0, 1.0}, 2.5), InvalidParameter);
}
