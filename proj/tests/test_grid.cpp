#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "nlbv/kernel.hpp"
#include "nlbv/pnm.hpp"
#include "nlbv/rng.hpp"

using namespace nlbv;

namespace {

std::string temp_path(const char* name) {
    return std::string("nlbv_test_") + name;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

} // namespace

TEST_CASE("pgm ascii load scales to [0,1]") {
    std::string path = temp_path("a.pgm");
    write_file(path, "P2\n# comment\n2 2\n255\n0 255\n255 0\n");
    DiscreteFunction f = load_pgm(path);
    CHECK(f.grid().nx() == 2);
    CHECK(f.grid().ny() == 2);
    CHECK(f[0] == 0.0);
    CHECK(f[1] == 1.0);
    CHECK(f[2] == 1.0);
    CHECK(f[3] == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("pgm round trip at 8-bit resolution") {
    GridDomain g = GridDomain::plane(7, 5, 1.0);
    Rng rng(3);
    Eigen::ArrayXd v(g.size());
    for (int i = 0; i < g.size(); ++i) v[i] = rng.uniform_int(0, 255) / 255.0;
    DiscreteFunction f(g, v);
    std::string path = temp_path("b.pgm");
    save_pgm(path, f, 0.0, 1.0);
    DiscreteFunction f2 = load_pgm(path);
    CHECK((f2.values() - f.values()).abs().maxCoeff() == 0.0);
    // load(save(load(x))) is the identity once on the 8-bit lattice
    save_pgm(path, f2, 0.0, 1.0);
    DiscreteFunction f3 = load_pgm(path);
    CHECK((f3.values() - f2.values()).abs().maxCoeff() == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("pgm 16-bit and clamping") {
    GridDomain g = GridDomain::line(4, 1.0);
    DiscreteFunction f(g, Eigen::ArrayXd{{-0.5, 0.25, 0.75, 2.0}});
    std::string path = temp_path("c.pgm");
    save_pgm(path, f, 0.0, 1.0, 65535);
    DiscreteFunction f2 = load_pgm(path);
    CHECK(f2[0] == 0.0); // clamped
    CHECK(f2[1] == doctest::Approx(0.25).epsilon(1e-4));
    CHECK(f2[3] == 1.0); // clamped
    std::remove(path.c_str());
}

TEST_CASE("pnm error paths") {
    std::string path = temp_path("d.ppm");
    write_file(path, "P3\n2 2\n255\n0 0 0 0 0 0 0 0 0 0 0 0\n");
    CHECK_THROWS_AS(load_pgm(path), UnsupportedFormat);
    write_file(path, "P5\n2 2\n255\nab"); // truncated
    CHECK_THROWS_AS(load_pgm(path), MalformedHeader);
    write_file(path, "Q5\n2 2\n255\n");
    CHECK_THROWS_AS(load_pgm(path), MalformedHeader);
    write_file(path, "P2\n2 2\n0\n");
    CHECK_THROWS_AS(load_pgm(path), MalformedHeader);
    std::remove(path.c_str());
}

TEST_CASE("pbm round trip") {
    GridDomain g = GridDomain::plane(11, 4, 1.0);
    Rng rng(5);
    DiscreteSet s = rng.random_set(g, 0.4);
    std::string path = temp_path("e.pbm");
    save_pbm(path, s);
    DiscreteSet s2 = load_pbm(path);
    CHECK(s2 == s);
    // ascii P1 parses too
    write_file(path, "P1\n3 1\n1 0 1\n");
    DiscreteSet s3 = load_pbm(path);
    CHECK(s3.cell_count() == 2);
    CHECK(s3.test(0));
    CHECK_FALSE(s3.test(1));
    std::remove(path.c_str());
}

TEST_CASE("quantize thresholds and superlevels") {
    GridDomain g = GridDomain::line(3, 1.0);
    DiscreteFunction f(g, Eigen::ArrayXd{{0.0, 0.5, 1.0}});
    QuantizeResult q = quantize(f, 2);
    REQUIRE(q.thresholds.size() == 1);
    CHECK(q.thresholds[0] == doctest::Approx(0.5));
    // strict superlevel at the threshold keeps only the top value
    DiscreteSet level = f.superlevel(q.thresholds[0]);
    CHECK(level.cell_count() == 1);
    CHECK(level.test(2));
    // quantized within delta/2 and with identical superlevels
    CHECK((q.quantized.values() - f.values()).abs().maxCoeff() <= q.delta / 2.0 + 1e-15);
    CHECK(q.quantized.superlevel(q.thresholds[0]) == level);

    CHECK_THROWS_AS(quantize(f, 1), InvalidParameter);
    QuantizeResult qc = quantize(DiscreteFunction(g, Eigen::ArrayXd::Constant(3, 0.3)), 4);
    CHECK(qc.constant_input);
    CHECK(qc.thresholds.empty());
}

TEST_CASE("quantize nestedness and reconstruction bound") {
    GridDomain g = GridDomain::plane(6, 6, 1.0);
    Rng rng(17);
    for (int it = 0; it < 20; ++it) {
        Eigen::ArrayXd v(g.size());
        for (int i = 0; i < g.size(); ++i) v[i] = rng.uniform01() * 3.0 - 1.0;
        DiscreteFunction f(g, v);
        int m = rng.uniform_int(2, 7);
        QuantizeResult q = quantize(f, m);
        for (std::size_t k = 0; k + 1 < q.thresholds.size(); ++k) {
            CHECK(q.thresholds[k] < q.thresholds[k + 1]);
            CHECK(f.superlevel(q.thresholds[k + 1]).subset_of(f.superlevel(q.thresholds[k])));
        }
        // stacking reconstruction differs from f by at most delta
        double lo = f.values().minCoeff();
        for (int i = 0; i < g.size(); ++i) {
            int count = 0;
            for (double t : q.thresholds)
                if (f[i] > t) ++count;
            CHECK(std::abs(lo + q.delta * count - f[i]) <= q.delta + 1e-12);
        }
        CHECK((q.quantized.values() - f.values()).abs().maxCoeff() <= q.delta / 2.0 + 1e-12);
    }
}

TEST_CASE("make_ball_set boundary rule") {
    GridDomain line = GridDomain::line(5, 1.0);
    DiscreteSet b = make_ball_set(line, {2.0, 0.0}, 1.5);
    CHECK(b.cell_count() == 3);
    CHECK(b.test(1));
    CHECK(b.test(2));
    CHECK(b.test(3));

    DiscreteSet all = make_ball_set(line, {2.0, 0.0}, 100.0);
    CHECK(all.full());

    // |B| converges to the continuum ball volume under refinement
    double r = 0.8;
    double prev_err = kInf;
    for (int n : {16, 32, 64, 128}) {
        GridDomain g = GridDomain::plane(n, n, 2.0 / n, {-1.0 + 1.0 / n, -1.0 + 1.0 / n});
        DiscreteSet ball = make_ball_set(g, {0.0, 0.0}, r);
        double err = std::abs(ball.volume() - ball_volume(2, r));
        CHECK(err <= prev_err + 1e-12);
        prev_err = err;
    }
    CHECK(prev_err <= 0.01 * ball_volume(2, r));
}

TEST_CASE("weight measure additivity and validation") {
    GridDomain g = GridDomain::plane(5, 5, 0.5);
    Rng rng(23);
    Eigen::ArrayXd w(g.size());
    for (int i = 0; i < g.size(); ++i) w[i] = 0.25 + rng.uniform01();
    WeightMeasure nu(g, w);
    for (int it = 0; it < 50; ++it) {
        DiscreteSet A = rng.random_set(g, 0.5), B = rng.random_set(g, 0.5);
        double lhs = nu.measure(A.set_union(B)) + nu.measure(A.set_intersection(B));
        double rhs = nu.measure(A) + nu.measure(B);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    CHECK(nu.w_lo() > 0.0);
    CHECK(nu.w_lo() <= nu.w_hi());
    CHECK_THROWS_AS(WeightMeasure(g, Eigen::ArrayXd::Zero(g.size())), InvalidParameter);

    // weight loaded from a PGM lands in the requested range
    std::string path = temp_path("w.pgm");
    save_pgm(path, DiscreteFunction(g, Eigen::ArrayXd::LinSpaced(g.size(), 0.0, 1.0)), 0.0, 1.0);
    WeightMeasure nw = load_weight_pgm(path, 0.5, 2.0, 0.5);
    CHECK(nw.w_lo() >= 0.5);
    CHECK(nw.w_hi() <= 2.0);
    std::remove(path.c_str());
}

TEST_CASE("grid and set basics") {
    GridDomain g = GridDomain::plane(4, 3, 0.5, {1.0, 2.0});
    CHECK(g.size() == 12);
    CHECK(g.center_x(g.index(2, 1)) == doctest::Approx(2.0));
    CHECK(g.center_y(g.index(2, 1)) == doctest::Approx(2.5));
    CHECK_THROWS_AS(GridDomain::plane(0, 3, 1.0), InvalidParameter);
    CHECK_THROWS_AS(GridDomain::plane(3, 3, 0.0), InvalidParameter);

    DiscreteSet s(g);
    s.set(0, true);
    s.set(5, true);
    CHECK(s.cell_count() == 2);
    s.set(5, false);
    CHECK(s.cell_count() == 1);
    CHECK(s.complement().cell_count() == 11);
    CHECK(s.subset_of(s.set_union(s.complement())));
    CHECK(s.volume() == doctest::Approx(0.25));

    CHECK_THROWS_AS(DiscreteFunction(g, Eigen::ArrayXd::Zero(5)), GridMismatch);
    Eigen::ArrayXd bad = Eigen::ArrayXd::Zero(g.size());
    bad[3] = kInf;
    CHECK_THROWS_AS(DiscreteFunction(g, bad), InvalidParameter);
}
