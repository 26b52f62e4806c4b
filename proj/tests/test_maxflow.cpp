#include <doctest.h>

#include "nlbv/maxflow.hpp"
#include "nlbv/rng.hpp"

using namespace nlbv;

namespace {

// exhaustive minimizers: value plus the AND/OVER masks of all achievers
struct Exhaustive {
    cap_t best;
    std::uint32_t and_mask, or_mask;
};

Exhaustive brute_force(const CutProblem& p) {
    const int n = p.node_count();
    Exhaustive out{0, 0, 0};
    bool first = true;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<char> in(n);
        for (int i = 0; i < n; ++i) in[i] = (mask >> i) & 1u;
        cap_t e = p.energy(in);
        if (first || e < out.best) {
            out = {e, mask, mask};
            first = false;
        } else if (e == out.best) {
            out.and_mask &= mask;
            out.or_mask |= mask;
        }
    }
    return out;
}

std::uint32_t mask_of(const std::vector<char>& v) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) m |= 1u << i;
    return m;
}

} // namespace

TEST_CASE("two-node chain") {
    // membership of a costs 3, exclusion of b costs 3, exchanging costs 1;
    // the unique minimizer is {b} with energy 1
    CutProblem p(2);
    p.add_membership_cost(0, 3);
    p.add_exclusion_cost(1, 3);
    p.add_pairwise(0, 1, 1);
    CutSolution sol = solve_cut(p);
    CHECK((long long)sol.max_flow == 1);
    CHECK(sol.minimal_set == std::vector<char>{0, 1});
    CHECK(sol.maximal_set == std::vector<char>{0, 1});
    CHECK(flow_is_valid(p, sol));
    Exhaustive ex = brute_force(p);
    CHECK(ex.best == sol.min_energy);
    CHECK(ex.and_mask == 2u);
    CHECK(ex.or_mask == 2u);
}

TEST_CASE("separable problems and tie handling") {
    Rng rng(61);
    for (int it = 0; it < 50; ++it) {
        const int n = 6;
        CutProblem p(n);
        std::vector<long long> a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a[i] = rng.uniform_int(0, 5);
            b[i] = rng.uniform_int(0, 5);
            p.add_membership_cost(i, a[i]);
            p.add_exclusion_cost(i, b[i]);
        }
        CutSolution sol = solve_cut(p);
        long long expect = 0;
        for (int i = 0; i < n; ++i) expect += std::min(a[i], b[i]);
        CHECK((long long)sol.min_energy == expect);
        for (int i = 0; i < n; ++i) {
            // strict preferences are decided; ties go to the maximal set only
            CHECK(sol.minimal_set[i] == (a[i] < b[i]));
            CHECK(sol.maximal_set[i] == (a[i] <= b[i]));
        }
    }
}

TEST_CASE("random 9-node problems against the exhaustive oracle") {
    Rng rng(67);
    for (int it = 0; it < 500; ++it) {
        CutProblem p(9);
        for (int i = 0; i < 9; ++i) {
            p.add_membership_cost(i, rng.uniform_int(0, 20));
            p.add_exclusion_cost(i, rng.uniform_int(0, 20));
        }
        int pairs = rng.uniform_int(0, 14);
        for (int k = 0; k < pairs; ++k) {
            int i = rng.uniform_int(0, 8), j = rng.uniform_int(0, 8);
            if (i == j) continue;
            p.add_pairwise(i, j, rng.uniform_int(0, 9));
        }
        CutSolution sol = solve_cut(p);
        Exhaustive ex = brute_force(p);
        REQUIRE(sol.min_energy == ex.best);
        CHECK(mask_of(sol.minimal_set) == ex.and_mask);
        CHECK(mask_of(sol.maximal_set) == ex.or_mask);
        CHECK(flow_is_valid(p, sol));
        // both reported sets achieve the optimum
        CHECK(p.energy(sol.minimal_set) == ex.best);
        CHECK(p.energy(sol.maximal_set) == ex.best);
    }
}

TEST_CASE("signed costs normalize into an offset") {
    CutProblem p(2);
    p.add_membership_cost(0, -5);
    p.add_exclusion_cost(1, -2);
    p.add_pairwise(0, 1, 3);
    CHECK((long long)p.offset() == -7);
    CutSolution sol = solve_cut(p);
    Exhaustive ex = brute_force(p);
    CHECK(sol.min_energy == ex.best);
    CHECK((long long)sol.min_energy == -5); // {0} in, {1} in: -5 + 0 + 0
    CHECK_THROWS_AS(p.add_pairwise(0, 1, -1), InvalidParameter);
}

TEST_CASE("minimal minimizers are monotone in the unary costs") {
    // decreasing membership costs and increasing exclusion costs can only
    // grow the extremal minimizers: the lattice mechanism behind the
    // comparison principle
    Rng rng(71);
    for (int it = 0; it < 200; ++it) {
        const int n = 8;
        std::vector<long long> mem(n), exc(n);
        CutProblem p1(n);
        for (int i = 0; i < n; ++i) {
            mem[i] = rng.uniform_int(0, 15);
            exc[i] = rng.uniform_int(0, 15);
            p1.add_membership_cost(i, mem[i]);
            p1.add_exclusion_cost(i, exc[i]);
        }
        std::vector<std::array<int, 3>> pairs;
        for (int k = 0; k < 10; ++k) {
            int i = rng.uniform_int(0, n - 1), j = rng.uniform_int(0, n - 1);
            if (i == j) continue;
            int c = rng.uniform_int(0, 8);
            pairs.push_back({i, j, c});
            p1.add_pairwise(i, j, c);
        }
        CutProblem p2(n);
        for (int i = 0; i < n; ++i) {
            p2.add_membership_cost(i, mem[i] - rng.uniform_int(0, mem[i] > 0 ? int(mem[i]) : 0));
            p2.add_exclusion_cost(i, exc[i] + rng.uniform_int(0, 6));
        }
        for (auto [i, j, c] : pairs) p2.add_pairwise(i, j, c);

        CutSolution s1 = solve_cut(p1), s2 = solve_cut(p2);
        for (int i = 0; i < n; ++i) {
            CHECK(s1.minimal_set[i] <= s2.minimal_set[i]);
            CHECK(s1.maximal_set[i] <= s2.maximal_set[i]);
        }
    }
}
