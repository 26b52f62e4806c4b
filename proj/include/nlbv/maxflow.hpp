#ifndef NLBV_MAXFLOW_HPP
#define NLBV_MAXFLOW_HPP

#include <cstdint>
#include <vector>

#include "nlbv/errors.hpp"

namespace nlbv {

/// Fixed-point capacity type. Wide enough for the cross-multiplied
/// capacities of the ratio (Dinkelbach) solves.
using cap_t = __int128;

struct PairTerm {
    int a, b;
    cap_t cap; ///< symmetric exchange capacity, >= 0
};

/// Binary submodular energy
///   E(U) = sum_{i in U} membership_i + sum_{i not in U} exclusion_i
///        + sum_pairs cap * [a in U xor b in U] + offset.
/// Signed unary costs are normalized into nonnegative terminal capacities
/// plus a tracked constant offset.
class CutProblem {
public:
    explicit CutProblem(int node_count)
        : n_(node_count), src_(node_count, 0), snk_(node_count, 0) {}

    int node_count() const { return n_; }

    /// Adds a (possibly negative) cost for node i belonging to the set.
    void add_membership_cost(int i, cap_t c) {
        if (c >= 0) src_[i] += c;
        else { snk_[i] += -c; offset_ += c; }
    }
    /// Adds a (possibly negative) cost for node i staying outside.
    void add_exclusion_cost(int i, cap_t c) {
        if (c >= 0) snk_[i] += c;
        else { src_[i] += -c; offset_ += c; }
    }
    void add_pairwise(int a, int b, cap_t cap) {
        if (cap < 0) throw InvalidParameter("pairwise capacity must be nonnegative");
        if (cap == 0) return;
        pairs_.push_back({a, b, cap});
    }

    cap_t offset() const { return offset_; }
    const std::vector<cap_t>& membership_caps() const { return src_; }
    const std::vector<cap_t>& exclusion_caps() const { return snk_; }
    const std::vector<PairTerm>& pairs() const { return pairs_; }

    /// Energy of an explicit assignment (1 = in the set), offset included.
    cap_t energy(const std::vector<char>& in_set) const {
        cap_t e = offset_;
        for (int i = 0; i < n_; ++i) e += in_set[i] ? src_[i] : snk_[i];
        for (const auto& p : pairs_)
            if (in_set[p.a] != in_set[p.b]) e += p.cap;
        return e;
    }

private:
    int n_;
    std::vector<cap_t> src_, snk_;
    std::vector<PairTerm> pairs_;
    cap_t offset_ = 0;
};

struct CutSolution {
    cap_t max_flow = 0;           ///< value of the minimum cut
    cap_t min_energy = 0;         ///< max_flow + problem offset
    std::vector<char> minimal_set;///< inclusion-minimal minimizer
    std::vector<char> maximal_set;///< inclusion-maximal minimizer
    std::vector<cap_t> pair_flow; ///< net flow a->b per pairwise term
    std::vector<cap_t> membership_flow; ///< flow on the terminal arc paying membership
    std::vector<cap_t> exclusion_flow;  ///< flow on the terminal arc paying exclusion
};

/// Exact integer max-flow (Dinic). The minimal minimizer comes from
/// residual co-reachability of the sink, the maximal one from residual
/// reachability of the source.
CutSolution solve_cut(const CutProblem& problem);

/// Flow conservation at every interior node and capacity feasibility.
bool flow_is_valid(const CutProblem& problem, const CutSolution& solution);

} // namespace nlbv

#endif
