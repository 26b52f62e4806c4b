#include "nlbv/maxflow.hpp"

#include <algorithm>
#include <limits>

namespace nlbv {

namespace {

constexpr cap_t kCapMax = cap_t(1) << 126;

// Dinic on a CSR residual graph. Nodes 0..n-1 are cells, n is the source,
// n+1 the sink.
struct Dinic {
    int V;
    std::vector<int> head;   // V+1 offsets into the arc arrays
    std::vector<int> to, rev;
    std::vector<cap_t> cap;
    std::vector<int> level, it;

    explicit Dinic(int vertices) : V(vertices), head(vertices + 1, 0) {}

    void finish_offsets() {
        for (int v = 0; v < V; ++v) head[v + 1] += head[v];
        to.assign(head[V], 0);
        rev.assign(head[V], 0);
        cap.assign(head[V], 0);
        fill_pos = std::vector<int>(head.begin(), head.end() - 1);
    }

    std::vector<int> fill_pos;

    // returns the index of the forward arc
    int add_arc(int u, int v, cap_t c_uv, cap_t c_vu) {
        int iu = fill_pos[u]++;
        int iv = fill_pos[v]++;
        to[iu] = v; cap[iu] = c_uv; rev[iu] = iv;
        to[iv] = u; cap[iv] = c_vu; rev[iv] = iu;
        return iu;
    }

    bool bfs(int s, int t) {
        level.assign(V, -1);
        std::vector<int> queue;
        queue.reserve(V);
        queue.push_back(s);
        level[s] = 0;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            int u = queue[q];
            for (int a = head[u]; a < head[u + 1]; ++a) {
                if (cap[a] > 0 && level[to[a]] < 0) {
                    level[to[a]] = level[u] + 1;
                    queue.push_back(to[a]);
                }
            }
        }
        return level[t] >= 0;
    }

    cap_t dfs(int u, int t, cap_t limit) {
        if (u == t) return limit;
        cap_t pushed = 0;
        for (int& a = it[u]; a < head[u + 1]; ++a) {
            int v = to[a];
            if (cap[a] <= 0 || level[v] != level[u] + 1) continue;
            cap_t got = dfs(v, t, std::min(limit - pushed, cap[a]));
            if (got > 0) {
                cap[a] -= got;
                cap[rev[a]] += got;
                pushed += got;
                if (pushed == limit) return pushed;
            }
        }
        if (pushed == 0) level[u] = -1;
        return pushed;
    }

    cap_t run(int s, int t) {
        cap_t flow = 0;
        while (bfs(s, t)) {
            it = head;
            it.resize(V);
            flow += dfs(s, t, kCapMax);
        }
        return flow;
    }
};

} // namespace

CutSolution solve_cut(const CutProblem& problem) {
    const int n = problem.node_count();
    const int s = n, t = n + 1;
    Dinic g(n + 2);

    // degree counting pass
    for (const auto& p : problem.pairs()) {
        g.head[p.a + 1]++;
        g.head[p.b + 1]++;
    }
    for (int i = 0; i < n; ++i) g.head[i + 1] += 2;
    g.head[s + 1] += n;
    g.head[t + 1] += n;
    g.finish_offsets();

    const auto& pairs = problem.pairs();
    std::vector<int> pair_arc(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k)
        pair_arc[k] = g.add_arc(pairs[k].a, pairs[k].b, pairs[k].cap, pairs[k].cap);
    std::vector<int> src_arc(n), snk_arc(n);
    for (int i = 0; i < n; ++i) {
        src_arc[i] = g.add_arc(s, i, problem.membership_caps()[i], 0);
        snk_arc[i] = g.add_arc(i, t, problem.exclusion_caps()[i], 0);
    }

    CutSolution sol;
    sol.max_flow = g.run(s, t);
    sol.min_energy = sol.max_flow + problem.offset();

    // residual reachability from the source
    std::vector<char> from_s(g.V, 0);
    {
        std::vector<int> queue{s};
        from_s[s] = 1;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            int u = queue[q];
            for (int a = g.head[u]; a < g.head[u + 1]; ++a)
                if (g.cap[a] > 0 && !from_s[g.to[a]]) {
                    from_s[g.to[a]] = 1;
                    queue.push_back(g.to[a]);
                }
        }
    }
    // residual co-reachability of the sink
    std::vector<char> to_t(g.V, 0);
    {
        std::vector<int> queue{t};
        to_t[t] = 1;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            int u = queue[q];
            for (int a = g.head[u]; a < g.head[u + 1]; ++a) {
                int v = g.to[a];
                // v -> u has residual capacity on the reverse arc
                if (g.cap[g.rev[a]] > 0 && !to_t[v]) {
                    to_t[v] = 1;
                    queue.push_back(v);
                }
            }
        }
    }

    sol.minimal_set.assign(n, 0);
    sol.maximal_set.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        sol.minimal_set[i] = to_t[i];
        sol.maximal_set[i] = !from_s[i];
    }

    sol.pair_flow.resize(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        int a = pair_arc[k];
        sol.pair_flow[k] = (g.cap[g.rev[a]] - g.cap[a]) / 2;
    }
    sol.membership_flow.resize(n);
    sol.exclusion_flow.resize(n);
    for (int i = 0; i < n; ++i) {
        sol.membership_flow[i] = problem.membership_caps()[i] - g.cap[src_arc[i]];
        sol.exclusion_flow[i] = problem.exclusion_caps()[i] - g.cap[snk_arc[i]];
    }
    return sol;
}

bool flow_is_valid(const CutProblem& problem, const CutSolution& sol) {
    const int n = problem.node_count();
    const auto& pairs = problem.pairs();
    if (int(sol.membership_flow.size()) != n || sol.pair_flow.size() != pairs.size()) return false;
    std::vector<cap_t> net(n, 0); // inflow minus outflow through pairwise arcs
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        cap_t f = sol.pair_flow[k];
        if (f > pairs[k].cap || -f > pairs[k].cap) return false;
        net[pairs[k].a] -= f;
        net[pairs[k].b] += f;
    }
    cap_t total_in = 0, total_out = 0;
    for (int i = 0; i < n; ++i) {
        if (sol.membership_flow[i] < 0 || sol.membership_flow[i] > problem.membership_caps()[i])
            return false;
        if (sol.exclusion_flow[i] < 0 || sol.exclusion_flow[i] > problem.exclusion_caps()[i])
            return false;
        if (sol.membership_flow[i] + net[i] != sol.exclusion_flow[i]) return false;
        total_in += sol.membership_flow[i];
        total_out += sol.exclusion_flow[i];
    }
    return total_in == total_out && total_in == sol.max_flow;
}

} // namespace nlbv
