#ifndef NLBV_PARALLEL_HPP
#define NLBV_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <optional>
#include <thread>
#include <vector>

namespace nlbv {

/// Worker count: NLBV_THREADS overrides the requested value, which in
/// turn defaults to the machine parallelism.
inline int default_thread_count(int requested = 0) {
    if (const char* env = std::getenv("NLBV_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    if (requested >= 1) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

/// Applies fn to every item and collects the results in input order.
/// Items are independent; determinism comes from the indexed merge.
template <typename Item, typename Fn>
auto parallel_map(const std::vector<Item>& items, Fn&& fn, int threads = 0)
    -> std::vector<decltype(fn(items[0]))> {
    using R = decltype(fn(items[0]));
    threads = default_thread_count(threads);
    std::vector<std::optional<R>> slots(items.size());
    if (threads <= 1 || items.size() <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) slots[i].emplace(fn(items[i]));
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= items.size()) return;
                slots[i].emplace(fn(items[i]));
            }
        };
        std::vector<std::thread> pool;
        int count = std::min<std::size_t>(threads, items.size());
        for (int w = 0; w < count; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::vector<R> out;
    out.reserve(items.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

} // namespace nlbv

#endif
