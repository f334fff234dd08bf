#ifndef SC_PARALLEL_HPP_
#define SC_PARALLEL_HPP_

#include <thread>
#include <vector>

namespace sc {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to disjoint slots; fn must not touch shared mutable state.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> workers;
    workers.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        workers.emplace_back([&, w] {
            // static block partition keeps results independent of scheduling
            const std::size_t lo = n * w / nw;
            const std::size_t hi = n * (w + 1) / nw;
            for (std::size_t i = lo; i < hi; ++i)
                fn(i);
        });
    }
    for (auto& t : workers)
        t.join();
}

} // namespace sc

#endif
