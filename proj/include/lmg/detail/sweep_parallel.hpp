// Concurrent grid evaluation with deterministic output ordering.
#pragma once

#include <thread>
#include <vector>

namespace lmg {

inline std::vector<PhaseSweepPoint> sweep_phase_diagram(const SweepGrid& g, SteadyMode mode,
                                                        unsigned threads) {
    if (g.lambda_values.empty() || g.second_values.empty())
        throw std::invalid_argument("sweep grid must be non-empty");
    const std::size_t nl = g.lambda_values.size();
    const std::size_t total = nl * g.second_values.size();
    if (threads <= 1 || total < 2)
        return sweep_phase_diagram_serial(g, mode);

    std::vector<PhaseSweepPoint> out(total);
    std::vector<std::thread> pool;
    const unsigned n_workers = std::min<unsigned>(threads, std::thread::hardware_concurrency());
    for (unsigned w = 0; w < std::max(1u, n_workers); ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t idx = w; idx < total; idx += std::max(1u, n_workers)) {
                const double lambda = g.lambda_values[idx % nl];
                const double second = g.second_values[idx / nl];
                out[idx] = evaluate_sweep_point(lambda, second, g, mode);
            }
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

} // namespace lmg
