#include "torusfactor/common.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>

namespace torusfactor {

namespace {
std::atomic<int> g_threads{1};
constexpr double kPlastic = 1.32471795724474602596;
}  // namespace

std::vector<Vec2> lattice_samples(int count, std::uint64_t seed) {
    std::vector<Vec2> out;
    if (count <= 0) return out;
    out.reserve(static_cast<std::size_t>(count));
    std::mt19937_64 rng(seed);
    const double a1 = 1.0 / kPlastic;
    const double a2 = 1.0 / (kPlastic * kPlastic);
    const double jitter = 0.5 / std::sqrt(static_cast<double>(count));
    for (int i = 0; i < count; ++i) {
        double jx = (2.0 * unit_from_bits(rng()) - 1.0) * jitter;
        double jy = (2.0 * unit_from_bits(rng()) - 1.0) * jitter;
        out.push_back({wrap01(0.5 + a1 * i + jx), wrap01(0.5 + a2 * i + jy)});
    }
    return out;
}

std::vector<double> lattice_samples_1d(int count, std::uint64_t seed) {
    std::vector<double> out;
    if (count <= 0) return out;
    std::mt19937_64 rng(seed);
    const double g = 0.6180339887498949;
    const double jitter = 0.5 / count;
    for (int i = 0; i < count; ++i) {
        double j = (2.0 * unit_from_bits(rng()) - 1.0) * jitter;
        out.push_back(wrap01(0.5 + g * i + j));
    }
    return out;
}

void set_max_threads(int n) { g_threads.store(std::max(1, n)); }

int max_threads() { return g_threads.load(); }

std::size_t chunk_count_for(std::size_t n) {
    std::size_t t = static_cast<std::size_t>(max_threads());
    return std::max<std::size_t>(1, std::min(t, n));
}

void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn,
                     std::size_t* chunk_count_out) {
    std::size_t chunks = chunk_count_for(n);
    if (chunk_count_out) *chunk_count_out = chunks;
    if (n == 0) return;
    auto bounds = [&](std::size_t c) { return std::pair{n * c / chunks, n * (c + 1) / chunks}; };
    if (chunks == 1) {
        fn(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(chunks - 1);
    for (std::size_t c = 1; c < chunks; ++c) {
        auto [b, e] = bounds(c);
        pool.emplace_back([&fn, b, e, c] { fn(b, e, c); });
    }
    auto [b0, e0] = bounds(0);
    fn(b0, e0, 0);
    for (auto& th : pool) th.join();
}

}  // namespace torusfactor
