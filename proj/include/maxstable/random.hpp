// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace maxstable {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 0;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the independent sub-stream `index` derived from a master seed.
constexpr std::uint64_t substream_seed(std::uint64_t seed,
                                       std::uint64_t index) noexcept {
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    return Rng(substream_seed(seed, stream));
}

/// Uniform draw on the open interval (0, 1), 53 bits.
inline double uniform_open(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double exponential(Rng& rng) { return -std::log(uniform_open(rng)); }

inline double gamma_variate(Rng& rng, double shape) {
    std::gamma_distribution<double> dist(shape, 1.0);
    return dist(rng);
}

/// Index drawn from a cumulative weight table whose last entry is the total.
inline std::size_t categorical(Rng& rng, const std::vector<double>& cumulative) {
    if (cumulative.size() <= 1) return 0;
    const double u = uniform_open(rng) * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
}

/// Fixed number of draws per block in sharded Monte Carlo. Results depend
/// on (seed, block index) only, never on the worker count.
inline constexpr std::size_t kBlockSize = 1024;

inline std::size_t block_count(std::size_t n) {
    return (n + kBlockSize - 1) / kBlockSize;
}

/// Runs `work(block_index)` for every block on up to `workers` threads. If
/// blocks throw, the exception of the lowest failing block is rethrown, so
/// the outcome does not depend on the worker count.
template <class Work>
void run_blocks(std::size_t blocks, unsigned workers, Work&& work) {
    workers = std::max(1u, std::min<unsigned>(workers, blocks ? blocks : 1));
    if (workers == 1) {
        for (std::size_t b = 0; b < blocks; ++b) work(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::size_t failed_block = blocks;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= blocks) return;
                {
                    std::lock_guard lock(failure_mutex);
                    if (b > failed_block) return;
                }
                try {
                    work(b);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (b < failed_block) {
                        failed_block = b;
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace maxstable
