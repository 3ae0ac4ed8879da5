#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace mlmod {

/// Pairwise (cascade) summation with long double leaves. Keeps the
/// per-community decomposition of Q stable to ~1e-15 relative error
/// even for millions of terms.
double pairwise_sum(std::span<const double> xs);

/// Number of common elements of two sorted ranges.
std::size_t intersection_size(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

/// Sorted union of two sorted unique ranges.
std::vector<std::uint32_t> sorted_union(std::span<const std::uint32_t> a,
                                        std::span<const std::uint32_t> b);

bool sorted_contains(std::span<const std::uint32_t> xs, std::uint32_t x);

/// Splits on runs of spaces/tabs; never returns empty tokens.
std::vector<std::string> split_ws(const std::string& line);

/// Runs fn(i) for i in [0, count) on up to `threads` workers
/// (0 = hardware concurrency). Iterations must be independent; callers are
/// responsible for writing results into pre-sized slots so the outcome is
/// identical for every thread count.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Deterministic uniform double in [0,1) from a 64-bit state; the generator
/// is a splitmix64 walk, identical on every platform.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

private:
    std::uint64_t state_;
};

} // namespace mlmod
