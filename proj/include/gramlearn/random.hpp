#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace gramlearn {

/// Seeded generator with portable helpers. The standard distributions are
/// implementation-defined, so everything that feeds an output goes through
/// uniform_index() to keep runs byte-identical across standard libraries.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n)
    {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % bound);
    }

    /// True with probability num/den.
    bool chance(std::uint64_t num, std::uint64_t den) { return uniform_index(den) < num; }

    template <typename T>
    void shuffle(std::vector<T>& items)
    {
        for (std::size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[uniform_index(i)]);
    }

    /// Uniformly choose `k` of the items, keeping their original relative order.
    template <typename T>
    std::vector<T> sample(const std::vector<T>& items, std::size_t k)
    {
        if (items.size() <= k)
            return items;
        std::vector<std::size_t> idx(items.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            idx[i] = i;
        // Partial Fisher-Yates over the index vector.
        for (std::size_t i = 0; i < k; ++i)
            std::swap(idx[i], idx[i + uniform_index(idx.size() - i)]);
        idx.resize(k);
        std::sort(idx.begin(), idx.end());
        std::vector<T> out;
        out.reserve(k);
        for (auto i : idx)
            out.push_back(items[i]);
        return out;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace gramlearn
