// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace fdadm
{

// SplitMix64 finaliser; derives independent, order-free substream seeds.
inline std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index)
{
    return mix_seed(mix_seed(master ^ mix_seed(stream)) + index);
}

// Stream tags keep weight, symbol and Eve-placement draws apart.
enum class Stream : std::uint64_t
{
    Weights = 1,
    Symbols = 2,
    Eves = 3,
};

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index)
{
    return derive_seed(master, static_cast<std::uint64_t>(stream), index);
}

using Rng = std::mt19937_64;

} // namespace fdadm
