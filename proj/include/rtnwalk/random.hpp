#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rtnwalk {

/**
 * SplitMix64 keyed by (seed, stream). Each stream is a pure function of its
 * key and counter, so work split across threads draws the same numbers as a
 * serial run.
 */
class SplitMix64
{
public:
    SplitMix64(std::uint64_t seed, std::uint64_t stream)
        : m_state(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL)))
    {}

    std::uint64_t next()
    {
        m_state += 0x9e3779b97f4a7c15ULL;
        return mix(m_state);
    }

    /// Uniform in (0, 1], 53 random bits.
    double uniform_open0()
    {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (one value per call).
    double normal()
    {
        const double u1 = uniform_open0();
        const double u2 = uniform_open0();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t m_state;
};

} // namespace rtnwalk
