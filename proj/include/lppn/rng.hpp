#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "lppn/coord.hpp"

namespace lppn {

//---------------------------------------------------------------------------//
/*!
 * Counter-based randomness.
 *
 * Every draw is Philox4x32-10 applied to a counter built from the structured
 * key, with the master seed as the cipher key. There is no generator state.
 */
//---------------------------------------------------------------------------//

enum class StreamTag : std::uint8_t {
    BitX = 0,
    BitXPrime,
    ClockU,
    SiteClock,
    BoundaryV,
    BoundaryH,
    BoundaryArrival,
    Replica,
    Generic,
};

struct RngKey {
    std::uint64_t master_seed = 0;
    std::optional<Coord> site;
    std::uint64_t index = 0;  //!< must be below 2^56
    StreamTag tag = StreamTag::Generic;
};

using PhiloxBlock = std::array<std::uint32_t, 4>;

PhiloxBlock philox4x32_10(PhiloxBlock counter, std::array<std::uint32_t, 2> key);

//! Raw 64 random bits for a key.
std::uint64_t random_bits(const RngKey& key);

//! Uniform on [0,1) with 53-bit resolution.
double uniform01(const RngKey& key);

//! 1 iff uniform01(key) < p; requires 0 < p < 1.
int bernoulli(const RngKey& key, double p);

//! Exp(1) via -log(1 - U).
double exponential1(const RngKey& key);

//! Geometric on {0,1,...} with P(k) = p(1-p)^k, by inversion.
std::int64_t geometric_inverse(const RngKey& key, double p);

//! Standard normal via inversion of the normal CDF.
double standard_normal(const RngKey& key);

//! Child seed for an independent sub-experiment (replica, scale, ...).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          StreamTag tag = StreamTag::Replica);

inline RngKey site_key(std::uint64_t seed, Coord v, std::uint64_t index, StreamTag tag)
{
    return RngKey{seed, v, index, tag};
}

inline RngKey plain_key(std::uint64_t seed, std::uint64_t index, StreamTag tag)
{
    return RngKey{seed, std::nullopt, index, tag};
}

}  // namespace lppn
