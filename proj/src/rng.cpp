#include "lppn/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/erf.hpp>

namespace lppn {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    std::uint64_t prod = std::uint64_t(a) * std::uint64_t(b);
    hi = std::uint32_t(prod >> 32);
    lo = std::uint32_t(prod);
}

PhiloxBlock counter_for(const RngKey& key)
{
    std::uint32_t has_site = key.site ? 1u : 0u;
    Coord s = key.site.value_or(Coord{0, 0});
    std::uint32_t hi_index = std::uint32_t((key.index >> 32) & 0xFFFFFFu);
    return PhiloxBlock{
        std::uint32_t(s.x1),
        std::uint32_t(s.x2),
        std::uint32_t(key.index & 0xFFFFFFFFu),
        (hi_index << 8) | (std::uint32_t(key.tag) << 1) | has_site,
    };
}

}  // namespace

PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::array<std::uint32_t, 2> key)
{
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = PhiloxBlock{hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::uint64_t random_bits(const RngKey& key)
{
    std::array<std::uint32_t, 2> k{std::uint32_t(key.master_seed & 0xFFFFFFFFu),
                                   std::uint32_t(key.master_seed >> 32)};
    PhiloxBlock out = philox4x32_10(counter_for(key), k);
    return (std::uint64_t(out[0]) << 32) | out[1];
}

double uniform01(const RngKey& key)
{
    return double(random_bits(key) >> 11) * 0x1.0p-53;
}

int bernoulli(const RngKey& key, double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("bernoulli: p must lie in (0,1), got " + std::to_string(p));
    }
    return uniform01(key) < p ? 1 : 0;
}

double exponential1(const RngKey& key)
{
    return -std::log1p(-uniform01(key));
}

std::int64_t geometric_inverse(const RngKey& key, double p)
{
    if (!(p > 0.0 && p <= 1.0)) {
        throw DomainError("geometric: p must lie in (0,1], got " + std::to_string(p));
    }
    if (p == 1.0) {
        return 0;
    }
    double u = uniform01(key);
    return std::int64_t(std::floor(std::log1p(-u) / std::log1p(-p)));
}

double standard_normal(const RngKey& key)
{
    // Map to the open interval so the inverse CDF stays finite.
    double u = (double(random_bits(key) >> 11) + 0.5) * 0x1.0p-53;
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, StreamTag tag)
{
    return random_bits(plain_key(master, index, tag));
}

}  // namespace lppn
