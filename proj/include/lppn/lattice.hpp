#pragma once

#include <cstdint>
#include <span>

#include "lppn/coord.hpp"
#include "lppn/grid.hpp"
#include "lppn/rng.hpp"

namespace lppn {

inline constexpr int kBitScanCap = 1'000'000;

/// Thrown when a bit scan runs past kBitScanCap: a corrupted stream, not a model event.
class RngIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Index of the first 1 in a bit stream.
template<class BitFn>
std::int64_t first_success(BitFn&& bit)
{
    for (int i = 0; i < kBitScanCap; ++i) {
        if (bit(i)) {
            return i;
        }
    }
    throw RngIntegrityError("bit scan exceeded safety cap");
}

//---------------------------------------------------------------------------//
/*!
 * Geometric(p) weights on a rectangle, each the index of the first success in
 * a keyed Bernoulli(p) bit stream.
 *
 * The replacement bits, bit clocks and site clocks that drive the noise
 * dynamics are keyed off the same seed.
 */
//---------------------------------------------------------------------------//
class WeightConfig {
public:
    WeightConfig(double p, std::uint64_t seed, Rect region);

    double p() const { return p_; }
    std::uint64_t seed() const { return seed_; }
    const Rect& region() const { return region_; }

    int bit(Coord v, int i) const;
    int bit_prime(Coord v, int i) const;
    double bit_clock(Coord v, int i) const;
    double site_clock(Coord v) const;

    std::int64_t weight_at(Coord v) const;
    //! Weight decoded from the replacement bits X'.
    std::int64_t replacement_weight(Coord v) const;

    WeightGrid materialize() const;

private:
    void check(Coord v) const;

    double p_;
    std::uint64_t seed_;
    Rect region_;
};

enum class NoiseKind { Bit, Site, Coupled };

const char* to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& name);

//! omega^t_v under bit resampling.
std::int64_t bit_noisy_weight(const WeightConfig& cfg, Coord v, double t);

//! omega^t_v for several clocks in one scan; ts may be in any order.
void bit_noisy_weights(const WeightConfig& cfg, Coord v, std::span<const double> ts,
                       std::span<std::int64_t> out);

//! Site resampling with an independent per-site clock.
std::int64_t site_noisy_weight(const WeightConfig& cfg, Coord v, double t);

//! M * min_{i<M} U_{v,i}.
double coupled_site_clock(const WeightConfig& cfg, Coord v, int cap);

//! Site-resampled weight at clock cap*t driven by the coupled clock.
std::int64_t coupled_site_weight(const WeightConfig& cfg, Coord v, double t, int cap);

bool bit_resampled(const WeightConfig& cfg, Coord v, int i, double t);
bool coupled_bit_resampled(const WeightConfig& cfg, Coord v, double t, int cap);

inline std::int64_t capped(std::int64_t w, int cap) { return w < cap ? w : cap; }

/// A base field together with one noisy partner.
struct NoisyPair {
    NoisyPair(WeightConfig base, double t, NoiseKind kind, int cap = 0);

    //! Bit: omega^t. Site: tilde-omega^t. Coupled: tilde-omega^{cap*t}.
    std::int64_t noisy_weight_at(Coord v) const;

    WeightConfig base;
    double t;
    NoiseKind kind;
    int cap;
};

//! ceil(5 ln n / ln(1/(1-p))), so that n^2 (1-p)^M <= n^-3.
int coupled_cap(int n, double p);

}  // namespace lppn
