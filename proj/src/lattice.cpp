#include "lppn/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace lppn {
namespace {

void require_inside(const WeightConfig& cfg, Coord v)
{
    if (!cfg.region().contains(v)) {
        throw DomainError("site " + to_string(v) + " outside weight region");
    }
}

}  // namespace

WeightConfig::WeightConfig(double p, std::uint64_t seed, Rect region)
    : p_(p), seed_(seed), region_(region)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("p must lie in (0,1), got " + std::to_string(p));
    }
    checked_rect(region.lo, region.hi);
}

void WeightConfig::check(Coord v) const
{
    if (!region_.contains(v)) {
        throw DomainError("site " + to_string(v) + " outside weight region");
    }
}

int WeightConfig::bit(Coord v, int i) const
{
    return uniform01(site_key(seed_, v, std::uint64_t(i), StreamTag::BitX)) < p_ ? 1 : 0;
}

int WeightConfig::bit_prime(Coord v, int i) const
{
    return uniform01(site_key(seed_, v, std::uint64_t(i), StreamTag::BitXPrime)) < p_ ? 1 : 0;
}

double WeightConfig::bit_clock(Coord v, int i) const
{
    return exponential1(site_key(seed_, v, std::uint64_t(i), StreamTag::ClockU));
}

double WeightConfig::site_clock(Coord v) const
{
    return exponential1(site_key(seed_, v, 0, StreamTag::SiteClock));
}

std::int64_t WeightConfig::weight_at(Coord v) const
{
    check(v);
    return first_success([&](int i) { return bit(v, i); });
}

std::int64_t WeightConfig::replacement_weight(Coord v) const
{
    check(v);
    return first_success([&](int i) { return bit_prime(v, i); });
}

WeightGrid WeightConfig::materialize() const
{
    return lppn::materialize(region_, [&](Coord v) {
        return first_success([&](int i) { return bit(v, i); });
    });
}

const char* to_string(NoiseKind kind)
{
    switch (kind) {
    case NoiseKind::Bit:
        return "bit";
    case NoiseKind::Site:
        return "site";
    case NoiseKind::Coupled:
        return "coupled";
    }
    return "?";
}

NoiseKind parse_noise_kind(const std::string& name)
{
    if (name == "bit" || name == "BIT") {
        return NoiseKind::Bit;
    }
    if (name == "site" || name == "SITE") {
        return NoiseKind::Site;
    }
    if (name == "coupled" || name == "COUPLED") {
        return NoiseKind::Coupled;
    }
    throw DomainError("unknown noise kind '" + name + "'");
}

bool bit_resampled(const WeightConfig& cfg, Coord v, int i, double t)
{
    return t > 0.0 && t >= cfg.bit_clock(v, i);
}

std::int64_t bit_noisy_weight(const WeightConfig& cfg, Coord v, double t)
{
    if (t < 0.0) {
        throw DomainError("noise clock must be nonnegative");
    }
    if (t == 0.0) {
        return cfg.weight_at(v);
    }
    require_inside(cfg, v);
    return first_success([&](int i) {
        return bit_resampled(cfg, v, i, t) ? cfg.bit_prime(v, i) : cfg.bit(v, i);
    });
}

void bit_noisy_weights(const WeightConfig& cfg, Coord v, std::span<const double> ts,
                       std::span<std::int64_t> out)
{
    require_inside(cfg, v);
    std::size_t pending = ts.size();
    constexpr std::int64_t kUnset = -1;
    std::fill(out.begin(), out.end(), kUnset);
    for (int i = 0; pending > 0; ++i) {
        if (i >= kBitScanCap) {
            throw RngIntegrityError("bit scan exceeded safety cap");
        }
        int x = cfg.bit(v, i);
        double clock = -1.0;
        int xprime = -1;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            if (out[k] != kUnset) {
                continue;
            }
            int b = x;
            if (ts[k] > 0.0) {
                if (clock < 0.0) {
                    clock = cfg.bit_clock(v, i);
                }
                if (ts[k] >= clock) {
                    if (xprime < 0) {
                        xprime = cfg.bit_prime(v, i);
                    }
                    b = xprime;
                }
            }
            if (b) {
                out[k] = i;
                --pending;
            }
        }
    }
}

std::int64_t site_noisy_weight(const WeightConfig& cfg, Coord v, double t)
{
    if (t < 0.0) {
        throw DomainError("noise clock must be nonnegative");
    }
    if (t > 0.0 && t >= cfg.site_clock(v)) {
        return cfg.replacement_weight(v);
    }
    return cfg.weight_at(v);
}

double coupled_site_clock(const WeightConfig& cfg, Coord v, int cap)
{
    if (cap < 1) {
        throw DomainError("coupled cap must be positive");
    }
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cap; ++i) {
        lo = std::min(lo, cfg.bit_clock(v, i));
    }
    return double(cap) * lo;
}

bool coupled_bit_resampled(const WeightConfig& cfg, Coord v, double t, int cap)
{
    return t > 0.0 && double(cap) * t >= coupled_site_clock(cfg, v, cap);
}

std::int64_t coupled_site_weight(const WeightConfig& cfg, Coord v, double t, int cap)
{
    if (t < 0.0) {
        throw DomainError("noise clock must be nonnegative");
    }
    return coupled_bit_resampled(cfg, v, t, cap) ? cfg.replacement_weight(v) : cfg.weight_at(v);
}

NoisyPair::NoisyPair(WeightConfig base_, double t_, NoiseKind kind_, int cap_)
    : base(base_), t(t_), kind(kind_), cap(cap_)
{
    if (!(t >= 0.0)) {
        throw DomainError("noise clock t must be nonnegative");
    }
    if (kind == NoiseKind::Coupled && cap < 1) {
        throw DomainError("coupled noise needs a positive cap");
    }
}

std::int64_t NoisyPair::noisy_weight_at(Coord v) const
{
    switch (kind) {
    case NoiseKind::Bit:
        return bit_noisy_weight(base, v, t);
    case NoiseKind::Site:
        return site_noisy_weight(base, v, t);
    case NoiseKind::Coupled:
        return coupled_site_weight(base, v, t, cap);
    }
    return base.weight_at(v);
}

int coupled_cap(int n, double p)
{
    if (n < 2) {
        throw DomainError("coupled_cap needs n >= 2");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("p must lie in (0,1)");
    }
    return int(std::ceil(5.0 * std::log(double(n)) / -std::log1p(-p)));
}

}  // namespace lppn
