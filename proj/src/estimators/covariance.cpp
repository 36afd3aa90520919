#include <algorithm>
#include <cmath>
#include <cstdint>

#include "lppn/estimators.hpp"

namespace lppn {
namespace {

std::int64_t ipow(std::int64_t base, int e)
{
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) {
        r *= base;
    }
    return r;
}

void validate(const CovMonoSpec& spec)
{
    if (spec.vars < 1 || spec.vars > 4) {
        throw DomainError("covariance enumeration needs 1 <= |I| <= 4");
    }
    const int support = int(spec.value_weights.size());
    if (support < 1 || support > 3) {
        throw DomainError("covariance enumeration needs support size <= 3");
    }
    for (auto w : spec.value_weights) {
        if (w <= 0 || w > 100) {
            throw DomainError("value weights must lie in [1, 100]");
        }
    }
    if (spec.f.size() != std::size_t(ipow(support, spec.vars))) {
        throw DomainError("function table must have support^|I| entries");
    }
    const std::uint32_t all = (1u << spec.vars) - 1u;
    if ((spec.small | all) != all || (spec.large | all) != all) {
        throw DomainError("resampled sets must be subsets of the index set");
    }
    long double total = 0.0L;
    for (auto w : spec.value_weights) {
        total += (long double)w;
    }
    long double fmax = 0.0L;
    for (auto v : spec.f) {
        fmax = std::max(fmax, (long double)(v < 0 ? -v : v));
    }
    if (std::pow(total, 2.0L * spec.vars) * fmax * fmax > 4.0e18L) {
        throw DomainError("weights and values too large for exact 64-bit enumeration");
    }
}

}  // namespace

std::int64_t scaled_resampled_covariance(const CovMonoSpec& spec, std::uint32_t mask)
{
    validate(spec);
    if ((mask | ((1u << spec.vars) - 1u)) != (1u << spec.vars) - 1u) {
        throw DomainError("resampled set must be a subset of the index set");
    }
    const int support = int(spec.value_weights.size());
    const std::size_t outcomes = spec.f.size();

    auto weight_of = [&](std::size_t y) {
        std::int64_t w = 1;
        for (int i = 0; i < spec.vars; ++i) {
            w *= spec.value_weights[y % std::size_t(support)];
            y /= std::size_t(support);
        }
        return w;
    };
    auto mix = [&](std::size_t y, std::size_t yp) {
        std::size_t out = 0;
        std::size_t place = 1;
        for (int i = 0; i < spec.vars; ++i) {
            std::size_t d = (mask >> i) & 1u ? yp % std::size_t(support) : y % std::size_t(support);
            out += d * place;
            place *= std::size_t(support);
            y /= std::size_t(support);
            yp /= std::size_t(support);
        }
        return out;
    };

    std::int64_t cross = 0;
    std::int64_t first = 0;
    for (std::size_t y = 0; y < outcomes; ++y) {
        std::int64_t wy = weight_of(y);
        first += wy * spec.f[y];
        for (std::size_t yp = 0; yp < outcomes; ++yp) {
            cross += wy * weight_of(yp) * spec.f[y] * spec.f[mix(y, yp)];
        }
    }
    return cross - first * first;
}

CovMonoResult covariance_monotonicity_bruteforce(const CovMonoSpec& spec)
{
    validate(spec);
    if ((spec.small & ~spec.large) != 0) {
        throw DomainError("resampled sets must be nested");
    }
    std::int64_t total = 0;
    for (auto w : spec.value_weights) {
        total += w;
    }
    CovMonoResult r;
    r.scale = ipow(total, 2 * spec.vars);
    r.cov_small = scaled_resampled_covariance(spec, spec.small);
    r.cov_large = scaled_resampled_covariance(spec, spec.large);
    r.holds = r.cov_small >= r.cov_large;
    return r;
}

}  // namespace lppn
