#include <algorithm>
#include <cmath>
#include <span>

#include "lppn/estimators.hpp"
#include "lppn/parallel.hpp"
#include "multi_dp.hpp"

namespace lppn {

CorrDecayResult corr_decay(double p, int n, const std::vector<double>& ts, NoiseKind kind,
                           int replicas, std::uint64_t seed, int threads)
{
    if (replicas < 30) {
        throw DomainError("corr_decay needs at least 30 replicas");
    }
    if (n < 1) {
        throw DomainError("corr_decay needs n >= 1");
    }
    if (kind == NoiseKind::Coupled) {
        throw DomainError("corr_decay supports bit and site noise");
    }
    for (double t : ts) {
        if (!(t >= 0.0)) {
            throw DomainError("noise clocks must be nonnegative");
        }
    }
    const Rect region{{0, 0}, {n, n}};
    const std::size_t fields = ts.size() + 1;
    std::vector<double> clocks{0.0};
    clocks.insert(clocks.end(), ts.begin(), ts.end());

    auto per_replica = parallel_map<std::vector<std::int64_t>>(
        std::size_t(replicas), threads, [&](std::size_t r) {
            WeightConfig cfg(p, replica_seed(seed, r), region);
            return detail::multi_travel_times(n, fields, [&](Coord c, std::span<std::int64_t> out) {
                if (kind == NoiseKind::Bit) {
                    bit_noisy_weights(cfg, c, clocks, out);
                    return;
                }
                std::int64_t w = cfg.weight_at(c);
                double clock = cfg.site_clock(c);
                std::int64_t replacement = -1;
                for (std::size_t k = 0; k < fields; ++k) {
                    if (clocks[k] > 0.0 && clocks[k] >= clock) {
                        if (replacement < 0) {
                            replacement = cfg.replacement_weight(c);
                        }
                        out[k] = replacement;
                    } else {
                        out[k] = w;
                    }
                }
            });
        });

    CorrDecayResult res;
    res.p = p;
    res.n = n;
    res.kind = kind;
    res.seed = seed;
    res.ts = ts;
    for (const auto& row : per_replica) {
        res.base_times.push_back(double(row[0]));
    }
    for (std::size_t k = 0; k < ts.size(); ++k) {
        std::vector<double> noisy;
        for (const auto& row : per_replica) {
            noisy.push_back(double(row[k + 1]));
        }
        res.corr.push_back(correlation_estimate(res.base_times, noisy, seed));
        res.noisy_times.push_back(std::move(noisy));
    }
    return res;
}

NoiseComparison noise_comparison(double p, int n, double t, int replicas, std::uint64_t seed,
                                 int threads, int resamples)
{
    if (n < 2) {
        throw DomainError("noise_comparison needs n >= 2");
    }
    if (!(t >= 0.0) || t > 1.0 / std::log(double(n))) {
        throw DomainError("noise_comparison needs 0 <= t <= 1/ln n");
    }
    if (replicas < 30) {
        throw DomainError("noise_comparison needs at least 30 replicas");
    }
    const int cap = coupled_cap(n, p);
    const Rect region{{0, 0}, {n, n}};

    // Fields: base, bit noise, coupled site noise, then the same three capped at M.
    auto per_replica = parallel_map<std::vector<std::int64_t>>(
        std::size_t(replicas), threads, [&](std::size_t r) {
            WeightConfig cfg(p, replica_seed(seed, r), region);
            return detail::multi_travel_times(n, 6, [&](Coord c, std::span<std::int64_t> out) {
                out[0] = cfg.weight_at(c);
                out[1] = bit_noisy_weight(cfg, c, t);
                out[2] = coupled_site_weight(cfg, c, t, cap);
                for (int k = 0; k < 3; ++k) {
                    out[std::size_t(k) + 3] = capped(out[std::size_t(k)], cap);
                }
            });
        });

    std::vector<std::vector<double>> cols(6);
    for (const auto& row : per_replica) {
        for (std::size_t k = 0; k < 6; ++k) {
            cols[k].push_back(double(row[k]));
        }
    }

    NoiseComparison nc;
    nc.p = p;
    nc.n = n;
    nc.t = t;
    nc.cap = cap;
    nc.corr_bit_t = correlation_estimate(cols[0], cols[1], seed);
    nc.corr_site_Mt = correlation_estimate(cols[0], cols[2], seed);
    nc.var_T = sample_variance(cols[0]);
    nc.cov_bit = covariance(cols[0], cols[1]);
    nc.cov_site = covariance(cols[0], cols[2]);
    nc.cov_bit_capped = covariance(cols[3], cols[4]);
    nc.cov_site_capped = covariance(cols[3], cols[5]);
    nc.capped_gap_relative =
        std::max(std::abs(nc.cov_bit - nc.cov_bit_capped), std::abs(nc.cov_site - nc.cov_site_capped))
        / nc.var_T;

    // Paired bootstrap for the correlation gap.
    const double point = nc.corr_site_Mt.estimate - nc.corr_bit_t.estimate;
    std::vector<double> gaps;
    std::vector<double> a(cols[0].size()), b(a.size()), c(a.size());
    for (int rep = 0; rep < resamples; ++rep) {
        std::uint64_t sub = derive_seed(seed, std::uint64_t(rep), StreamTag::Generic);
        for (std::size_t k = 0; k < a.size(); ++k) {
            double u = uniform01(plain_key(sub, k, StreamTag::Generic));
            std::size_t pick = std::min(a.size() - 1, std::size_t(u * double(a.size())));
            a[k] = cols[0][pick];
            b[k] = cols[1][pick];
            c[k] = cols[2][pick];
        }
        double g = pearson(a, c) - pearson(a, b);
        if (!std::isnan(g)) {
            gaps.push_back(g);
        }
    }
    nc.difference.estimate = point;
    nc.difference.replicas = replicas;
    nc.difference.seed = seed;
    if (gaps.size() < 2) {
        nc.difference.degenerate = true;
        nc.difference.ci_low = nc.difference.ci_high = point;
    } else {
        nc.difference.stderr_ = std::sqrt(sample_variance(gaps));
        std::sort(gaps.begin(), gaps.end());
        nc.difference.ci_low = std::min(point, gaps[std::size_t(0.025 * double(gaps.size() - 1))]);
        nc.difference.ci_high = std::max(point, gaps[std::size_t(0.975 * double(gaps.size() - 1))]);
    }
    return nc;
}

}  // namespace lppn
