#include <algorithm>
#include <cmath>

#include "lppn/estimators.hpp"
#include "lppn/lpp.hpp"
#include "lppn/parallel.hpp"

namespace lppn {
namespace {

void require_scales(const std::vector<int>& n_list)
{
    if (n_list.size() < 3) {
        throw DomainError("exponent fits need at least three scales");
    }
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 2 || (i > 0 && n_list[i] <= n_list[i - 1])) {
            throw DomainError("scales must be increasing and >= 2");
        }
    }
}

ExponentFit fit_exponent(const std::vector<int>& n_list, std::vector<std::vector<double>> samples,
                         const std::function<double(std::span<const double>)>& statistic,
                         int resamples, std::uint64_t seed)
{
    ExponentFit fit;
    fit.scales = n_list;
    std::vector<double> scales(n_list.begin(), n_list.end());
    for (const auto& s : samples) {
        fit.statistic.push_back(statistic(s));
    }
    BootstrapSlope bs = bootstrap_log_slope(scales, samples, statistic, resamples,
                                            derive_seed(seed, 0, StreamTag::Generic));
    fit.slope = bs.fit.slope;
    fit.intercept = bs.fit.intercept;
    fit.residuals = bs.fit.residuals;
    fit.slope_ci_low = bs.ci_low;
    fit.slope_ci_high = bs.ci_high;
    fit.samples = std::move(samples);
    return fit;
}

}  // namespace

ExponentFit variance_scaling(double p, const std::vector<int>& n_list, int replicas,
                             std::uint64_t seed, int threads, int resamples)
{
    require_scales(n_list);
    if (replicas < 2) {
        throw DomainError("variance_scaling needs at least two replicas");
    }
    std::vector<std::vector<double>> samples;
    for (std::size_t s = 0; s < n_list.size(); ++s) {
        const int n = n_list[s];
        const std::uint64_t scale_seed = derive_seed(seed, s + 1, StreamTag::Generic);
        samples.push_back(parallel_map<double>(std::size_t(replicas), threads, [&](std::size_t r) {
            WeightConfig cfg(p, replica_seed(scale_seed, r), Rect{{0, 0}, {n, n}});
            return double(travel_time_streaming([&](Coord c) { return cfg.weight_at(c); },
                                                Coord{0, 0}, Coord{n, n}));
        }));
    }
    return fit_exponent(n_list, std::move(samples),
                        [](std::span<const double> xs) { return sample_variance(xs); },
                        resamples, seed);
}

int midpoint_deviation(const std::vector<Coord>& path, int n)
{
    const int mid = n / 2;
    int worst = 0;
    bool seen = false;
    for (Coord c : path) {
        if (c.x1 == mid) {
            worst = std::max(worst, std::abs(c.x2 - mid));
            seen = true;
        }
    }
    if (!seen) {
        throw DomainError("path does not cross the vertical midline");
    }
    return worst;
}

ExponentFit transversal_exponent(double p, const std::vector<int>& n_list, int replicas,
                                 std::uint64_t seed, int threads, int resamples)
{
    require_scales(n_list);
    if (replicas < 2) {
        throw DomainError("transversal_exponent needs at least two replicas");
    }
    std::vector<std::vector<double>> samples;
    for (std::size_t s = 0; s < n_list.size(); ++s) {
        const int n = n_list[s];
        const std::uint64_t scale_seed = derive_seed(seed, s + 1, StreamTag::Generic);
        samples.push_back(parallel_map<double>(std::size_t(replicas), threads, [&](std::size_t r) {
            WeightConfig cfg(p, replica_seed(scale_seed, r), Rect{{0, 0}, {n, n}});
            WeightGrid w = cfg.materialize();
            TravelTable table(w, Coord{0, 0}, Coord{n, n});
            return double(midpoint_deviation(table.extremal_geodesic(true), n));
        }));
    }
    return fit_exponent(n_list, std::move(samples),
                        [](std::span<const double> xs) {
                            return median(std::vector<double>(xs.begin(), xs.end()));
                        },
                        resamples, seed);
}

bool inside_envelope(Coord v, int n, double alpha, double ell)
{
    double near = std::min(v.x1 + v.x2, 2 * n - v.x1 - v.x2);
    return std::abs(v.x2 - v.x1) <= std::pow(near, alpha) + ell;
}

EnvelopeResult envelope_containment(double p, int n, double alpha, const std::vector<int>& ells,
                                    int replicas, std::uint64_t seed, int threads)
{
    if (n < 1 || replicas < 1) {
        throw DomainError("envelope_containment needs n >= 1 and replicas >= 1");
    }
    // Per replica, the smallest band offset containing every geodesic vertex.
    auto needed = parallel_map<double>(std::size_t(replicas), threads, [&](std::size_t r) {
        WeightConfig cfg(p, replica_seed(seed, r), Rect{{0, 0}, {n, n}});
        WeightGrid w = cfg.materialize();
        TravelTable table(w, Coord{0, 0}, Coord{n, n});
        double worst = 0.0;
        for (int y = 0; y <= n; ++y) {
            for (int x = 0; x <= n; ++x) {
                Coord c{x, y};
                if (!table.on_geodesic(c)) {
                    continue;
                }
                double near = std::min(x + y, 2 * n - x - y);
                worst = std::max(worst, std::abs(y - x) - std::pow(near, alpha));
            }
        }
        return worst;
    });
    EnvelopeResult res;
    res.n = n;
    res.alpha = alpha;
    res.ells = ells;
    for (int ell : ells) {
        std::int64_t inside = std::count_if(needed.begin(), needed.end(),
                                            [&](double x) { return x <= double(ell); });
        res.containment.push_back(proportion_estimate(inside, replicas, seed));
    }
    return res;
}

EstimateWithCI HeatmapResult::frequency(Coord v) const
{
    std::int64_t count = visit_count.contains(v) ? visit_count[v] : 0;
    return proportion_estimate(count, replicas, seed);
}

HeatmapResult geodesic_heatmap(double p, int n, int replicas, std::uint64_t seed, int threads)
{
    if (n < 1 || n > 2000) {
        throw DomainError("geodesic_heatmap needs 1 <= n <= 2000");
    }
    if (replicas < 1) {
        throw DomainError("geodesic_heatmap needs replicas >= 1");
    }
    const Rect region{{0, 0}, {n, n}};
    HeatmapResult res;
    res.n = n;
    res.p = p;
    res.replicas = replicas;
    res.seed = seed;
    res.visit_count = Grid<std::int64_t>(region, 0);

    constexpr std::size_t kBlock = 32;
    for (std::size_t start = 0; start < std::size_t(replicas); start += kBlock) {
        std::size_t count = std::min(kBlock, std::size_t(replicas) - start);
        auto masks = parallel_map<std::vector<std::uint8_t>>(count, threads, [&](std::size_t k) {
            WeightConfig cfg(p, replica_seed(seed, start + k), region);
            WeightGrid w = cfg.materialize();
            return geodesic_report(w, region.lo, region.hi).member_mask.data();
        });
        auto& counts = res.visit_count.data();
        for (const auto& m : masks) {
            for (std::size_t i = 0; i < m.size(); ++i) {
                counts[i] += m[i];
            }
        }
    }
    return res;
}

double scaled_diagonal_frequency(const HeatmapResult& h)
{
    if (h.n % 2 != 0 || h.n < 3) {
        throw DomainError("scaled diagonal frequency needs an even n >= 4");
    }
    double f = h.frequency(Coord{h.n / 2, h.n / 2}).estimate;
    return f * std::pow(double(h.n) / std::log(double(h.n)), 2.0 / 3.0);
}

std::vector<OffDiagonalPoint> off_diagonal_profile(const HeatmapResult& h,
                                                   const std::vector<double>& s_values)
{
    std::vector<OffDiagonalPoint> out;
    const double scale = std::pow(double(h.n), 2.0 / 3.0);
    for (double s : s_values) {
        int d = int(std::lround(s * scale));
        if ((h.n - d) % 2 != 0) {
            ++d;
        }
        d = std::min(d, h.n);
        Coord v{(h.n - d) / 2, (h.n + d) / 2};
        out.push_back(OffDiagonalPoint{s, v, h.frequency(v)});
    }
    return out;
}

}  // namespace lppn
