#include <algorithm>
#include <cmath>

#include "lppn/estimators.hpp"
#include "lppn/lpp.hpp"
#include "lppn/parallel.hpp"

namespace lppn {
namespace {

void require_influence_scale(int n)
{
    if (n < 1 || n > kMaxInfluenceScale) {
        throw DomainError("influence estimation needs 1 <= n <= 64");
    }
}

//! |E_xi[T o sigma^xi_{v,i}] - T| for one field; w is restored before returning.
double influence_sample(const WeightConfig& cfg, WeightGrid& w, std::int64_t total, Coord v, int bit)
{
    const std::int64_t omega = w[v];
    if (bit > omega) {
        return 0.0;
    }
    std::int64_t flipped;
    if (bit < omega) {
        flipped = bit;
    } else {
        flipped = bit + 1;
        while (!cfg.bit(v, int(flipped))) {
            ++flipped;
            if (flipped >= kBitScanCap) {
                throw RngIntegrityError("bit scan exceeded safety cap");
            }
        }
    }
    w[v] = flipped;
    const Rect r = w.rect();
    std::int64_t other = travel_time(w, r.lo, r.hi);
    w[v] = omega;
    const double p = cfg.p();
    // The observed bit is 0 when bit < omega, 1 when bit == omega.
    double with_one = bit < omega ? double(other) : double(total);
    double with_zero = bit < omega ? double(total) : double(other);
    return std::abs(p * with_one + (1.0 - p) * with_zero - double(total));
}

}  // namespace

EstimateWithCI bit_influence_on_Tn(double p, int n, Coord v, int bit, int replicas,
                                   std::uint64_t seed, int threads)
{
    require_influence_scale(n);
    if (bit < 0 || replicas < 2) {
        throw DomainError("influence needs a nonnegative bit index and >= 2 replicas");
    }
    const Rect region{{0, 0}, {n, n}};
    if (!region.contains(v)) {
        EstimateWithCI zero;
        zero.replicas = replicas;
        zero.seed = seed;
        return zero;
    }
    auto samples = parallel_map<double>(std::size_t(replicas), threads, [&](std::size_t r) {
        WeightConfig cfg(p, replica_seed(seed, r), region);
        WeightGrid w = cfg.materialize();
        std::int64_t total = travel_time(w, region.lo, region.hi);
        return influence_sample(cfg, w, total, v, bit);
    });
    return mean_estimate(samples, seed);
}

VisitInfluenceTable visit_vs_influence(double p, int n, int replicas, std::uint64_t seed,
                                       int threads, int i_max, std::vector<Coord> sites)
{
    require_influence_scale(n);
    if (replicas < 2 || i_max < 0) {
        throw DomainError("visit_vs_influence needs >= 2 replicas and i_max >= 0");
    }
    const Rect region{{0, 0}, {n, n}};
    if (sites.empty()) {
        for (int k = 0; k <= n; ++k) {
            sites.push_back(Coord{k, k});
        }
        const int off = std::max(1, n / 4);
        for (int k = 0; k + off <= n; ++k) {
            sites.push_back(Coord{k, k + off});
            sites.push_back(Coord{k + off, k});
        }
    }
    for (Coord c : sites) {
        if (!region.contains(c)) {
            throw DomainError("influence site " + to_string(c) + " outside the square");
        }
    }
    const std::size_t bits = std::size_t(i_max) + 1;
    const std::size_t stride = bits + 1;

    auto per_replica = parallel_map<std::vector<double>>(std::size_t(replicas), threads, [&](std::size_t r) {
        WeightConfig cfg(p, replica_seed(seed, r), region);
        WeightGrid w = cfg.materialize();
        TravelTable table(w, region.lo, region.hi);
        const std::int64_t total = table.value();
        std::vector<double> out(sites.size() * stride, 0.0);
        for (std::size_t s = 0; s < sites.size(); ++s) {
            out[s * stride] = table.on_geodesic(sites[s]) ? 1.0 : 0.0;
            for (std::size_t i = 0; i < bits; ++i) {
                out[s * stride + 1 + i] = influence_sample(cfg, w, total, sites[s], int(i));
            }
        }
        return out;
    });

    VisitInfluenceTable tab;
    tab.p = p;
    tab.n = n;
    tab.i_max = i_max;
    tab.replicas = replicas;
    for (std::size_t s = 0; s < sites.size(); ++s) {
        InfluenceRow row;
        row.v = sites[s];
        std::int64_t visits = 0;
        row.influence.assign(bits, 0.0);
        for (const auto& rep : per_replica) {
            visits += rep[s * stride] > 0.5 ? 1 : 0;
            for (std::size_t i = 0; i < bits; ++i) {
                row.influence[i] += rep[s * stride + 1 + i];
            }
        }
        for (auto& x : row.influence) {
            x /= double(replicas);
            row.sum_sq += x * x;
        }
        row.visit = proportion_estimate(visits, replicas, seed);
        double denom = std::pow(row.visit.estimate, 2.0 - tab.delta);
        row.ratio = denom > 0.0 ? row.sum_sq / denom : (row.sum_sq > 0.0 ? INFINITY : 0.0);
        tab.fitted_constant = std::max(tab.fitted_constant, row.ratio);
        tab.rows.push_back(std::move(row));
    }
    return tab;
}

}  // namespace lppn
