#include <algorithm>
#include <cmath>

#include "lppn/estimators.hpp"
#include "lppn/lpp.hpp"
#include "lppn/parallel.hpp"
#include "lppn/stationary.hpp"

namespace lppn {
namespace {

struct SandwichReplica {
    bool left = false;
    bool right = false;
    std::int64_t mismatches = 0;
    std::vector<double> y;
    std::vector<double> z;
};

double geometric_mean_value(double prob)
{
    return (1.0 - prob) / prob;
}

}  // namespace

SandwichResult sandwich_experiment(double p, Coord v, double s, int replicas, std::uint64_t seed,
                                   int n, int threads)
{
    if (n < 0) {
        n = v.x1 + v.x2;
    }
    const int len = v.x1 + v.x2;
    if (!leq(Coord{0, 0}, v) || !leq(v, Coord{n, n}) || len < 1 || v.x1 >= n) {
        throw DomainError("sandwich needs 0 <= v <= n e_+, v1 < n and |v|_1 >= 1");
    }
    if (!(s > 0.0)) {
        throw DomainError("sandwich needs s > 0");
    }
    const double L = double(len);
    if (std::abs(v.x2 - v.x1) > s * std::pow(L, 2.0 / 3.0)) {
        throw DomainError("sandwich needs |v2 - v1| <= s |v|_1^{2/3}");
    }
    if (s > std::cbrt(L) / 18.0) {
        throw DomainError("sandwich needs s <= |v|_1^{1/3} / 18");
    }
    if (replicas < 2) {
        throw DomainError("sandwich needs at least two replicas");
    }

    SandwichResult res;
    res.v = v;
    res.n = n;
    res.s = s;
    res.k = int(std::floor(2.0 * s * std::pow(L, 2.0 / 3.0))) + 1;
    const int k = res.k;
    const Coord w{n - v.x1, n - v.x2};
    const double Lw = double(w.x1 - 1 + w.x2);
    res.lambda_minus = 0.5 - 8.0 * s / std::cbrt(L);
    res.lambda_plus = 0.5 + 8.0 * s / std::cbrt(L);
    res.hat_lambda_minus = 0.5 - 8.0 * s / std::cbrt(Lw);
    res.hat_lambda_plus = 0.5 + 8.0 * s / std::cbrt(Lw);
    if (!(res.hat_lambda_minus > 0.0 && res.hat_lambda_plus < 1.0)) {
        throw DomainError("sandwich parameters on the far side leave (0,1); enlarge n - v");
    }
    if (k + 1 > v.x2 || k + 1 > w.x2) {
        throw DomainError("sandwich window k = " + std::to_string(k) + " exceeds the rectangle");
    }

    const Rect region{{0, 0}, {n, n}};
    const Coord top{0, k};
    const Coord hat_base = reflect(w);
    const Coord hat_top{0, k + 1};

    auto reps = parallel_map<SandwichReplica>(std::size_t(replicas), threads, [&](std::size_t r) {
        const std::uint64_t rs = replica_seed(seed, r);
        WeightConfig cfg(p, rs, region);
        WeightGrid local = materialize(Rect{-v, w}, [&](Coord c) { return cfg.weight_at(c + v); });
        WeightGrid mirrored = reflect_grid(local);

        auto fwd = forward_table(local, -v, top);
        auto bwd = backward_table(local, Coord{1, -k - 1}, w);
        auto hat_fwd = forward_table(mirrored, hat_base, hat_top);

        auto lo = build_stationary(local, p, res.lambda_minus, -v, top, derive_seed(rs, 1));
        auto hi = build_stationary(local, p, res.lambda_plus, -v, top, derive_seed(rs, 2));
        auto hat_lo = build_stationary(mirrored, p, res.hat_lambda_minus, hat_base, hat_top,
                                       derive_seed(rs, 3));
        auto hat_hi = build_stationary(mirrored, p, res.hat_lambda_plus, hat_base, hat_top,
                                       derive_seed(rs, 4));

        SandwichReplica out;
        out.left = true;
        out.right = true;
        for (int j = -k; j <= k; ++j) {
            std::int64_t delta = fwd[Coord{0, j}] - fwd[Coord{0, j - 1}];
            std::int64_t delta_prime = bwd[Coord{1, j - 1}] - bwd[Coord{1, j}];
            std::int64_t hat_delta = hat_fwd[Coord{0, 1 - j}] - hat_fwd[Coord{0, -j}];
            out.mismatches += hat_delta != delta_prime ? 1 : 0;

            const Coord here{0, j};
            const Coord there{0, 1 - j};
            if (lo.omega_v(here) > delta || delta > hi.omega_v(here)) {
                out.left = false;
            }
            if (hat_lo.omega_v(there) > delta_prime || delta_prime > hat_hi.omega_v(there)) {
                out.right = false;
            }
            if (j >= 1) {
                out.y.push_back(double(-lo.omega_v(here) + hat_hi.omega_v(there)));
            } else if (j > -k) {
                out.z.push_back(double(hi.omega_v(here) - hat_lo.omega_v(there)));
            }
        }
        return out;
    });

    std::int64_t left = 0, right = 0, both = 0;
    std::vector<double> ys, zs;
    for (const auto& r : reps) {
        left += r.left;
        right += r.right;
        both += r.left && r.right;
        res.reflection_mismatches += r.mismatches;
        ys.insert(ys.end(), r.y.begin(), r.y.end());
        zs.insert(zs.end(), r.z.begin(), r.z.end());
    }
    res.freq_delta = proportion_estimate(left, replicas, seed);
    res.freq_delta_prime = proportion_estimate(right, replicas, seed);
    res.freq_both = proportion_estimate(both, replicas, seed);
    res.y_mean = mean_estimate(ys, seed);
    res.z_mean = mean_estimate(zs, seed);

    const double pv_lo = lambda_params(p, res.lambda_minus).pV;
    const double pv_hi = lambda_params(p, res.lambda_plus).pV;
    const double pv_hat_lo = lambda_params(p, res.hat_lambda_minus).pV;
    const double pv_hat_hi = lambda_params(p, res.hat_lambda_plus).pV;
    res.y_mean_exact = geometric_mean_value(pv_hat_hi) - geometric_mean_value(pv_lo);
    res.z_mean_exact = geometric_mean_value(pv_hi) - geometric_mean_value(pv_hat_lo);
    return res;
}

}  // namespace lppn
