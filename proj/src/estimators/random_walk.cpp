#include <algorithm>
#include <cmath>
#include <numeric>

#include "lppn/estimators.hpp"
#include "lppn/parallel.hpp"

namespace lppn {

double StepDistribution::mean() const
{
    double m = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        m += probs[k] * values[k];
    }
    return m;
}

double StepDistribution::stddev() const
{
    double m = mean();
    double v = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        v += probs[k] * (values[k] - m) * (values[k] - m);
    }
    return std::sqrt(v);
}

double StepDistribution::prob_at_least_one() const
{
    double d = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k] >= 1) {
            d += probs[k];
        }
    }
    return d;
}

StepDistribution make_step_distribution(std::string name, std::vector<int> values,
                                        std::vector<double> probs)
{
    if (values.empty() || values.size() != probs.size()) {
        throw DomainError("step distribution needs matching values and probabilities");
    }
    double total = 0.0;
    for (double q : probs) {
        if (!(q >= 0.0)) {
            throw DomainError("step probabilities must be nonnegative");
        }
        total += q;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("step probabilities must sum to 1");
    }
    StepDistribution d{std::move(name), std::move(values), std::move(probs)};
    if (d.mean() < -1e-15) {
        throw DomainError("step distribution needs a nonnegative mean");
    }
    if (!(d.stddev() > 0.0)) {
        throw DomainError("step distribution needs positive variance");
    }
    if (!(d.prob_at_least_one() > 0.0)) {
        throw DomainError("step distribution needs P(X >= 1) > 0");
    }
    return d;
}

double rw_exact_pm1(double p_plus, int steps)
{
    if (!(p_plus > 0.0 && p_plus < 1.0) || steps < 0) {
        throw DomainError("rw_exact_pm1 needs 0 < p_plus < 1 and steps >= 0");
    }
    // mass[h] = P(S_k = h and the walk stayed nonnegative so far)
    std::vector<double> mass(std::size_t(steps) + 2, 0.0);
    mass[0] = 1.0;
    for (int k = 0; k < steps; ++k) {
        std::vector<double> next(mass.size(), 0.0);
        for (std::size_t h = 0; h + 1 < mass.size(); ++h) {
            if (mass[h] == 0.0) {
                continue;
            }
            next[h + 1] += p_plus * mass[h];
            if (h > 0) {
                next[h - 1] += (1.0 - p_plus) * mass[h];
            }
        }
        mass = std::move(next);
    }
    return std::accumulate(mass.begin(), mass.end(), 0.0);
}

RwResult rw_nonneg_bound(const StepDistribution& dist, int steps, int replicas,
                         std::uint64_t seed, int threads)
{
    if (steps < 1 || replicas < 1) {
        throw DomainError("rw_nonneg_bound needs steps >= 1 and replicas >= 1");
    }
    const double delta = dist.prob_at_least_one();
    if (!(delta > 0.0)) {
        throw DomainError("rw_nonneg_bound needs P(X >= 1) > 0");
    }
    std::vector<double> cumulative(dist.probs.size());
    std::partial_sum(dist.probs.begin(), dist.probs.end(), cumulative.begin());
    cumulative.back() = 1.0;

    auto survived = parallel_map<std::uint8_t>(std::size_t(replicas), threads, [&](std::size_t r) {
        std::uint64_t rs = replica_seed(seed, r);
        std::int64_t position = 0;
        for (int k = 0; k < steps; ++k) {
            double u = uniform01(plain_key(rs, std::uint64_t(k), StreamTag::Generic));
            std::size_t idx = std::size_t(
                std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
            position += dist.values[std::min(idx, dist.values.size() - 1)];
            if (position < 0) {
                return std::uint8_t(0);
            }
        }
        return std::uint8_t(1);
    });

    RwResult res;
    res.dist = dist;
    res.steps = steps;
    std::int64_t hits = std::count(survived.begin(), survived.end(), std::uint8_t(1));
    res.q_hat = proportion_estimate(hits, replicas, seed);
    res.bound = 4.0 * dist.stddev() / (delta * std::sqrt(double(steps))) + dist.mean() / delta;

    std::vector<int> support = dist.values;
    std::sort(support.begin(), support.end());
    if (support == std::vector<int>{-1, 1} && steps <= kExactWalkSteps) {
        double p_plus = dist.values[0] == 1 ? dist.probs[0] : dist.probs[1];
        res.exact = rw_exact_pm1(p_plus, steps);
    }
    return res;
}

}  // namespace lppn
