#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lppn/estimators.hpp"
#include "lppn/lpp.hpp"
#include "oracles.hpp"

using namespace lppn;

TEST_CASE("correlation under noise at the extremes of the clock")
{
    CorrDecayResult r = corr_decay(0.5, 60, {0.0, 1e3}, NoiseKind::Bit, 400, 3);
    CHECK(r.corr[0].estimate == 1.0);
    CHECK(r.corr[1].contains(0.0));
    CorrDecayResult s = corr_decay(0.5, 60, {0.0, 1e3}, NoiseKind::Site, 400, 3);
    CHECK(s.corr[0].estimate == 1.0);
    CHECK(s.corr[1].contains(0.0));
    CHECK(r.base_times == s.base_times);

    CHECK_THROWS_AS(corr_decay(0.5, 60, {0.1}, NoiseKind::Bit, 0, 3), DomainError);
    CHECK_THROWS_AS(corr_decay(0.5, 60, {0.1}, NoiseKind::Bit, 29, 3), DomainError);
    CHECK_THROWS_AS(corr_decay(0.5, 60, {-0.1}, NoiseKind::Bit, 30, 3), DomainError);
    CHECK_THROWS_AS(corr_decay(0.5, 60, {0.1}, NoiseKind::Coupled, 30, 3), DomainError);
}

TEST_CASE("results do not depend on the thread count")
{
    CorrDecayResult a = corr_decay(0.4, 30, {0.05, 0.5}, NoiseKind::Bit, 60, 11, 1);
    CorrDecayResult b = corr_decay(0.4, 30, {0.05, 0.5}, NoiseKind::Bit, 60, 11, 3);
    CHECK(a.base_times == b.base_times);
    CHECK(a.noisy_times == b.noisy_times);
    CHECK(a.corr[1].estimate == b.corr[1].estimate);
}

TEST_CASE("bit noise against coupled site noise")
{
    NoiseComparison zero = noise_comparison(0.5, 40, 0.0, 40, 5, 1, 50);
    CHECK(zero.corr_bit_t.estimate == 1.0);
    CHECK(zero.corr_site_Mt.estimate == 1.0);

    NoiseComparison c = noise_comparison(0.5, 60, 0.1, 200, 6, 1, 200);
    CHECK(c.cap == coupled_cap(60, 0.5));
    CHECK(c.corr_site_Mt.estimate <= c.corr_bit_t.estimate + 2 * c.corr_bit_t.stderr_);
    CHECK(c.capped_gap_relative <= 0.05);
    CHECK_THROWS_AS(noise_comparison(0.5, 60, 1.0, 50, 1), DomainError);
}

TEST_CASE("exponent fits reject bad input")
{
    CHECK_THROWS_AS(variance_scaling(0.5, {8, 16, 32}, 0, 1), DomainError);
    CHECK_THROWS_AS(variance_scaling(0.5, {8, 16}, 10, 1), DomainError);
    CHECK_THROWS_AS(variance_scaling(0.5, {16, 8, 32}, 10, 1), DomainError);
    ExponentFit fit = variance_scaling(0.5, {8, 16, 32}, 20, 1, 1, 50);
    CHECK(fit.samples.size() == 3);
    CHECK(fit.samples[0].size() == 20);
    CHECK(fit.slope_ci_low <= fit.slope);
    CHECK(fit.slope <= fit.slope_ci_high);
}

TEST_CASE("midpoint deviation")
{
    std::vector<Coord> diag;
    for (int k = 0; k <= 8; ++k) {
        diag.push_back(Coord{k, k});
        if (k < 8) {
            diag.push_back(Coord{k + 1, k});
        }
    }
    CHECK(midpoint_deviation(diag, 8) == 1);
    std::vector<Coord> corner;
    for (int k = 0; k <= 8; ++k) {
        corner.push_back(Coord{k, 0});
    }
    for (int k = 1; k <= 8; ++k) {
        corner.push_back(Coord{8, k});
    }
    CHECK(midpoint_deviation(corner, 8) == 4);
    CHECK_THROWS_AS(midpoint_deviation(std::vector<Coord>{{0, 0}, {0, 1}}, 8), DomainError);
}

TEST_CASE("envelope containment")
{
    CHECK(inside_envelope(Coord{5, 5}, 10, 0.5, 0.0));
    CHECK_FALSE(inside_envelope(Coord{10, 0}, 10, 0.5, 0.0));
    CHECK(inside_envelope(Coord{10, 0}, 10, 0.5, 10.0));
    EnvelopeResult e = envelope_containment(0.5, 40, 2.0 / 3.0, {0, 2, 5, 10, 40}, 100, 7);
    for (std::size_t k = 1; k < e.containment.size(); ++k) {
        CHECK(e.containment[k].estimate >= e.containment[k - 1].estimate);
    }
    CHECK(e.containment.back().estimate == 1.0);
}

TEST_CASE("geodesic visit frequencies")
{
    HeatmapResult h = geodesic_heatmap(0.5, 100, 400, 9);
    CHECK(h.frequency(Coord{0, 0}).estimate == 1.0);
    CHECK(h.frequency(Coord{100, 100}).estimate == 1.0);
    CHECK(h.frequency(Coord{100, 0}).estimate <= h.frequency(Coord{50, 50}).estimate);
    CHECK(h.frequency(Coord{100, 0}).estimate < 0.05);
    for (double s : {0.25, 0.5}) {
        auto points = off_diagonal_profile(h, {0.0, s});
        CHECK(points[1].frequency.estimate <= points[0].frequency.estimate + 1e-12);
    }

    std::vector<double> scaled;
    for (int n : {50, 100, 200}) {
        scaled.push_back(scaled_diagonal_frequency(geodesic_heatmap(0.5, n, 400, 10 + std::uint64_t(n))));
    }
    for (double s : scaled) {
        CHECK(s > 0.0);
    }
    CHECK(scaled[2] / scaled[0] < 2.0);
    CHECK(scaled[2] / scaled[0] > 0.5);
    CHECK_THROWS_AS(scaled_diagonal_frequency(geodesic_heatmap(0.5, 3, 2, 1)), DomainError);
}

TEST_CASE("random walk staying nonnegative")
{
    CHECK(rw_exact_pm1(0.5, 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rw_exact_pm1(0.5, 4) == doctest::Approx(0.375).epsilon(1e-15));
    for (double pp : {0.5, 0.525, 0.7}) {
        for (int n : {1, 5, 12, 17}) {
            CHECK(rw_exact_pm1(pp, n) == doctest::Approx(oracle::walk_stays_nonnegative(pp, n)).epsilon(1e-12));
        }
    }

    StepDistribution sym = make_step_distribution("symmetric", {-1, 1}, {0.5, 0.5});
    CHECK(sym.mean() == 0.0);
    CHECK(sym.stddev() == 1.0);
    CHECK(sym.prob_at_least_one() == 0.5);
    RwResult r = rw_nonneg_bound(sym, 10000, 4000, 3);
    CHECK(r.bound == doctest::Approx(0.08).epsilon(1e-12));
    CHECK(r.q_hat.estimate <= r.bound);
    REQUIRE(r.exact.has_value());
    CHECK(r.q_hat.contains(*r.exact));

    StepDistribution lazy = make_step_distribution("lazy", {-1, 0, 2}, {0.5, 0.25, 0.25});
    CHECK(lazy.mean() == 0.0);
    RwResult l = rw_nonneg_bound(lazy, 1000, 2000, 4);
    CHECK(l.q_hat.estimate <= l.bound);
    CHECK_FALSE(l.exact.has_value());

    CHECK_THROWS_AS(make_step_distribution("down", {-1, 1}, {0.7, 0.3}), DomainError);
    CHECK_THROWS_AS(make_step_distribution("stuck", {0}, {1.0}), DomainError);
    CHECK_THROWS_AS(make_step_distribution("no-up", {-1, 0}, {0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(make_step_distribution("bad", {-1, 1}, {0.5, 0.6}), DomainError);
}

TEST_CASE("covariance decreases as more coordinates are resampled")
{
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 100; ++trial) {
        CovMonoSpec spec;
        spec.vars = 1 + int(gen() % 3);
        int support = 2 + int(gen() % 2);
        for (int k = 0; k < support; ++k) {
            spec.value_weights.push_back(1 + std::int64_t(gen() % 5));
        }
        std::size_t outcomes = 1;
        for (int i = 0; i < spec.vars; ++i) {
            outcomes *= std::size_t(support);
        }
        for (std::size_t y = 0; y < outcomes; ++y) {
            spec.f.push_back(std::int64_t(gen() % 11) - 5);
        }
        const std::uint32_t all = (1u << spec.vars) - 1u;
        spec.large = std::uint32_t(gen()) & all;
        spec.small = spec.large & std::uint32_t(gen());

        std::int64_t total = 0;
        for (auto w : spec.value_weights) {
            total += w;
        }
        std::vector<double> law, fd(spec.f.begin(), spec.f.end());
        for (auto w : spec.value_weights) {
            law.push_back(double(w) / double(total));
        }
        CovMonoResult res = covariance_monotonicity_bruteforce(spec);
        CHECK(res.holds);
        CHECK(res.cov_small >= res.cov_large);
        for (std::uint32_t mask : {spec.small, spec.large}) {
            double expected = oracle::resampled_covariance(fd, law, spec.vars, mask);
            double got = double(scaled_resampled_covariance(spec, mask)) / double(res.scale);
            CHECK(std::abs(got - expected) < 1e-9);
        }
        double var = oracle::resampled_covariance(fd, law, spec.vars, 0);
        CHECK(double(scaled_resampled_covariance(spec, 0)) / double(res.scale) == doctest::Approx(var).epsilon(1e-12));
        CHECK(std::abs(double(scaled_resampled_covariance(spec, all))) < 0.5);
    }

    CovMonoSpec bad{2, {1, 1}, {0, 1, 1, 0}, 0b01, 0b10};
    CHECK_THROWS_AS(covariance_monotonicity_bruteforce(bad), DomainError);
    CovMonoSpec wide{5, {1, 1}, std::vector<std::int64_t>(32, 0), 0, 0};
    CHECK_THROWS_AS(covariance_monotonicity_bruteforce(wide), DomainError);
}

TEST_CASE("bit influences")
{
    EstimateWithCI outside = bit_influence_on_Tn(0.5, 10, Coord{11, 3}, 0, 10, 1);
    CHECK(outside.estimate == 0.0);
    CHECK(outside.ci_high == 0.0);
    EstimateWithCI corner = bit_influence_on_Tn(0.5, 10, Coord{0, 0}, 0, 400, 2);
    CHECK(corner.estimate > 0.0);
    CHECK_THROWS_AS(bit_influence_on_Tn(0.5, 65, Coord{0, 0}, 0, 10, 1), DomainError);
    CHECK_THROWS_AS(bit_influence_on_Tn(0.5, 10, Coord{0, 0}, -1, 10, 1), DomainError);

    VisitInfluenceTable t = visit_vs_influence(0.5, 16, 200, 3);
    CHECK(t.fitted_constant <= 5.0);
    for (const auto& row : t.rows) {
        double previous = row.influence.front();
        for (double x : row.influence) {
            CHECK(x <= previous + 0.25);
            previous = x;
        }
        CHECK(row.sum_sq >= 0.0);
    }
    CHECK_THROWS_AS(visit_vs_influence(0.5, 16, 10, 3, 1, 6, {Coord{17, 0}}), DomainError);
}

TEST_CASE("increment sandwich")
{
    CHECK_THROWS_AS(sandwich_experiment(0.5, Coord{200, 200}, 2.0, 10, 1), DomainError);
    CHECK_THROWS_AS(sandwich_experiment(0.5, Coord{100, 100}, 0.0, 10, 1), DomainError);
    CHECK_THROWS_AS(sandwich_experiment(0.5, Coord{150, 50}, 0.2, 10, 1), DomainError);

    SandwichResult a = sandwich_experiment(0.5, Coord{100, 100}, 0.2, 60, 4);
    CHECK(a.reflection_mismatches == 0);
    CHECK(a.k >= 1);
    CHECK(a.lambda_minus < 0.5);
    CHECK(a.lambda_plus > 0.5);
    CHECK(a.freq_both.estimate <= a.freq_delta.estimate);
    CHECK(a.freq_both.estimate <= a.freq_delta_prime.estimate);
    CHECK(a.y_mean_exact > 0.0);
    CHECK(a.y_mean.ci_low > 0.0);

    SandwichResult b = sandwich_experiment(0.5, Coord{200, 200}, 0.2, 20, 5);
    CHECK(b.reflection_mismatches == 0);
    CHECK(b.y_mean_exact < a.y_mean_exact);
}
