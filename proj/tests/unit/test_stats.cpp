#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lppn/stats.hpp"

using namespace lppn;

TEST_CASE("basic summaries")
{
    std::vector<double> xs{1, 2, 3, 4, 10};
    CHECK(mean(xs) == doctest::Approx(4.0));
    CHECK(sample_variance(xs) == doctest::Approx(12.5));
    CHECK(median(xs) == 3.0);
    CHECK(median({4, 1, 3, 2}) == 2.5);
    std::vector<double> ys{2, 4, 6, 8, 20};
    CHECK(pearson(xs, ys) == 1.0);
    CHECK(pearson(xs, xs) == 1.0);
    CHECK(covariance(xs, ys) == doctest::Approx(25.0));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(chi_square_survival(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-10));
}

TEST_CASE("correlation interval coverage")
{
    const double rho = 0.6;
    const int trials = 1000, size = 200;
    std::mt19937_64 gen(1);
    std::normal_distribution<double> z;
    int covered = 0;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> a(size), b(size);
        for (int k = 0; k < size; ++k) {
            double u = z(gen), v = z(gen);
            a[std::size_t(k)] = u;
            b[std::size_t(k)] = rho * u + std::sqrt(1 - rho * rho) * v;
        }
        covered += correlation_estimate(a, b, 1).contains(rho);
    }
    CHECK(covered >= 930);
    CHECK(covered <= 970);
}

TEST_CASE("mean interval coverage")
{
    const int trials = 1000, size = 100;
    std::mt19937_64 gen(2);
    std::exponential_distribution<double> e(2.0);
    int covered = 0;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> a(size);
        for (auto& x : a) {
            x = e(gen);
        }
        EstimateWithCI est = mean_estimate(a, 7);
        covered += est.contains(0.5);
        CHECK(est.seed == 7);
        CHECK(est.replicas == size);
    }
    CHECK(covered >= 930);
    CHECK(covered <= 970);
}

TEST_CASE("degenerate samples")
{
    std::vector<double> flat(50, 3.0), rising(50);
    for (int k = 0; k < 50; ++k) {
        rising[std::size_t(k)] = k;
    }
    CHECK(correlation_estimate(flat, rising, 1).degenerate);
    CHECK(correlation_estimate(rising, rising, 1).estimate == 1.0);
    CHECK(mean_estimate(std::vector<double>{1.0}, 1).degenerate);
}

TEST_CASE("wilson interval")
{
    EstimateWithCI half = proportion_estimate(50, 100, 0);
    CHECK(half.estimate == 0.5);
    CHECK(half.ci_low == doctest::Approx(0.40383153).epsilon(1e-6));
    CHECK(half.ci_high == doctest::Approx(0.59616847).epsilon(1e-6));
    EstimateWithCI none = proportion_estimate(0, 40, 0);
    CHECK(none.ci_low == 0.0);
    CHECK(none.ci_high > 0.0);
    EstimateWithCI all = proportion_estimate(40, 40, 0);
    CHECK(all.ci_high == doctest::Approx(1.0));
    CHECK(all.ci_low < 1.0);
}

TEST_CASE("geometric goodness of fit")
{
    std::mt19937_64 gen(3);
    std::geometric_distribution<int> g(0.4);
    std::vector<std::int64_t> xs;
    for (int k = 0; k < 50000; ++k) {
        xs.push_back(g(gen));
    }
    GofResult good = chi_square_geometric(xs, 0.4);
    CHECK(good.p_value >= 1e-3);
    CHECK(good.dof == good.bins - 1);
    CHECK(chi_square_geometric(xs, 0.45).p_value < 1e-6);
}

TEST_CASE("least squares and bootstrap slope")
{
    std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
    LinearFit fit = least_squares(x, y);
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
    for (double r : fit.residuals) {
        CHECK(std::abs(r) < 1e-12);
    }

    std::vector<double> scales{10, 20, 40, 80};
    std::vector<std::vector<double>> samples;
    for (double s : scales) {
        samples.push_back(std::vector<double>(30, std::pow(s, 0.75)));
    }
    auto stat = [](std::span<const double> v) { return mean(v); };
    BootstrapSlope b = bootstrap_log_slope(scales, samples, stat, 200, 5);
    CHECK(b.fit.slope == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(b.ci_low == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(b.ci_high == doctest::Approx(0.75).epsilon(1e-12));

    std::mt19937_64 gen(4);
    std::normal_distribution<double> noise(0.0, 1.0);
    samples.clear();
    for (double s : scales) {
        std::vector<double> v;
        for (int k = 0; k < 400; ++k) {
            v.push_back(std::sqrt(s) * noise(gen));
        }
        samples.push_back(v);
    }
    auto var = [](std::span<const double> v) { return sample_variance(v); };
    BootstrapSlope bv = bootstrap_log_slope(scales, samples, var, 500, 6);
    CHECK(bv.ci_low <= 1.0);
    CHECK(bv.ci_high >= 1.0);
    CHECK(bv.ci_high - bv.ci_low < 0.3);
}
