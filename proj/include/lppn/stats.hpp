#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lppn {

struct EstimateWithCI {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::int64_t replicas = 0;
    std::uint64_t seed = 0;
    bool degenerate = false;  //!< no CI could be formed

    bool overlaps(const EstimateWithCI& other) const
    {
        return !(ci_high < other.ci_low || other.ci_high < ci_low);
    }
    bool contains(double x) const { return ci_low <= x && x <= ci_high; }
};

inline constexpr double kConfidence = 0.95;

double normal_quantile(double prob);
double chi_square_survival(double statistic, double dof);

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);
double median(std::vector<double> xs);
double pearson(std::span<const double> xs, std::span<const double> ys);
double covariance(std::span<const double> xs, std::span<const double> ys);

//! Mean with normal-theory CI.
EstimateWithCI mean_estimate(std::span<const double> xs, std::uint64_t seed);
//! Pearson correlation with a Fisher z interval.
EstimateWithCI correlation_estimate(std::span<const double> xs, std::span<const double> ys,
                                    std::uint64_t seed);
//! Binomial proportion with a Wilson interval.
EstimateWithCI proportion_estimate(std::int64_t successes, std::int64_t trials, std::uint64_t seed);

struct GofResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 0.0;
    int bins = 0;
};

//! Chi-square goodness of fit against Geometric(p) on {0,1,...}; bins merged so each expects >= 5.
GofResult chi_square_geometric(std::span<const std::int64_t> samples, double p);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> residuals;
};

LinearFit least_squares(std::span<const double> xs, std::span<const double> ys);

//! Percentile bootstrap for the slope of log(statistic) against log(scale).
//! Each scale's replicas are resampled independently.
struct BootstrapSlope {
    LinearFit fit;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

BootstrapSlope bootstrap_log_slope(std::span<const double> scales,
                                   const std::vector<std::vector<double>>& samples,
                                   const std::function<double(std::span<const double>)>& statistic,
                                   int resamples, std::uint64_t seed);

}  // namespace lppn
