#include "lppn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "lppn/coord.hpp"
#include "lppn/rng.hpp"

namespace lppn {

double normal_quantile(double prob)
{
    return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

double chi_square_survival(double statistic, double dof)
{
    boost::math::chi_squared_distribution<double> dist(dof);
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

double mean(std::span<const double> xs)
{
    if (xs.empty()) {
        throw DomainError("mean of an empty sample");
    }
    double s = 0.0;
    for (double x : xs) {
        s += x;
    }
    return s / double(xs.size());
}

double sample_variance(std::span<const double> xs)
{
    if (xs.size() < 2) {
        throw DomainError("variance needs at least two samples");
    }
    double m = mean(xs);
    double s = 0.0;
    for (double x : xs) {
        s += (x - m) * (x - m);
    }
    return s / double(xs.size() - 1);
}

double median(std::vector<double> xs)
{
    if (xs.empty()) {
        throw DomainError("median of an empty sample");
    }
    std::sort(xs.begin(), xs.end());
    std::size_t h = xs.size() / 2;
    return xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
}

double covariance(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw DomainError("covariance needs two equal samples of size >= 2");
    }
    double mx = mean(xs);
    double my = mean(ys);
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += (xs[i] - mx) * (ys[i] - my);
    }
    return s / double(xs.size() - 1);
}

double pearson(std::span<const double> xs, std::span<const double> ys)
{
    double vx = sample_variance(xs);
    double vy = sample_variance(ys);
    if (vx <= 0.0 || vy <= 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (std::equal(xs.begin(), xs.end(), ys.begin(), ys.end())) {
        return 1.0;
    }
    double r = covariance(xs, ys) / std::sqrt(vx * vy);
    return std::clamp(r, -1.0, 1.0);
}

EstimateWithCI mean_estimate(std::span<const double> xs, std::uint64_t seed)
{
    EstimateWithCI e;
    e.replicas = std::int64_t(xs.size());
    e.seed = seed;
    e.estimate = mean(xs);
    if (xs.size() < 2) {
        e.degenerate = true;
        e.ci_low = e.ci_high = e.estimate;
        return e;
    }
    e.stderr_ = std::sqrt(sample_variance(xs) / double(xs.size()));
    double z = normal_quantile(0.5 + kConfidence / 2.0);
    e.ci_low = e.estimate - z * e.stderr_;
    e.ci_high = e.estimate + z * e.stderr_;
    return e;
}

EstimateWithCI correlation_estimate(std::span<const double> xs, std::span<const double> ys,
                                    std::uint64_t seed)
{
    EstimateWithCI e;
    e.replicas = std::int64_t(xs.size());
    e.seed = seed;
    if (xs.size() < 4) {
        throw DomainError("correlation estimate needs at least 4 replicas");
    }
    double r = pearson(xs, ys);
    if (std::isnan(r)) {
        e.degenerate = true;
        e.estimate = r;
        e.ci_low = e.ci_high = r;
        return e;
    }
    e.estimate = r;
    double n3 = double(xs.size()) - 3.0;
    e.stderr_ = (1.0 - r * r) / std::sqrt(n3);
    if (std::abs(r) == 1.0) {
        e.ci_low = e.ci_high = r;
        return e;
    }
    double z = std::atanh(r);
    double q = normal_quantile(0.5 + kConfidence / 2.0);
    e.ci_low = std::tanh(z - q / std::sqrt(n3));
    e.ci_high = std::tanh(z + q / std::sqrt(n3));
    return e;
}

EstimateWithCI proportion_estimate(std::int64_t successes, std::int64_t trials, std::uint64_t seed)
{
    if (trials <= 0 || successes < 0 || successes > trials) {
        throw DomainError("proportion needs 0 <= successes <= trials, trials > 0");
    }
    EstimateWithCI e;
    e.replicas = trials;
    e.seed = seed;
    double n = double(trials);
    double ph = double(successes) / n;
    double z = normal_quantile(0.5 + kConfidence / 2.0);
    double denom = 1.0 + z * z / n;
    double centre = (ph + z * z / (2.0 * n)) / denom;
    double half = z * std::sqrt(ph * (1.0 - ph) / n + z * z / (4.0 * n * n)) / denom;
    e.estimate = ph;
    e.stderr_ = std::sqrt(ph * (1.0 - ph) / n);
    e.ci_low = std::min(ph, centre - half);
    e.ci_high = std::max(ph, centre + half);
    return e;
}

GofResult chi_square_geometric(std::span<const std::int64_t> samples, double p)
{
    if (samples.empty()) {
        throw DomainError("goodness of fit needs samples");
    }
    const double n = double(samples.size());
    // Bins 0..K-1 individually, K and above pooled; K is the largest cut with all
    // expected counts >= 5 (the tail included).
    int cut = 0;
    while (n * p * std::pow(1.0 - p, cut) >= 5.0 && n * std::pow(1.0 - p, cut + 1) >= 5.0) {
        ++cut;
    }
    std::vector<double> observed(std::size_t(cut) + 1, 0.0);
    for (auto s : samples) {
        if (s < 0) {
            throw DomainError("geometric samples must be nonnegative");
        }
        observed[std::size_t(std::min<std::int64_t>(s, cut))] += 1.0;
    }
    GofResult r;
    for (int k = 0; k <= cut; ++k) {
        double expected = k < cut ? n * p * std::pow(1.0 - p, k) : n * std::pow(1.0 - p, cut);
        double d = observed[std::size_t(k)] - expected;
        r.statistic += d * d / expected;
    }
    r.bins = cut + 1;
    r.dof = cut;
    r.p_value = r.dof > 0 ? chi_square_survival(r.statistic, r.dof) : 1.0;
    return r;
}

LinearFit least_squares(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw DomainError("least squares needs matching samples of size >= 2");
    }
    double mx = mean(xs);
    double my = mean(ys);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fit.residuals.push_back(ys[i] - (fit.intercept + fit.slope * xs[i]));
    }
    return fit;
}

BootstrapSlope bootstrap_log_slope(std::span<const double> scales,
                                   const std::vector<std::vector<double>>& samples,
                                   const std::function<double(std::span<const double>)>& statistic,
                                   int resamples, std::uint64_t seed)
{
    if (scales.size() != samples.size() || scales.size() < 2) {
        throw DomainError("bootstrap needs one sample per scale and >= 2 scales");
    }
    if (resamples < 2) {
        throw DomainError("bootstrap needs at least two resamples");
    }
    std::vector<double> logx;
    std::vector<double> logy;
    for (std::size_t s = 0; s < scales.size(); ++s) {
        logx.push_back(std::log(scales[s]));
        logy.push_back(std::log(statistic(samples[s])));
    }
    BootstrapSlope out;
    out.fit = least_squares(logx, logy);

    std::vector<double> slopes;
    std::vector<double> buffer;
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t s = 0; s < scales.size(); ++s) {
            const auto& src = samples[s];
            std::uint64_t sub = derive_seed(seed, std::uint64_t(b) * scales.size() + s, StreamTag::Generic);
            buffer.resize(src.size());
            for (std::size_t k = 0; k < src.size(); ++k) {
                double u = uniform01(plain_key(sub, k, StreamTag::Generic));
                buffer[k] = src[std::min(src.size() - 1, std::size_t(u * double(src.size())))];
            }
            logy[s] = std::log(statistic(buffer));
        }
        slopes.push_back(least_squares(logx, logy).slope);
    }
    std::sort(slopes.begin(), slopes.end());
    auto pick = [&](double q) {
        double pos = q * double(slopes.size() - 1);
        std::size_t lo = std::size_t(std::floor(pos));
        std::size_t hi = std::min(slopes.size() - 1, lo + 1);
        double frac = pos - double(lo);
        return slopes[lo] * (1.0 - frac) + slopes[hi] * frac;
    };
    out.ci_low = pick((1.0 - kConfidence) / 2.0);
    out.ci_high = pick(1.0 - (1.0 - kConfidence) / 2.0);
    return out;
}

}  // namespace lppn
