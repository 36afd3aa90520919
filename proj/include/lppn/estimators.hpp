#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lppn/coord.hpp"
#include "lppn/grid.hpp"
#include "lppn/lattice.hpp"
#include "lppn/stats.hpp"

namespace lppn {

//! Seed of replica r in an experiment keyed by seed.
inline std::uint64_t replica_seed(std::uint64_t seed, std::size_t r)
{
    return derive_seed(seed, r, StreamTag::Replica);
}

//---------------------------------------------------------------------------//
// Correlation decay under noise
//---------------------------------------------------------------------------//

struct CorrDecayResult {
    double p = 0.0;
    int n = 0;
    NoiseKind kind = NoiseKind::Bit;
    std::uint64_t seed = 0;
    std::vector<double> ts;
    std::vector<EstimateWithCI> corr;
    std::vector<double> base_times;
    std::vector<std::vector<double>> noisy_times;  //!< [t index][replica]
};

//! Pearson correlation of T_n(omega) and T_n(omega^t) with common base fields across t.
CorrDecayResult corr_decay(double p, int n, const std::vector<double>& ts, NoiseKind kind,
                           int replicas, std::uint64_t seed, int threads = 1);

//---------------------------------------------------------------------------//
// Scaling exponents
//---------------------------------------------------------------------------//

struct ExponentFit {
    std::vector<int> scales;
    std::vector<double> statistic;
    double slope = 0.0;
    double intercept = 0.0;
    double slope_ci_low = 0.0;
    double slope_ci_high = 0.0;
    std::vector<double> residuals;
    std::vector<std::vector<double>> samples;  //!< [scale][replica]
};

inline constexpr int kBootstrapResamples = 1000;

//! Slope of log Var(T_n) against log n.
ExponentFit variance_scaling(double p, const std::vector<int>& n_list, int replicas,
                             std::uint64_t seed, int threads = 1,
                             int resamples = kBootstrapResamples);

//! Largest |x2 - n/2| over points of path on the vertical line x1 = n/2.
int midpoint_deviation(const std::vector<Coord>& path, int n);

//! Slope of log(median midpoint deviation of the upmost geodesic) against log n.
ExponentFit transversal_exponent(double p, const std::vector<int>& n_list, int replicas,
                                 std::uint64_t seed, int threads = 1,
                                 int resamples = kBootstrapResamples);

//! v lies in the band |v2 - v1| <= min(|v|_1, |n e_+ - v|_1)^alpha + ell.
bool inside_envelope(Coord v, int n, double alpha, double ell);

struct EnvelopeResult {
    int n = 0;
    double alpha = 0.0;
    std::vector<int> ells;
    std::vector<EstimateWithCI> containment;  //!< P(pi_n inside the band) per ell
};

EnvelopeResult envelope_containment(double p, int n, double alpha, const std::vector<int>& ells,
                                    int replicas, std::uint64_t seed, int threads = 1);

//---------------------------------------------------------------------------//
// Geodesic visit frequencies
//---------------------------------------------------------------------------//

struct HeatmapResult {
    int n = 0;
    double p = 0.0;
    int replicas = 0;
    std::uint64_t seed = 0;
    Grid<std::int64_t> visit_count;

    EstimateWithCI frequency(Coord v) const;
};

HeatmapResult geodesic_heatmap(double p, int n, int replicas, std::uint64_t seed, int threads = 1);

//! Frequency at the centre (n/2, n/2) times (n / log n)^{2/3}.
double scaled_diagonal_frequency(const HeatmapResult& h);

struct OffDiagonalPoint {
    double s = 0.0;
    Coord v;
    EstimateWithCI frequency;
};

//! Points on the antidiagonal |v|_1 = n at offset v2 - v1 ~ s n^{2/3}.
std::vector<OffDiagonalPoint> off_diagonal_profile(const HeatmapResult& h,
                                                   const std::vector<double>& s_values);

//---------------------------------------------------------------------------//
// Random walk staying nonnegative
//---------------------------------------------------------------------------//

struct StepDistribution {
    std::string name;
    std::vector<int> values;
    std::vector<double> probs;

    double mean() const;
    double stddev() const;
    double prob_at_least_one() const;
};

StepDistribution make_step_distribution(std::string name, std::vector<int> values,
                                        std::vector<double> probs);

struct RwResult {
    StepDistribution dist;
    int steps = 0;
    EstimateWithCI q_hat;
    double bound = 0.0;
    std::optional<double> exact;
};

//! Longest walk for which RwResult::exact is filled in.
inline constexpr int kExactWalkSteps = 20000;

//! P(S_k >= 0 for k <= N) for +-1 steps, by dynamic programming over positions.
double rw_exact_pm1(double p_plus, int steps);

RwResult rw_nonneg_bound(const StepDistribution& dist, int steps, int replicas,
                         std::uint64_t seed, int threads = 1);

//---------------------------------------------------------------------------//
// Increment sandwich between two boundary models
//---------------------------------------------------------------------------//

struct SandwichResult {
    Coord v;
    int n = 0;
    double s = 0.0;
    int k = 0;
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    double hat_lambda_minus = 0.0;
    double hat_lambda_plus = 0.0;
    EstimateWithCI freq_delta;        //!< left increments sandwiched for all |j| <= k
    EstimateWithCI freq_delta_prime;  //!< right increments sandwiched for all |j| <= k
    EstimateWithCI freq_both;
    EstimateWithCI y_mean;  //!< pooled over j = 1..k
    EstimateWithCI z_mean;  //!< pooled over j = -k+1..0
    double y_mean_exact = 0.0;
    double z_mean_exact = 0.0;
    std::int64_t reflection_mismatches = 0;  //!< Delta'_j against the reflected field
};

//! n defaults to v1 + v2.
SandwichResult sandwich_experiment(double p, Coord v, double s, int replicas, std::uint64_t seed,
                                   int n = -1, int threads = 1);

//---------------------------------------------------------------------------//
// Bit influences on the passage time
//---------------------------------------------------------------------------//

inline constexpr int kMaxInfluenceScale = 64;

EstimateWithCI bit_influence_on_Tn(double p, int n, Coord v, int bit, int replicas,
                                   std::uint64_t seed, int threads = 1);

struct InfluenceRow {
    Coord v;
    EstimateWithCI visit;
    std::vector<double> influence;  //!< per bit index 0..i_max
    double sum_sq = 0.0;
    double ratio = 0.0;  //!< sum_sq / visit^{2 - delta}
};

struct VisitInfluenceTable {
    double p = 0.0;
    int n = 0;
    int i_max = 0;
    double delta = 0.5;
    int replicas = 0;
    std::vector<InfluenceRow> rows;
    double fitted_constant = 0.0;  //!< max ratio over rows
};

//! Sites default to the diagonal and two parallel lines at offset n/4.
VisitInfluenceTable visit_vs_influence(double p, int n, int replicas, std::uint64_t seed,
                                       int threads = 1, int i_max = 6,
                                       std::vector<Coord> sites = {});

//---------------------------------------------------------------------------//
// Covariance under partial resampling, by enumeration
//---------------------------------------------------------------------------//

struct CovMonoSpec {
    int vars = 0;
    std::vector<std::int64_t> value_weights;  //!< unnormalised law of one coordinate
    std::vector<std::int64_t> f;              //!< table over support^vars, coordinate 0 fastest
    std::uint32_t small = 0;                  //!< resampled set S (bitmask)
    std::uint32_t large = 0;                  //!< resampled set S~ (bitmask), S inside S~
};

struct CovMonoResult {
    std::int64_t scale = 1;  //!< covariances below are multiplied by this
    std::int64_t cov_small = 0;
    std::int64_t cov_large = 0;
    bool holds = false;
};

//! Cov(f(Y), f(Y^S)) for a resampled set, times (sum of weights)^{2 vars}.
std::int64_t scaled_resampled_covariance(const CovMonoSpec& spec, std::uint32_t mask);

CovMonoResult covariance_monotonicity_bruteforce(const CovMonoSpec& spec);

//---------------------------------------------------------------------------//
// Bit noise against coupled site noise
//---------------------------------------------------------------------------//

struct NoiseComparison {
    double p = 0.0;
    int n = 0;
    double t = 0.0;
    int cap = 0;
    EstimateWithCI corr_bit_t;
    EstimateWithCI corr_site_Mt;
    EstimateWithCI difference;  //!< corr_site_Mt - corr_bit_t, bootstrap
    double var_T = 0.0;
    double cov_bit = 0.0;
    double cov_bit_capped = 0.0;
    double cov_site = 0.0;
    double cov_site_capped = 0.0;
    double capped_gap_relative = 0.0;  //!< max covariance gap over Var(T_n)
};

NoiseComparison noise_comparison(double p, int n, double t, int replicas, std::uint64_t seed,
                                 int threads = 1, int resamples = kBootstrapResamples);

}  // namespace lppn
