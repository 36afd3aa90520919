#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lppn {

inline constexpr int kMaxCubeDim = 20;

/// Real function on {0,1}^m under the product Bernoulli(p) measure; bit i of the index is x_i.
class CubeFunction {
public:
    CubeFunction(int m, double p, std::vector<double> values);

    template<class F>
    static CubeFunction from(int m, double p, F&& fn)
    {
        std::vector<double> vals(std::size_t(1) << m);
        for (std::uint32_t x = 0; x < vals.size(); ++x) {
            vals[x] = fn(x);
        }
        return CubeFunction(m, p, std::move(vals));
    }

    int m() const { return m_; }
    double p() const { return p_; }
    std::size_t size() const { return values_.size(); }
    double operator()(std::uint32_t x) const { return values_[x]; }
    const std::vector<double>& values() const { return values_; }

    double measure(std::uint32_t x) const;

private:
    int m_;
    double p_;
    std::vector<double> values_;
    std::vector<double> weight_by_popcount_;
};

void require_compatible(const CubeFunction& f, const CubeFunction& g);

//! Neumaier-compensated E[f].
double expectation(const CubeFunction& f);
double inner(const CubeFunction& f, const CubeFunction& g);
double variance(const CubeFunction& f);
double max_abs_diff(const CubeFunction& f, const CubeFunction& g);

CubeFunction pointwise_product(const CubeFunction& f, const CubeFunction& g);
CubeFunction abs_pow(const CubeFunction& f, double exponent);

//! Exact P_t f: each coordinate kernel is e^{-t} Id + (1 - e^{-t}) (stationary mean).
CubeFunction semigroup_apply(const CubeFunction& f, double t);

//! f o sigma_i^1 - f o sigma_i^0.
CubeFunction flip_difference(const CubeFunction& f, int i);
//! (p - x_i)(f o sigma_i^1 - f o sigma_i^0).
CubeFunction difference_op(const CubeFunction& f, int i);
//! E|nabla_i f|.
double influence(const CubeFunction& f, int i);
//! 2p(1-p) E|f o sigma_i^1 - f o sigma_i^0|.
double influence_two_point(const CubeFunction& f, int i);

//! Cov(f(X), g(X^t)) = E[f P_t g] - E f E g.
double noisy_covariance(const CubeFunction& f, const CubeFunction& g, double t);

//! Log-Sobolev rate: 1 at p = 1/2, else 2(2p-1)/(log p - log(1-p)).
double lsi_rho(double p);

struct BksParams {
    double p = 0.0;
    double t = 0.0;
    double rho = 0.0;
    double theta = 0.0;  //!< tanh(rho t / 2)
};

BksParams bks_params(double p, double t);

struct CheckResult {
    std::string name;
    double residual = 0.0;  //!< identity: |lhs - rhs|; inequality: lhs - rhs (<= 0 is good)
    double tolerance = 0.0;
    bool passed = false;
};

struct LemmaReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
    const CheckResult* find(const std::string& name) const;
};

inline constexpr double kIdentityTol = 1e-10;
inline constexpr double kHeatStep = 1e-4;
inline constexpr double kHeatTol = 1e-6;
inline constexpr double kIntegralRelTol = 1e-6;

LemmaReport verify_lemma_suite(const CubeFunction& f, const CubeFunction& g, double t, int i);

//! 2 int_0^inf sum_i E[(P_s nabla_i f)^2] ds by double-exponential quadrature.
double dirichlet_time_integral(const CubeFunction& f);

struct BksRecord {
    double lhs = 0.0;
    double rhs_stated = 0.0;
    double rhs_proof = 0.0;
    bool stated_holds = false;
    bool proof_holds = false;
};

BksRecord verify_bks(const CubeFunction& f, const CubeFunction& g, double t);

struct LsiParts {
    double entropy = 0.0;
    double variance = 0.0;
    double ratio = 0.0;
};

//! Entropy and variance of f_u(k) = ((1-u)/(1-p))^{k/2} under Geometric(p); needs 0 < u < p < 1.
LsiParts geometric_lsi_parts(double p, double u);
double geometric_lsi_ratio(double p, double u);

//! I.i.d. standard normal values.
CubeFunction random_gaussian_function(int m, double p, std::uint64_t seed);
//! Sum of `terms` threshold indicators of nonnegative linear forms; nondecreasing in every bit.
CubeFunction random_monotone_function(int m, double p, std::uint64_t seed, int terms = 4);
//! Standard normal values depending only on k randomly chosen coordinates.
CubeFunction random_junta(int m, double p, int k, std::uint64_t seed);

}  // namespace lppn
