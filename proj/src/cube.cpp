#include "lppn/cube.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "lppn/coord.hpp"
#include "lppn/rng.hpp"

namespace lppn {
namespace {

class NeumaierSum {
public:
    void add(double x)
    {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void require_axis(const CubeFunction& f, int i)
{
    if (i < 0 || i >= f.m()) {
        throw DomainError("coordinate index " + std::to_string(i) + " out of range");
    }
}

template<class F>
CubeFunction map_values(const CubeFunction& f, F&& op)
{
    std::vector<double> out(f.size());
    for (std::uint32_t x = 0; x < f.size(); ++x) {
        out[x] = op(x, f(x));
    }
    return CubeFunction(f.m(), f.p(), std::move(out));
}

CheckResult identity_check(std::string name, double residual, double tol = kIdentityTol)
{
    return CheckResult{std::move(name), residual, tol, residual <= tol};
}

CheckResult inequality_check(std::string name, double lhs, double rhs)
{
    double slack = lhs - rhs;
    return CheckResult{std::move(name), slack, kIdentityTol, slack <= kIdentityTol};
}

}  // namespace

CubeFunction::CubeFunction(int m, double p, std::vector<double> values)
    : m_(m), p_(p), values_(std::move(values))
{
    if (m < 0 || m > kMaxCubeDim) {
        throw DomainError("cube dimension must lie in [0, 20]");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("p must lie in (0,1)");
    }
    if (values_.size() != (std::size_t(1) << m)) {
        throw DomainError("value table must have 2^m entries");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw DomainError("cube function values must be finite");
        }
    }
    weight_by_popcount_.resize(std::size_t(m) + 1);
    for (int k = 0; k <= m; ++k) {
        weight_by_popcount_[std::size_t(k)] = std::pow(p, k) * std::pow(1.0 - p, m - k);
    }
}

double CubeFunction::measure(std::uint32_t x) const
{
    return weight_by_popcount_[std::size_t(std::popcount(x))];
}

void require_compatible(const CubeFunction& f, const CubeFunction& g)
{
    if (f.m() != g.m() || f.p() != g.p()) {
        throw DomainError("cube functions differ in dimension or bias");
    }
}

double expectation(const CubeFunction& f)
{
    NeumaierSum acc;
    for (std::uint32_t x = 0; x < f.size(); ++x) {
        acc.add(f.measure(x) * f(x));
    }
    return acc.value();
}

double inner(const CubeFunction& f, const CubeFunction& g)
{
    require_compatible(f, g);
    NeumaierSum acc;
    for (std::uint32_t x = 0; x < f.size(); ++x) {
        acc.add(f.measure(x) * f(x) * g(x));
    }
    return acc.value();
}

double variance(const CubeFunction& f)
{
    double mean = expectation(f);
    NeumaierSum acc;
    for (std::uint32_t x = 0; x < f.size(); ++x) {
        double d = f(x) - mean;
        acc.add(f.measure(x) * d * d);
    }
    return acc.value();
}

double max_abs_diff(const CubeFunction& f, const CubeFunction& g)
{
    require_compatible(f, g);
    double worst = 0.0;
    for (std::uint32_t x = 0; x < f.size(); ++x) {
        worst = std::max(worst, std::abs(f(x) - g(x)));
    }
    return worst;
}

CubeFunction pointwise_product(const CubeFunction& f, const CubeFunction& g)
{
    require_compatible(f, g);
    return map_values(f, [&](std::uint32_t x, double v) { return v * g(x); });
}

CubeFunction abs_pow(const CubeFunction& f, double exponent)
{
    return map_values(f, [&](std::uint32_t, double v) { return std::pow(std::abs(v), exponent); });
}

CubeFunction semigroup_apply(const CubeFunction& f, double t)
{
    if (!(t >= 0.0)) {
        throw DomainError("semigroup time must be nonnegative");
    }
    std::vector<double> vals = f.values();
    const double keep = std::exp(-t);
    const double p = f.p();
    for (int i = 0; i < f.m(); ++i) {
        const std::uint32_t bit = 1u << i;
        for (std::uint32_t x = 0; x < vals.size(); ++x) {
            if (x & bit) {
                continue;
            }
            double v0 = vals[x];
            double v1 = vals[x | bit];
            double mean = (1.0 - p) * v0 + p * v1;
            vals[x] = keep * v0 + (1.0 - keep) * mean;
            vals[x | bit] = keep * v1 + (1.0 - keep) * mean;
        }
    }
    return CubeFunction(f.m(), p, std::move(vals));
}

CubeFunction flip_difference(const CubeFunction& f, int i)
{
    require_axis(f, i);
    const std::uint32_t bit = 1u << i;
    return map_values(f, [&](std::uint32_t x, double) { return f(x | bit) - f(x & ~bit); });
}

CubeFunction difference_op(const CubeFunction& f, int i)
{
    require_axis(f, i);
    const std::uint32_t bit = 1u << i;
    const double p = f.p();
    return map_values(f, [&](std::uint32_t x, double) {
        double xi = (x & bit) ? 1.0 : 0.0;
        return (p - xi) * (f(x | bit) - f(x & ~bit));
    });
}

double influence(const CubeFunction& f, int i)
{
    return expectation(abs_pow(difference_op(f, i), 1.0));
}

double influence_two_point(const CubeFunction& f, int i)
{
    double p = f.p();
    return 2.0 * p * (1.0 - p) * expectation(abs_pow(flip_difference(f, i), 1.0));
}

double noisy_covariance(const CubeFunction& f, const CubeFunction& g, double t)
{
    require_compatible(f, g);
    return inner(f, semigroup_apply(g, t)) - expectation(f) * expectation(g);
}

double lsi_rho(double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("p must lie in (0,1)");
    }
    if (p == 0.5) {
        return 1.0;
    }
    return 2.0 * (2.0 * p - 1.0) / (std::log(p) - std::log(1.0 - p));
}

BksParams bks_params(double p, double t)
{
    BksParams b;
    b.p = p;
    b.t = t;
    b.rho = lsi_rho(p);
    b.theta = std::tanh(b.rho * t / 2.0);
    return b;
}

bool LemmaReport::all_passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* LemmaReport::find(const std::string& name) const
{
    for (const auto& c : checks) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

double dirichlet_time_integral(const CubeFunction& f)
{
    std::vector<CubeFunction> grads;
    for (int i = 0; i < f.m(); ++i) {
        grads.push_back(difference_op(f, i));
    }
    // Integrand <= e^{-2s} times its value at 0; past the cut only rounding is left.
    const double cut = 40.0;
    auto integrand = [&](double s) {
        if (s > cut) {
            return 0.0;
        }
        double total = 0.0;
        for (const auto& d : grads) {
            CubeFunction ps = semigroup_apply(d, s);
            total += inner(ps, ps);
        }
        return total;
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    return 2.0 * integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity());
}

LemmaReport verify_lemma_suite(const CubeFunction& f, const CubeFunction& g, double t, int i)
{
    require_compatible(f, g);
    require_axis(f, i);
    const double p = f.p();
    const int m = f.m();
    const BksParams bp = bks_params(p, t);
    LemmaReport rep;

    CubeFunction ptf = semigroup_apply(f, t);
    CubeFunction ptg = semigroup_apply(g, t);
    CubeFunction grad_f = difference_op(f, i);
    CubeFunction grad_g = difference_op(g, i);
    CubeFunction pt_grad_f = semigroup_apply(grad_f, t);

    rep.checks.push_back(identity_check(
        "commutativity", max_abs_diff(difference_op(ptf, i), pt_grad_f)));

    {
        // Five-point central difference in t.
        const double h = kHeatStep;
        const double t0 = std::max(t, 2.0 * h);
        auto at = [&](double s) { return semigroup_apply(f, s); };
        CubeFunction fm2 = at(t0 - 2 * h), fm1 = at(t0 - h), fp1 = at(t0 + h), fp2 = at(t0 + 2 * h);
        CubeFunction pt0 = at(t0);
        std::vector<double> gen(f.size(), 0.0);
        for (int k = 0; k < m; ++k) {
            CubeFunction dk = difference_op(pt0, k);
            for (std::uint32_t x = 0; x < f.size(); ++x) {
                gen[x] += dk(x);
            }
        }
        double worst = 0.0;
        for (std::uint32_t x = 0; x < f.size(); ++x) {
            double deriv = (fm2(x) - 8.0 * fm1(x) + 8.0 * fp1(x) - fp2(x)) / (12.0 * h);
            worst = std::max(worst, std::abs(deriv - gen[x]));
        }
        rep.checks.push_back(identity_check("heat_equation", worst, kHeatTol));
    }

    rep.checks.push_back(identity_check(
        "integration_by_parts", std::abs(inner(f, grad_g) + inner(grad_f, grad_g))));

    {
        // P_t nabla_i f = e^{-t} (p - x_i) P_t(f o sigma^1 - f o sigma^0)
        CubeFunction pt_flip = semigroup_apply(flip_difference(f, i), t);
        const std::uint32_t bit = 1u << i;
        double worst = 0.0;
        for (std::uint32_t x = 0; x < f.size(); ++x) {
            double xi = (x & bit) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(pt_grad_f(x) - std::exp(-t) * (p - xi) * pt_flip(x)));
        }
        rep.checks.push_back(identity_check("time_decorrelation_identity", worst));
        rep.checks.push_back(inequality_check(
            "time_decorrelation", influence(ptf, i),
            2.0 * std::exp(-t) * std::max(p, 1.0 - p) * influence(f, i)));
    }

    {
        double second = inner(ptf, ptf);
        double q = 1.0 + std::exp(-2.0 * bp.rho * t);
        double rhs = std::pow(expectation(abs_pow(f, q)), 2.0 / q);
        rep.checks.push_back(inequality_check("hypercontractivity", second, rhs));

        double th = std::tanh(bp.rho * t);
        double rhs_cor = std::pow(inner(f, f), 1.0 - th)
                         * std::pow(expectation(abs_pow(f, 1.0)), 2.0 * th);
        rep.checks.push_back(inequality_check("hypercontractive_corollary", second, rhs_cor));
    }

    rep.checks.push_back(identity_check("symmetry", std::abs(inner(f, ptg) - inner(ptf, g))));

    {
        const double s = 0.37;
        rep.checks.push_back(identity_check(
            "semigroup_law",
            max_abs_diff(semigroup_apply(ptf, s), semigroup_apply(f, t + s))));
    }

    rep.checks.push_back(identity_check(
        "covariance_identity",
        std::abs(noisy_covariance(f, g, 2.0 * t)
                 - (inner(ptf, ptg) - expectation(ptf) * expectation(ptg)))));

    {
        double var = variance(f);
        double integral = dirichlet_time_integral(f);
        double rel = var > 0.0 ? std::abs(integral - var) / var : std::abs(integral);
        rep.checks.push_back(identity_check("integral_formula", rel, kIntegralRelTol));
    }
    return rep;
}

BksRecord verify_bks(const CubeFunction& f, const CubeFunction& g, double t)
{
    require_compatible(f, g);
    double vf = variance(f);
    double vg = variance(g);
    if (!(vf > 0.0 && vg > 0.0)) {
        throw DomainError("covariance bound needs nonconstant functions");
    }
    BksParams bp = bks_params(f.p(), t);
    double infl = 0.0;
    for (int i = 0; i < f.m(); ++i) {
        infl += influence(f, i) * influence(g, i);
    }
    BksRecord r;
    r.lhs = noisy_covariance(f, g, t);
    double base = std::pow(std::sqrt(vf * vg), 1.0 - bp.theta);
    r.rhs_stated = base * std::pow(infl, bp.theta);
    r.rhs_proof = base * std::pow(4.0 * infl, bp.theta);
    r.stated_holds = r.lhs <= r.rhs_stated + kIdentityTol;
    r.proof_holds = r.lhs <= r.rhs_proof + kIdentityTol;
    return r;
}

LsiParts geometric_lsi_parts(double p, double u)
{
    if (!(0.0 < u && u < p && p < 1.0)) {
        throw DomainError("geometric_lsi_ratio needs 0 < u < p < 1");
    }
    LsiParts out;
    double a = (1.0 - u) / (1.0 - p);
    out.entropy = 2.0 * p * std::log(std::sqrt(a)) * (1.0 - u) / (u * u) - (p / u) * std::log(p / u);
    double denom = 1.0 - std::sqrt((1.0 - p) * (1.0 - u));
    out.variance = p / u - p * p / (denom * denom);
    out.ratio = out.entropy / out.variance;
    return out;
}

double geometric_lsi_ratio(double p, double u)
{
    return geometric_lsi_parts(p, u).ratio;
}

CubeFunction random_gaussian_function(int m, double p, std::uint64_t seed)
{
    return CubeFunction::from(m, p, [&](std::uint32_t x) {
        return standard_normal(plain_key(seed, x, StreamTag::Generic));
    });
}

CubeFunction random_monotone_function(int m, double p, std::uint64_t seed, int terms)
{
    if (terms < 1) {
        throw DomainError("random_monotone_function needs terms >= 1");
    }
    std::vector<double> coef(std::size_t(terms) * std::size_t(m));
    std::vector<double> cut(static_cast<std::size_t>(terms));
    std::uint64_t next = 0;
    for (int j = 0; j < terms; ++j) {
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            double a = uniform01(plain_key(seed, next++, StreamTag::Generic));
            coef[std::size_t(j) * std::size_t(m) + std::size_t(i)] = a;
            total += a;
        }
        cut[std::size_t(j)] = total * uniform01(plain_key(seed, next++, StreamTag::Generic));
    }
    return CubeFunction::from(m, p, [&](std::uint32_t x) {
        double value = 0.0;
        for (int j = 0; j < terms; ++j) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) {
                if ((x >> i) & 1u) {
                    s += coef[std::size_t(j) * std::size_t(m) + std::size_t(i)];
                }
            }
            value += s >= cut[std::size_t(j)] ? 1.0 : 0.0;
        }
        return value;
    });
}

CubeFunction random_junta(int m, double p, int k, std::uint64_t seed)
{
    if (k < 0 || k > m) {
        throw DomainError("random_junta needs 0 <= k <= m");
    }
    // Partial Fisher-Yates picks the relevant coordinates.
    std::vector<int> order(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        order[std::size_t(i)] = i;
    }
    for (int i = 0; i < k; ++i) {
        std::uint64_t r = random_bits(plain_key(seed, std::uint64_t(i), StreamTag::Replica));
        int j = i + int(r % std::uint64_t(m - i));
        std::swap(order[std::size_t(i)], order[std::size_t(j)]);
    }
    return CubeFunction::from(m, p, [&](std::uint32_t x) {
        std::uint32_t key = 0;
        for (int i = 0; i < k; ++i) {
            key |= ((x >> order[std::size_t(i)]) & 1u) << i;
        }
        return standard_normal(plain_key(seed, key, StreamTag::Generic));
    });
}

}  // namespace lppn
