#include "lppn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>

#include "lppn/cube.hpp"
#include "lppn/estimators.hpp"
#include "lppn/lattice.hpp"
#include "lppn/lpp.hpp"
#include "lppn/parallel.hpp"
#include "lppn/stationary.hpp"
#include "lppn/stats.hpp"

namespace lppn {

//---------------------------------------------------------------------------//
// Params
//---------------------------------------------------------------------------//

Params::Params(const Json& raw, std::string prefix) : raw_(raw), prefix_(std::move(prefix))
{
    if (raw_.is_null()) {
        raw_ = Json::object();
    }
    if (!raw_.is_object()) {
        throw ConfigError(prefix_, "must be a JSON object");
    }
}

void Params::fail(const std::string& key, const std::string& message) const
{
    throw ConfigError(prefix_ + "." + key, message);
}

const Json* Params::lookup(const std::string& key)
{
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end() || it->is_null()) {
        return nullptr;
    }
    return &*it;
}

bool Params::has(const std::string& key) const
{
    auto it = raw_.find(key);
    return it != raw_.end() && !it->is_null();
}

const Json& Params::raw(const std::string& key)
{
    static const Json null_value;
    const Json* j = lookup(key);
    if (j) {
        resolved_[key] = *j;
        return *j;
    }
    return null_value;
}

double Params::real(const std::string& key, double fallback, double lo, double hi)
{
    double x = fallback;
    if (const Json* j = lookup(key)) {
        if (!j->is_number()) {
            fail(key, "expected a number");
        }
        x = j->get<double>();
    }
    if (!(x >= lo && x <= hi)) {
        fail(key, "value " + io::format_number(x) + " outside [" + io::format_number(lo) + ", "
                      + io::format_number(hi) + "]");
    }
    resolved_[key] = x;
    return x;
}

double Params::probability(const std::string& key, double fallback)
{
    double x = fallback;
    if (const Json* j = lookup(key)) {
        if (!j->is_number()) {
            fail(key, "expected a number");
        }
        x = j->get<double>();
    }
    if (!(x > 0.0 && x < 1.0)) {
        fail(key, "value " + io::format_number(x) + " must lie strictly between 0 and 1");
    }
    resolved_[key] = x;
    return x;
}

int Params::integer(const std::string& key, int fallback, int lo, int hi)
{
    long long x = fallback;
    if (const Json* j = lookup(key)) {
        if (!j->is_number_integer()) {
            fail(key, "expected an integer");
        }
        x = j->get<long long>();
    }
    if (x < lo || x > hi) {
        fail(key, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", "
                      + std::to_string(hi) + "]");
    }
    resolved_[key] = x;
    return int(x);
}

std::string Params::text(const std::string& key, const std::string& fallback,
                         const std::vector<std::string>& allowed)
{
    std::string s = fallback;
    if (const Json* j = lookup(key)) {
        if (!j->is_string()) {
            fail(key, "expected a string");
        }
        s = j->get<std::string>();
    }
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
        std::string options;
        for (const auto& a : allowed) {
            options += (options.empty() ? "" : ", ") + a;
        }
        fail(key, "'" + s + "' is not one of: " + options);
    }
    resolved_[key] = s;
    return s;
}

std::vector<double> Params::reals(const std::string& key, std::vector<double> fallback, double lo,
                                  double hi)
{
    std::vector<double> xs = std::move(fallback);
    if (const Json* j = lookup(key)) {
        if (!j->is_array()) {
            fail(key, "expected an array of numbers");
        }
        xs.clear();
        for (const auto& e : *j) {
            if (!e.is_number()) {
                fail(key, "expected an array of numbers");
            }
            xs.push_back(e.get<double>());
        }
    }
    if (xs.empty()) {
        fail(key, "must not be empty");
    }
    for (double x : xs) {
        if (!(x >= lo && x <= hi)) {
            fail(key, "entry " + io::format_number(x) + " outside [" + io::format_number(lo) + ", "
                          + io::format_number(hi) + "]");
        }
    }
    resolved_[key] = xs;
    return xs;
}

std::vector<int> Params::integers(const std::string& key, std::vector<int> fallback, int lo, int hi)
{
    std::vector<int> xs = std::move(fallback);
    if (const Json* j = lookup(key)) {
        if (!j->is_array()) {
            fail(key, "expected an array of integers");
        }
        xs.clear();
        for (const auto& e : *j) {
            if (!e.is_number_integer()) {
                fail(key, "expected an array of integers");
            }
            long long v = e.get<long long>();
            if (v < lo || v > hi) {
                fail(key, "entry " + std::to_string(v) + " outside [" + std::to_string(lo) + ", "
                              + std::to_string(hi) + "]");
            }
            xs.push_back(int(v));
        }
    }
    if (xs.empty()) {
        fail(key, "must not be empty");
    }
    resolved_[key] = xs;
    return xs;
}

void Params::finish() const
{
    for (auto it = raw_.begin(); it != raw_.end(); ++it) {
        if (!used_.count(it.key())) {
            throw ConfigError(prefix_ + "." + it.key(), "unknown parameter");
        }
    }
}

//---------------------------------------------------------------------------//
// Experiments
//---------------------------------------------------------------------------//

namespace {

using io::Cell;
using io::CsvTable;

constexpr int kMaxReplicas = 10'000'000;

void append(std::vector<Cell>& row, const EstimateWithCI& e)
{
    row.emplace_back(e.estimate);
    row.emplace_back(e.stderr_);
    row.emplace_back(e.ci_low);
    row.emplace_back(e.ci_high);
}

std::vector<std::string> with_ci(std::vector<std::string> head, const std::string& name)
{
    head.push_back(name);
    head.push_back(name + "_stderr");
    head.push_back(name + "_ci_low");
    head.push_back(name + "_ci_high");
    return head;
}

Json to_json(const EstimateWithCI& e)
{
    return Json{{"estimate", e.estimate}, {"stderr", e.stderr_},     {"ci_low", e.ci_low},
                {"ci_high", e.ci_high},   {"replicas", e.replicas},  {"degenerate", e.degenerate}};
}

Assertion check(std::string name, bool passed, std::string detail, bool hard = true)
{
    return Assertion{std::move(name), hard, passed, std::move(detail)};
}

//--- noise ----------------------------------------------------------------//

ExperimentRunner prepare_corr_decay(Params& prm)
{
    double p = prm.probability("p", 0.5);
    int n = prm.integer("n", 64, 1, 2000);
    auto ts = prm.reals("ts", {0.0, 0.25, 1.0, 4.0}, 0.0, 1e6);
    NoiseKind kind = parse_noise_kind(prm.text("noise", "bit", {"bit", "site"}));
    int replicas = prm.integer("replicas", 400, 30, kMaxReplicas);
    return [=](const RunContext& ctx) {
        auto res = corr_decay(p, n, ts, kind, replicas, ctx.seed, ctx.threads);
        ExperimentOutput out;
        std::vector<std::string> h = with_ci({"t"}, "correlation");
        h.push_back("degenerate");
        CsvTable table("correlation", h);
        for (std::size_t k = 0; k < ts.size(); ++k) {
            std::vector<Cell> row{ts[k]};
            append(row, res.corr[k]);
            row.emplace_back(res.corr[k].degenerate);
            table.add_row(std::move(row));
            out.summary["correlation"].push_back(Json{{"t", ts[k]}, {"value", to_json(res.corr[k])}});
            if (ts[k] == 0.0) {
                out.assertions.push_back(check("zero_clock_correlation_is_one",
                                               res.corr[k].estimate == 1.0,
                                               "corr = " + io::format_number(res.corr[k].estimate)));
            }
        }
        std::vector<std::string> rh{"replica", "T_base"};
        for (std::size_t k = 0; k < ts.size(); ++k) {
            rh.push_back("T_noisy_" + std::to_string(k));
        }
        CsvTable per("replicas", rh);
        for (std::size_t r = 0; r < res.base_times.size(); ++r) {
            std::vector<Cell> row{std::int64_t(r), res.base_times[r]};
            for (std::size_t k = 0; k < ts.size(); ++k) {
                row.emplace_back(res.noisy_times[k][r]);
            }
            per.add_row(std::move(row));
        }
        // Ordered comparison over positive clocks.
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            if (ts[k] > 0.0) {
                idx.push_back(k);
            }
        }
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return ts[a] < ts[b]; });
        bool ordered = true;
        for (std::size_t a = 1; a < idx.size(); ++a) {
            const auto& prev = res.corr[idx[a - 1]];
            const auto& cur = res.corr[idx[a]];
            ordered = ordered && cur.estimate < prev.estimate && cur.ci_high < prev.ci_low;
        }
        if (idx.size() >= 2) {
            out.assertions.push_back(check("decreasing_with_separated_ci", ordered,
                                           "positive clocks in increasing order", false));
        }
        out.summary["p"] = p;
        out.summary["n"] = n;
        out.summary["noise"] = to_string(kind);
        out.tables.push_back(std::move(table));
        out.tables.push_back(std::move(per));
        return out;
    };
}

ExperimentRunner prepare_noise_compare(Params& prm)
{
    double p = prm.probability("p", 0.5);
    int n = prm.integer("n", 64, 2, 2000);
    double t = prm.real("t", 0.1, 0.0, 1e3);
    int replicas = prm.integer("replicas", 400, 30, kMaxReplicas);
    int resamples = prm.integer("resamples", kBootstrapResamples, 10, 1'000'000);
    return [=](const RunContext& ctx) {
        auto res = noise_comparison(p, n, t, replicas, ctx.seed, ctx.threads, resamples);
        ExperimentOutput out;
        CsvTable est("estimates", with_ci({"quantity"}, "value"));
        auto add = [&](const char* name, const EstimateWithCI& e) {
            std::vector<Cell> row{name};
            append(row, e);
            est.add_row(std::move(row));
            out.summary[name] = to_json(e);
        };
        add("corr_bit_t", res.corr_bit_t);
        add("corr_site_Mt", res.corr_site_Mt);
        add("difference", res.difference);
        CsvTable cov("covariances", {"quantity", "value"});
        cov.add_row({"cap", res.cap});
        cov.add_row({"var_T", res.var_T});
        cov.add_row({"cov_bit", res.cov_bit});
        cov.add_row({"cov_bit_capped", res.cov_bit_capped});
        cov.add_row({"cov_site", res.cov_site});
        cov.add_row({"cov_site_capped", res.cov_site_capped});
        cov.add_row({"capped_gap_relative", res.capped_gap_relative});
        out.summary["cap"] = res.cap;
        out.summary["capped_gap_relative"] = res.capped_gap_relative;
        out.assertions.push_back(
            check("site_noise_at_least_as_destructive",
                  res.corr_site_Mt.estimate <= res.corr_bit_t.estimate + 2.0 * res.difference.stderr_,
                  "difference = " + io::format_number(res.difference.estimate), false));
        out.assertions.push_back(check("capping_gap_below_5_percent", res.capped_gap_relative <= 0.05,
                                       "gap = " + io::format_number(res.capped_gap_relative), false));
        out.tables.push_back(std::move(est));
        out.tables.push_back(std::move(cov));
        return out;
    };
}

//--- scaling --------------------------------------------------------------//

ExperimentOutput exponent_output(const ExponentFit& fit, const std::string& statistic_name,
                                 double p, bool with_shape)
{
    ExperimentOutput out;
    std::vector<std::string> h{"n", statistic_name, "replicas"};
    if (with_shape) {
        h.push_back("mean_over_n");
        h.push_back("shape_value");
    }
    CsvTable scales("scales", h);
    CsvTable per("per_replica", {"n", "replica", "value"});
    for (std::size_t s = 0; s < fit.scales.size(); ++s) {
        std::vector<Cell> row{fit.scales[s], fit.statistic[s], std::int64_t(fit.samples[s].size())};
        if (with_shape) {
            row.emplace_back(mean(fit.samples[s]) / double(fit.scales[s]));
            row.emplace_back(shape_function(p, 1.0, 1.0));
        }
        scales.add_row(std::move(row));
        for (std::size_t r = 0; r < fit.samples[s].size(); ++r) {
            per.add_row({fit.scales[s], std::int64_t(r), fit.samples[s][r]});
        }
    }
    CsvTable f("fit", {"slope", "intercept", "slope_ci_low", "slope_ci_high"});
    f.add_row({fit.slope, fit.intercept, fit.slope_ci_low, fit.slope_ci_high});
    const double target = 2.0 / 3.0;
    const double half = 0.5 * (fit.slope_ci_high - fit.slope_ci_low);
    out.assertions.push_back(check("slope_ci_contains_two_thirds",
                                   fit.slope_ci_low <= target && target <= fit.slope_ci_high,
                                   "CI [" + io::format_number(fit.slope_ci_low) + ", "
                                       + io::format_number(fit.slope_ci_high) + "]",
                                   false));
    out.assertions.push_back(check("slope_ci_half_width_at_most_0.15", half <= 0.15,
                                   "half width " + io::format_number(half), false));
    out.summary["slope"] = fit.slope;
    out.summary["slope_ci"] = {fit.slope_ci_low, fit.slope_ci_high};
    out.summary["residuals"] = fit.residuals;
    out.tables.push_back(std::move(scales));
    out.tables.push_back(std::move(f));
    out.tables.push_back(std::move(per));
    return out;
}

ExperimentRunner prepare_variance_scaling(Params& prm)
{
    double p = prm.probability("p", 0.5);
    auto ns = prm.integers("n_list", {32, 64, 128, 256}, 2, 4000);
    int replicas = prm.integer("replicas", 400, 2, kMaxReplicas);
    int resamples = prm.integer("resamples", kBootstrapResamples, 10, 1'000'000);
    return [=](const RunContext& ctx) {
        return exponent_output(variance_scaling(p, ns, replicas, ctx.seed, ctx.threads, resamples),
                               "variance", p, true);
    };
}

ExperimentRunner prepare_transversal(Params& prm)
{
    double p = prm.probability("p", 0.5);
    auto ns = prm.integers("n_list", {32, 64, 128, 256}, 2, 2000);
    int replicas = prm.integer("replicas", 400, 2, kMaxReplicas);
    int resamples = prm.integer("resamples", kBootstrapResamples, 10, 1'000'000);
    return [=](const RunContext& ctx) {
        return exponent_output(transversal_exponent(p, ns, replicas, ctx.seed, ctx.threads, resamples),
                               "median_deviation", p, false);
    };
}

ExperimentRunner prepare_envelope(Params& prm)
{
    double p = prm.probability("p", 0.5);
    int n = prm.integer("n", 128, 1, 2000);
    double alpha = prm.real("alpha", 0.75, 0.0, 1.0);
    auto ells = prm.integers("ells", {2, 4, 8}, 0, 1'000'000);
    int replicas = prm.integer("replicas", 200, 1, kMaxReplicas);
    return [=](const RunContext& ctx) {
        auto res = envelope_containment(p, n, alpha, ells, replicas, ctx.seed, ctx.threads);
        ExperimentOutput out;
        CsvTable t("containment", with_ci({"ell"}, "probability"));
        bool monotone = true;
        for (std::size_t k = 0; k < ells.size(); ++k) {
            std::vector<Cell> row{ells[k]};
            append(row, res.containment[k]);
            t.add_row(std::move(row));
            for (std::size_t j = 0; j < ells.size(); ++j) {
                if (ells[j] < ells[k] && res.containment[j].estimate > res.containment[k].estimate) {
                    monotone = false;
                }
            }
        }
        out.assertions.push_back(check("containment_nondecreasing_in_ell", monotone, ""));
        out.tables.push_back(std::move(t));
        return out;
    };
}

ExperimentRunner prepare_heatmap(Params& prm)
{
    double p = prm.probability("p", 0.5);
    int n = prm.integer("n", 64, 1, 2000);
    int replicas = prm.integer("replicas", 200, 1, kMaxReplicas);
    auto s_values = prm.reals("s_values", {0.0, 0.25, 0.5, 1.0}, 0.0, 1e3);
    return [=](const RunContext& ctx) {
        auto h = geodesic_heatmap(p, n, replicas, ctx.seed, ctx.threads);
        ExperimentOutput out;
        CsvTable map("heatmap", {"x1", "x2", "count", "frequency"});
        for (int y = 0; y <= n; ++y) {
            for (int x = 0; x <= n; ++x) {
                std::int64_t c = h.visit_count[Coord{x, y}];
                map.add_row({x, y, c, double(c) / double(replicas)});
            }
        }
        CsvTable off("off_diagonal", with_ci({"s", "x1", "x2"}, "frequency"));
        for (const auto& pt : off_diagonal_profile(h, s_values)) {
            std::vector<Cell> row{pt.s, pt.v.x1, pt.v.x2};
            append(row, pt.frequency);
            off.add_row(std::move(row));
        }
        bool endpoints = h.visit_count[Coord{0, 0}] == replicas && h.visit_count[Coord{n, n}] == replicas;
        out.assertions.push_back(check("endpoints_always_visited", endpoints, ""));
        if (n % 2 == 0 && n >= 4) {
            out.summary["scaled_diagonal_frequency"] = scaled_diagonal_frequency(h);
        }
        out.summary["centre_frequency"] = to_json(h.frequency(Coord{n / 2, n / 2}));
        out.summary["corner_frequency"] = to_json(h.frequency(Coord{n, 0}));
        out.tables.push_back(std::move(map));
        out.tables.push_back(std::move(off));
        return out;
    };
}

//--- stationary -----------------------------------------------------------//

struct IdentityCounts {
    std::int64_t sites = 0;
    std::int64_t domination_failures = 0;
    std::int64_t negative_increments = 0;
    std::int64_t triples = 0;
    std::int64_t additivity_failures = 0;
    std::int64_t alternative_dp_failures = 0;
};

Coord random_point(std::uint64_t seed, std::uint64_t& counter, Coord lo, Coord hi)
{
    auto pick = [&](int a, int b) {
        std::uint64_t r = random_bits(plain_key(seed, counter++, StreamTag::Generic));
        return a + int(r % std::uint64_t(b - a + 1));
    };
    return Coord{pick(lo.x1, hi.x1), pick(lo.x2, hi.x2)};
}

IdentityCounts stationary_identities(const StationaryField& sf, int triples, std::uint64_t seed)
{
    IdentityCounts c;
    const Rect r = sf.extent();
    for (int y = r.lo.x2 + 1; y <= r.hi.x2; ++y) {
        for (int x = r.lo.x1 + 1; x <= r.hi.x1; ++x) {
            Coord z{x, y};
            ++c.sites;
            auto h = sf.omega_h(z);
            auto v = sf.omega_v(z);
            c.negative_increments += (h < 0) + (v < 0);
            c.domination_failures += sf.bulk_weight(z) != std::min(h, v);
        }
    }
    std::uint64_t counter = 0;
    for (int k = 0; k < triples; ++k) {
        Coord x = random_point(seed, counter, r.lo, r.hi);
        Coord y = random_point(seed, counter, x, r.hi);
        Coord z = random_point(seed, counter, y, r.hi);
        ++c.triples;
        c.additivity_failures += sf.travel_time(x, z) != sf.travel_time(x, y) + sf.travel_time(y, z);
        WeightGrid alt = sf.alternative_weights(x, z);
        c.alternative_dp_failures += travel_time(alt, x, z) != sf.travel_time(x, z);
    }
    return c;
}

ExperimentRunner prepare_stationary_checks(Params& prm)
{
    auto ps = prm.reals("p", {0.3, 0.5, 0.7}, 1e-6, 1.0 - 1e-6);
    auto lambdas = prm.reals("lambdas", {0.25, 0.5, 0.75}, 1e-6, 1.0 - 1e-6);
    int size = prm.integer("size", 200, 2, 4000);
    int triples = prm.integer("triples", 100, 0, 1'000'000);
    int gof_samples = prm.integer("gof_samples", 100'000, 100, 10'000'000);
    int gof_depth = prm.integer("gof_depth", 8, 1, 1000);
    int customers = prm.integer("customers", 100'000, 10, 100'000'000);
    int burn_in = prm.integer("burn_in", 10'000, 0, 100'000'000);
    double gap = prm.real("lambda_gap", 0.2, 1e-6, 0.99);
    if (burn_in >= customers) {
        prm.fail("burn_in", "must be smaller than customers");
    }
    return [=](const RunContext& ctx) {
        ExperimentOutput out;
        CsvTable ids("identities", {"p", "lambda", "sites", "domination_failures", "negative_increments",
                                    "triples", "additivity_failures", "alternative_dp_failures"});
        CsvTable gof("goodness_of_fit", {"p", "lambda", "sequence", "parameter", "samples", "statistic",
                                         "dof", "p_value"});
        CsvTable coup("coupling", {"p", "lambda", "lambda_prime", "customers", "burn_in",
                                   "monotonicity_failures", "half_mean_z", "stationarity_warning"});
        IdentityCounts total;
        std::int64_t mono_failures = 0;
        bool gof_ok = true;
        std::uint64_t job = 0;
        for (double p : ps) {
            for (double lambda : lambdas) {
                const std::uint64_t js = derive_seed(ctx.seed, job++, StreamTag::Generic);
                const LambdaParams lp = lambda_params(p, lambda);
                auto sf = build_stationary(p, lambda, Coord{0, 0}, Coord{size, size}, js);
                auto c = stationary_identities(sf, triples, derive_seed(js, 1, StreamTag::Generic));
                ids.add_row({p, lambda, c.sites, c.domination_failures, c.negative_increments, c.triples,
                             c.additivity_failures, c.alternative_dp_failures});
                total.domination_failures += c.domination_failures;
                total.negative_increments += c.negative_increments;
                total.additivity_failures += c.additivity_failures;
                total.alternative_dp_failures += c.alternative_dp_failures;

                // Increments along the far edge of a long thin field are i.i.d.
                auto wide = build_stationary(p, lambda, Coord{0, 0}, Coord{gof_samples, gof_depth},
                                             derive_seed(js, 2, StreamTag::Generic));
                auto tall = build_stationary(p, lambda, Coord{0, 0}, Coord{gof_depth, gof_samples},
                                             derive_seed(js, 3, StreamTag::Generic));
                std::vector<std::int64_t> hs, vs;
                for (int x = 1; x <= gof_samples; ++x) {
                    hs.push_back(wide.omega_h(Coord{x, gof_depth}));
                }
                for (int y = 1; y <= gof_samples; ++y) {
                    vs.push_back(tall.omega_v(Coord{gof_depth, y}));
                }
                auto gh = chi_square_geometric(hs, lp.pH);
                auto gv = chi_square_geometric(vs, lp.pV);
                gof.add_row({p, lambda, "omega_h", lp.pH, std::int64_t(hs.size()), gh.statistic, gh.dof,
                             gh.p_value});
                gof.add_row({p, lambda, "omega_v", lp.pV, std::int64_t(vs.size()), gv.statistic, gv.dof,
                             gv.p_value});

                double lambda_prime = std::min(lambda + gap, 1.0 - 1e-6);
                auto cc = couple_columns(p, lambda, lambda_prime, customers, burn_in,
                                         derive_seed(js, 4, StreamTag::Generic));
                std::int64_t fails = 0;
                for (std::size_t j = 0; j < cc.service.size(); ++j) {
                    fails += cc.departures[j] < cc.service[j];
                }
                mono_failures += fails;
                auto steady = cc.steady_departures();
                const double pv_prime = lambda_params(p, lambda_prime).pV;
                auto gd = chi_square_geometric(steady, pv_prime);
                gof.add_row({p, lambda_prime, "departures", pv_prime, std::int64_t(steady.size()),
                             gd.statistic, gd.dof, gd.p_value});
                coup.add_row({p, lambda, lambda_prime, customers, burn_in, fails, cc.half_mean_z,
                              cc.stationarity_warning});
                gof_ok = gof_ok && gh.p_value >= 1e-3 && gv.p_value >= 1e-3 && gd.p_value >= 1e-3;
            }
        }
        out.assertions.push_back(check("domination", total.domination_failures == 0,
                                       std::to_string(total.domination_failures) + " failures"));
        out.assertions.push_back(check("nonnegative_increments", total.negative_increments == 0,
                                       std::to_string(total.negative_increments) + " failures"));
        out.assertions.push_back(check("additivity", total.additivity_failures == 0,
                                       std::to_string(total.additivity_failures) + " failures"));
        out.assertions.push_back(check("g_difference_equals_alternative_dp",
                                       total.alternative_dp_failures == 0,
                                       std::to_string(total.alternative_dp_failures) + " failures"));
        out.assertions.push_back(check("coupled_column_monotonicity", mono_failures == 0,
                                       std::to_string(mono_failures) + " failures"));
        out.assertions.push_back(check("geometric_marginals_at_1e-3", gof_ok, "", false));
        out.tables.push_back(std::move(ids));
        out.tables.push_back(std::move(gof));
        out.tables.push_back(std::move(coup));
        return out;
    };
}

//--- random walk ----------------------------------------------------------//

std::vector<StepDistribution> default_step_distributions()
{
    return {
        make_step_distribution("symmetric_pm1", {-1, 1}, {0.5, 0.5}),
        make_step_distribution("drifted_pm1", {-1, 1}, {0.475, 0.525}),
        make_step_distribution("lazy_two_jump", {-1, 0, 2}, {0.5, 0.25, 0.25}),
    };
}

ExperimentRunner prepare_rw_bound(Params& prm)
{
    auto steps = prm.integers("steps", {100, 1000, 10000}, 1, 10'000'000);
    int replicas = prm.integer("replicas", 2000, 1, kMaxReplicas);
    std::vector<StepDistribution> dists;
    const Json& spec = prm.raw("distributions");
    if (spec.is_null()) {
        dists = default_step_distributions();
    } else {
        if (!spec.is_array() || spec.empty()) {
            prm.fail("distributions", "expected a nonempty array of {name, values, probs}");
        }
        for (std::size_t k = 0; k < spec.size(); ++k) {
            const Json& d = spec[k];
            try {
                dists.push_back(make_step_distribution(d.at("name").get<std::string>(),
                                                       d.at("values").get<std::vector<int>>(),
                                                       d.at("probs").get<std::vector<double>>()));
            } catch (const DomainError& e) {
                prm.fail("distributions[" + std::to_string(k) + "]", e.what());
            } catch (const Json::exception&) {
                prm.fail("distributions[" + std::to_string(k) + "]",
                         "expected {name: string, values: [int], probs: [number]}");
            }
        }
    }
    return [=](const RunContext& ctx) {
        ExperimentOutput out;
        auto h = with_ci({"distribution", "steps", "mean", "stddev", "delta"}, "q_hat");
        h.push_back("bound");
        h.push_back("exact");
        CsvTable t("walks", h);
        bool all_below = true;
        std::uint64_t job = 0;
        for (const auto& d : dists) {
            for (int n : steps) {
                auto r = rw_nonneg_bound(d, n, replicas, derive_seed(ctx.seed, job++, StreamTag::Generic),
                                         ctx.threads);
                std::vector<Cell> row{d.name, n, d.mean(), d.stddev(), d.prob_at_least_one()};
                append(row, r.q_hat);
                row.emplace_back(r.bound);
                row.emplace_back(r.exact ? io::format_number(*r.exact) : std::string());
                t.add_row(std::move(row));
                all_below = all_below && r.q_hat.estimate <= r.bound;
            }
        }
        CsvTable exact("exact_symmetric", {"steps", "q"});
        for (int n : {2, 4, 6, 8}) {
            exact.add_row({n, rw_exact_pm1(0.5, n)});
        }
        out.assertions.push_back(check("exact_q2_is_one_half", rw_exact_pm1(0.5, 2) == 0.5, ""));
        out.assertions.push_back(check("exact_q4_is_three_eighths", rw_exact_pm1(0.5, 4) == 0.375, ""));
        out.assertions.push_back(check("estimates_below_bound", all_below, ""));
        out.tables.push_back(std::move(t));
        out.tables.push_back(std::move(exact));
        return out;
    };
}

//--- sandwich and influence -----------------------------------------------//

ExperimentRunner prepare_sandwich(Params& prm)
{
    double p = prm.probability("p", 0.5);
    auto v = prm.integers("v", {200, 200}, 0, 100'000);
    if (v.size() != 2) {
        prm.fail("v", "expected [v1, v2]");
    }
    auto ss = prm.reals("s_values", {0.1, 0.2, 0.4}, 1e-9, 1e6);
    int n = prm.integer("n", -1, -1, 100'000);
    int replicas = prm.integer("replicas", 100, 2, kMaxReplicas);
    return [=](const RunContext& ctx) {
        ExperimentOutput out;
        std::vector<std::string> h{"s", "k", "lambda_minus", "lambda_plus", "hat_lambda_minus",
                                   "hat_lambda_plus"};
        h = with_ci(h, "freq_delta");
        h = with_ci(h, "freq_delta_prime");
        h = with_ci(h, "freq_both");
        h = with_ci(h, "y_mean");
        h.push_back("y_mean_exact");
        h = with_ci(h, "z_mean");
        h.push_back("z_mean_exact");
        h.push_back("reflection_mismatches");
        CsvTable t("sandwich", h);
        std::int64_t mismatches = 0;
        for (std::size_t k = 0; k < ss.size(); ++k) {
            auto r = sandwich_experiment(p, Coord{v[0], v[1]}, ss[k], replicas,
                                         derive_seed(ctx.seed, k, StreamTag::Generic), n, ctx.threads);
            std::vector<Cell> row{ss[k], r.k, r.lambda_minus, r.lambda_plus, r.hat_lambda_minus,
                                  r.hat_lambda_plus};
            append(row, r.freq_delta);
            append(row, r.freq_delta_prime);
            append(row, r.freq_both);
            append(row, r.y_mean);
            row.emplace_back(r.y_mean_exact);
            append(row, r.z_mean);
            row.emplace_back(r.z_mean_exact);
            row.emplace_back(r.reflection_mismatches);
            t.add_row(std::move(row));
            mismatches += r.reflection_mismatches;
        }
        out.assertions.push_back(check("reflected_increments_match", mismatches == 0,
                                       std::to_string(mismatches) + " mismatches"));
        out.tables.push_back(std::move(t));
        return out;
    };
}

ExperimentRunner prepare_influence_map(Params& prm)
{
    double p = prm.probability("p", 0.5);
    int n = prm.integer("n", 16, 1, kMaxInfluenceScale);
    int replicas = prm.integer("replicas", 200, 2, kMaxReplicas);
    int i_max = prm.integer("i_max", 6, 0, 64);
    return [=](const RunContext& ctx) {
        auto tab = visit_vs_influence(p, n, replicas, ctx.seed, ctx.threads, i_max);
        ExperimentOutput out;
        auto h = with_ci({"x1", "x2"}, "visit");
        h.push_back("sum_sq_influence");
        h.push_back("ratio");
        for (int i = 0; i <= i_max; ++i) {
            h.push_back("influence_bit_" + std::to_string(i));
        }
        CsvTable t("influence", h);
        for (const auto& row : tab.rows) {
            std::vector<Cell> cells{row.v.x1, row.v.x2};
            append(cells, row.visit);
            cells.emplace_back(row.sum_sq);
            cells.emplace_back(row.ratio);
            for (double x : row.influence) {
                cells.emplace_back(x);
            }
            t.add_row(std::move(cells));
        }
        out.summary["delta"] = tab.delta;
        out.summary["fitted_constant"] = tab.fitted_constant;
        out.assertions.push_back(check("ratio_at_most_5", tab.fitted_constant <= 5.0,
                                       "max ratio " + io::format_number(tab.fitted_constant), false));
        out.tables.push_back(std::move(t));
        return out;
    };
}

//--- cube -----------------------------------------------------------------//

CubeFunction generate(const std::string& kind, int m, double p, std::uint64_t seed, std::uint64_t trial)
{
    std::string k = kind;
    if (k == "mixed") {
        static const char* kinds[] = {"gaussian", "monotone", "junta"};
        k = kinds[trial % 3];
    }
    if (k == "monotone") {
        return random_monotone_function(m, p, seed);
    }
    if (k == "junta") {
        return random_junta(m, p, std::max(1, m / 2), seed);
    }
    return random_gaussian_function(m, p, seed);
}

ExperimentRunner prepare_bks(Params& prm)
{
    int m = prm.integer("m", 8, 1, 16);
    auto ps = prm.reals("p", {0.3, 0.5, 0.7}, 1e-6, 1.0 - 1e-6);
    auto ts = prm.reals("t", {0.1, 1.0, 3.0}, 1e-9, 1e3);
    int trials = prm.integer("trials", 200, 1, 10'000'000);
    std::string kind = prm.text("functions", "mixed", {"mixed", "gaussian", "monotone", "junta"});
    return [=](const RunContext& ctx) {
        ExperimentOutput out;
        CsvTable t("bks", {"trial", "m", "p", "t", "lhs", "rhs_stated", "rhs_proof", "margin_stated",
                           "margin_proof", "stated_holds", "proof_holds"});
        auto records = parallel_map<std::optional<BksRecord>>(
            std::size_t(trials), ctx.threads, [&](std::size_t k) -> std::optional<BksRecord> {
                double p = ps[k % ps.size()];
                double tt = ts[(k / ps.size()) % ts.size()];
                auto f = generate(kind, m, p, derive_seed(ctx.seed, 2 * k, StreamTag::Generic), k);
                auto g = generate(kind, m, p, derive_seed(ctx.seed, 2 * k + 1, StreamTag::Generic), k);
                if (!(variance(f) > 0.0 && variance(g) > 0.0)) {
                    return std::nullopt;
                }
                return verify_bks(f, g, tt);
            });
        std::int64_t proof_fail = 0, stated_fail = 0, skipped = 0;
        for (std::size_t k = 0; k < records.size(); ++k) {
            if (!records[k]) {
                ++skipped;
                continue;
            }
            const auto& r = *records[k];
            t.add_row({std::int64_t(k), m, ps[k % ps.size()], ts[(k / ps.size()) % ts.size()], r.lhs,
                       r.rhs_stated, r.rhs_proof, r.rhs_stated - r.lhs, r.rhs_proof - r.lhs,
                       r.stated_holds, r.proof_holds});
            proof_fail += !r.proof_holds;
            stated_fail += !r.stated_holds;
        }
        out.summary["skipped_zero_variance"] = skipped;
        out.summary["stated_form_violations"] = stated_fail;
        out.assertions.push_back(check("proof_form_holds", proof_fail == 0,
                                       std::to_string(proof_fail) + " violations"));
        out.assertions.push_back(check("stated_form_holds", stated_fail == 0,
                                       std::to_string(stated_fail) + " violations", false));
        out.tables.push_back(std::move(t));
        return out;
    };
}

ExperimentRunner prepare_lemma_suite(Params& prm)
{
    int m = prm.integer("m", 8, 1, 14);
    auto ps = prm.reals("p", {0.3, 0.5, 0.7}, 1e-6, 1.0 - 1e-6);
    auto ts = prm.reals("t", {0.1, 1.0, 3.0}, 1e-9, 1e3);
    int functions = prm.integer("functions", 200, 1, 1'000'000);
    return [=](const RunContext& ctx) {
        ExperimentOutput out;
        struct Agg {
            std::int64_t evaluations = 0;
            std::int64_t failures = 0;
            double worst = -std::numeric_limits<double>::infinity();
        };
        std::map<std::string, Agg> agg;
        std::vector<std::string> order;
        for (double p : ps) {
            for (double t : ts) {
                auto reports = parallel_map<LemmaReport>(std::size_t(functions), ctx.threads, [&](std::size_t k) {
                    std::uint64_t s = derive_seed(ctx.seed, k, StreamTag::Generic);
                    auto f = random_gaussian_function(m, p, derive_seed(s, 0, StreamTag::Generic));
                    auto g = random_gaussian_function(m, p, derive_seed(s, 1, StreamTag::Generic));
                    return verify_lemma_suite(f, g, t, int(k % std::size_t(m)));
                });
                for (const auto& rep : reports) {
                    for (const auto& c : rep.checks) {
                        if (!agg.count(c.name)) {
                            order.push_back(c.name);
                        }
                        auto& a = agg[c.name];
                        ++a.evaluations;
                        a.failures += !c.passed;
                        a.worst = std::max(a.worst, c.residual);
                    }
                }
            }
        }
        CsvTable tab("checks", {"check", "evaluations", "failures", "worst_residual"});
        std::int64_t failures = 0;
        for (const auto& name : order) {
            const auto& a = agg[name];
            tab.add_row({name, a.evaluations, a.failures, a.worst});
            failures += a.failures;
        }
        out.assertions.push_back(check("all_lemma_checks_pass", failures == 0,
                                       std::to_string(failures) + " failures"));
        out.tables.push_back(std::move(tab));
        return out;
    };
}

ExperimentRunner prepare_lsi(Params& prm)
{
    double p = prm.probability("p", 0.5);
    auto us = prm.reals("u_values", {0.1, 0.01, 0.001, 0.0001}, 1e-12, 1.0);
    for (double u : us) {
        if (!(u < p)) {
            prm.fail("u_values", "every u must be below p");
        }
    }
    return [=](const RunContext&) {
        ExperimentOutput out;
        CsvTable t("lsi", {"u", "entropy", "variance", "ratio", "ratio_times_u"});
        for (double u : us) {
            auto parts = geometric_lsi_parts(p, u);
            t.add_row({u, parts.entropy, parts.variance, parts.ratio, parts.ratio * u});
        }
        out.summary["small_u_limit_of_ratio_times_u"] = -std::log1p(-p);
        out.tables.push_back(std::move(t));
        return out;
    };
}

ExperimentRunner prepare_cov_mono(Params& prm)
{
    int functions = prm.integer("functions", 200, 1, 1'000'000);
    int vars = prm.integer("vars", 3, 1, 4);
    int support = prm.integer("support", 3, 1, 3);
    int max_weight = prm.integer("max_weight", 10, 1, 100);
    int max_value = prm.integer("max_value", 5, 0, 1000);
    return [=](const RunContext& ctx) {
        ExperimentOutput out;
        CsvTable t("pairs", {"function", "small_mask", "large_mask", "scale", "cov_small", "cov_large",
                             "holds"});
        std::int64_t failures = 0;
        const std::uint32_t all = (1u << vars) - 1u;
        for (int k = 0; k < functions; ++k) {
            const std::uint64_t s = derive_seed(ctx.seed, std::uint64_t(k), StreamTag::Generic);
            std::uint64_t counter = 0;
            auto draw = [&](int lo, int hi) {
                std::uint64_t r = random_bits(plain_key(s, counter++, StreamTag::Generic));
                return lo + std::int64_t(r % std::uint64_t(hi - lo + 1));
            };
            CovMonoSpec spec;
            spec.vars = vars;
            for (int i = 0; i < support; ++i) {
                spec.value_weights.push_back(draw(1, max_weight));
            }
            std::size_t outcomes = 1;
            for (int i = 0; i < vars; ++i) {
                outcomes *= std::size_t(support);
            }
            for (std::size_t y = 0; y < outcomes; ++y) {
                spec.f.push_back(draw(-max_value, max_value));
            }
            for (std::uint32_t large = 0; large <= all; ++large) {
                for (std::uint32_t small = large;; small = (small - 1) & large) {
                    spec.small = small;
                    spec.large = large;
                    auto r = covariance_monotonicity_bruteforce(spec);
                    t.add_row({k, std::int64_t(small), std::int64_t(large), r.scale, r.cov_small,
                               r.cov_large, r.holds});
                    failures += !r.holds;
                    if (small == 0) {
                        break;
                    }
                }
            }
        }
        out.assertions.push_back(check("covariance_monotone_in_resampled_set", failures == 0,
                                       std::to_string(failures) + " failures"));
        out.tables.push_back(std::move(t));
        return out;
    };
}

//--- increment decomposition ----------------------------------------------//

ExperimentRunner prepare_increment_decomposition(Params& prm)
{
    double p = prm.probability("p", 0.5);
    int n = prm.integer("n", 8, 1, 500);
    int instances = prm.integer("instances", 500, 1, kMaxReplicas);
    return [=](const RunContext& ctx) {
        ExperimentOutput out;
        CsvTable t("instances", {"instance", "v1", "v2", "all_d_nonnegative", "edge_on_geodesic",
                                 "both_vertices_on_geodesics"});
        std::int64_t edge_mismatch = 0, union_mismatch = 0;
        const Rect region{{0, 0}, {n, n}};
        for (int k = 0; k < instances; ++k) {
            const std::uint64_t s = replica_seed(ctx.seed, std::size_t(k));
            std::uint64_t counter = 0;
            Coord v = random_point(s, counter, Coord{0, 0}, Coord{n - 1, n});
            WeightConfig cfg(p, s, region);
            WeightGrid w = cfg.materialize();
            auto prof = increment_profile(w, v, n);
            TravelTable table(w, region.lo, region.hi);
            bool decomposition = prof.exits_at_origin();
            bool edge = prof.T_to_axis(0) + prof.T_from_axis(0) == table.value();
            bool both = table.on_geodesic(v) && table.on_geodesic(v + e1);
            edge_mismatch += decomposition != edge;
            union_mismatch += decomposition != both;
            t.add_row({k, v.x1, v.x2, decomposition, edge, both});
        }
        out.summary["vertex_union_reading_mismatches"] = union_mismatch;
        out.assertions.push_back(check("nonnegative_d_iff_edge_on_a_geodesic", edge_mismatch == 0,
                                       std::to_string(edge_mismatch) + " mismatches"));
        out.tables.push_back(std::move(t));
        return out;
    };
}

//--- dumps ----------------------------------------------------------------//

ExperimentRunner prepare_dump_field(Params& prm)
{
    double p = prm.probability("p", 0.5);
    int n = prm.integer("n", 16, 0, 4000);
    std::string noise = prm.text("noise", "none", {"none", "bit", "site", "coupled"});
    double t = prm.real("t", 0.0, 0.0, 1e6);
    return [=](const RunContext& ctx) {
        ExperimentOutput out;
        const Rect region{{0, 0}, {n, n}};
        WeightConfig cfg(p, ctx.seed, region);
        std::vector<std::string> h{"x1", "x2", "omega"};
        std::optional<NoisyPair> pair;
        if (noise != "none") {
            pair.emplace(cfg, t, parse_noise_kind(noise), coupled_cap(std::max(n, 2), p));
            h.push_back("omega_noisy");
        }
        CsvTable tab("field", h);
        for (int y = 0; y <= n; ++y) {
            for (int x = 0; x <= n; ++x) {
                std::vector<Cell> row{x, y, cfg.weight_at(Coord{x, y})};
                if (pair) {
                    row.emplace_back(pair->noisy_weight_at(Coord{x, y}));
                }
                tab.add_row(std::move(row));
            }
        }
        out.tables.push_back(std::move(tab));
        return out;
    };
}

Json path_json(const std::vector<Coord>& path)
{
    Json j = Json::array();
    for (Coord c : path) {
        j.push_back({c.x1, c.x2});
    }
    return j;
}

ExperimentRunner prepare_dump_geodesic(Params& prm)
{
    double p = prm.probability("p", 0.5);
    int n = prm.integer("n", 16, 0, 4000);
    return [=](const RunContext& ctx) {
        ExperimentOutput out;
        const Rect region{{0, 0}, {n, n}};
        WeightGrid w = WeightConfig(p, ctx.seed, region).materialize();
        auto report = geodesic_report(w, region.lo, region.hi);
        CsvTable members("members", {"x1", "x2"});
        for (int y = 0; y <= n; ++y) {
            for (int x = 0; x <= n; ++x) {
                if (report.member_mask[Coord{x, y}]) {
                    members.add_row({x, y});
                }
            }
        }
        out.tables.push_back(std::move(members));
        out.summary["travel_time"] = report.value;
        out.summary["upmost"] = path_json(report.upmost);
        out.summary["downmost"] = path_json(report.downmost);
        return out;
    };
}

ExperimentRunner prepare_dump_stationary(Params& prm)
{
    double p = prm.probability("p", 0.5);
    double lambda = prm.real("lambda", 0.5, 0.0, 1.0);
    int n = prm.integer("n", 16, 0, 4000);
    return [=](const RunContext& ctx) {
        ExperimentOutput out;
        auto sf = build_stationary(p, lambda, Coord{0, 0}, Coord{n, n}, ctx.seed);
        CsvTable t("stationary", {"x1", "x2", "omega", "omegaH", "omegaV", "G"});
        for (int y = 0; y <= n; ++y) {
            for (int x = 0; x <= n; ++x) {
                Coord c{x, y};
                std::string omega = x > 0 && y > 0 ? std::to_string(sf.bulk_weight(c)) : "";
                std::string h = x > 0 ? std::to_string(sf.omega_h(c)) : "";
                std::string v = y > 0 ? std::to_string(sf.omega_v(c)) : "";
                t.add_row({x, y, omega, h, v, sf.G(c)});
            }
        }
        const auto& lp = sf.params();
        out.summary["q"] = lp.q;
        out.summary["pH"] = lp.pH;
        out.summary["pV"] = lp.pV;
        out.summary["qprime"] = lp.qprime;
        out.tables.push_back(std::move(t));
        return out;
    };
}

}  // namespace

const std::map<std::string, ExperimentInfo>& experiment_registry()
{
    static const std::map<std::string, ExperimentInfo> registry = [] {
        std::map<std::string, ExperimentInfo> r;
        auto add = [&](std::string name, std::string what, std::function<ExperimentRunner(Params&)> fn) {
            r[name] = ExperimentInfo{name, std::move(what), std::move(fn)};
        };
        add("corr-decay", "correlation of T_n with its noisy copy across clocks", prepare_corr_decay);
        add("noise-compare", "bit noise at t against coupled site noise at M t", prepare_noise_compare);
        add("variance-scaling", "log-log slope of Var(T_n)", prepare_variance_scaling);
        add("transversal", "log-log slope of the midpoint deviation of the upmost geodesic",
            prepare_transversal);
        add("envelope", "probability that the geodesic stays in a band around the diagonal",
            prepare_envelope);
        add("geodesic-heatmap", "visit frequencies of the geodesic set", prepare_heatmap);
        add("stationary-checks", "exact identities and marginals of the boundary model",
            prepare_stationary_checks);
        add("rw-bound", "random walk staying nonnegative against the moment bound", prepare_rw_bound);
        add("sandwich", "increments squeezed between two boundary models", prepare_sandwich);
        add("influence-map", "bit influences against geodesic visit probabilities",
            prepare_influence_map);
        add("bks-verify", "exact covariance bound on random functions of bits", prepare_bks);
        add("lemma-suite", "exact semigroup identities and inequalities", prepare_lemma_suite);
        add("lsi-ratio", "entropy to variance ratio of the geometric test functions", prepare_lsi);
        add("cov-monotonicity", "covariance under nested resampled sets, by enumeration",
            prepare_cov_mono);
        add("increment-decomposition", "sign of the axis profile against the geodesic edge at 0",
            prepare_increment_decomposition);
        add("dump-field", "weights (and a noisy copy) on a square", prepare_dump_field);
        add("dump-geodesic", "passage-time tables and extremal geodesics", prepare_dump_geodesic);
        add("dump-stationary", "boundary model increments and G", prepare_dump_stationary);
        return r;
    }();
    return registry;
}

//---------------------------------------------------------------------------//
// Runner
//---------------------------------------------------------------------------//

RunConfig parse_run_config(const Json& doc)
{
    if (!doc.is_object()) {
        throw ConfigError("config", "must be a JSON object");
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.key() != "seed" && it.key() != "output_dir" && it.key() != "experiments") {
            throw ConfigError(it.key(), "unknown top-level field");
        }
    }
    RunConfig cfg;
    if (doc.contains("seed")) {
        const Json& s = doc["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
            throw ConfigError("seed", "expected a nonnegative integer");
        }
        cfg.seed = s.get<std::uint64_t>();
    }
    if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string()) {
            throw ConfigError("output_dir", "expected a string");
        }
        cfg.output_dir = doc["output_dir"].get<std::string>();
    }
    if (doc.contains("experiments")) {
        const Json& list = doc["experiments"];
        if (!list.is_array()) {
            throw ConfigError("experiments", "expected an array");
        }
        for (std::size_t k = 0; k < list.size(); ++k) {
            const std::string where = "experiments[" + std::to_string(k) + "]";
            const Json& e = list[k];
            if (!e.is_object() || !e.contains("name") || !e["name"].is_string()) {
                throw ConfigError(where + ".name", "each experiment needs a string name");
            }
            for (auto it = e.begin(); it != e.end(); ++it) {
                if (it.key() != "name" && it.key() != "params") {
                    throw ConfigError(where + "." + it.key(), "unknown field");
                }
            }
            ExperimentSpec spec;
            spec.name = e["name"].get<std::string>();
            if (e.contains("params")) {
                spec.params = e["params"];
            }
            cfg.experiments.push_back(std::move(spec));
        }
    }
    return cfg;
}

namespace {

std::string directory_name(std::size_t index, const std::string& name)
{
    std::string k = std::to_string(index + 1);
    return std::string(k.size() < 2 ? 2 - k.size() : 0, '0') + k + "-" + name;
}

}  // namespace

int run_experiments(const RunConfig& cfg, int threads, std::ostream& log)
{
    return run_experiments(cfg, threads, log, experiment_registry());
}

int run_experiments(const RunConfig& cfg, int threads, std::ostream& log,
                    const std::map<std::string, ExperimentInfo>& registry)
{
    namespace fs = std::filesystem;
    struct Prepared {
        std::string name;
        ExperimentRunner run;
        Json params;
    };
    std::vector<Prepared> jobs;
    for (std::size_t k = 0; k < cfg.experiments.size(); ++k) {
        const auto& spec = cfg.experiments[k];
        const std::string where = "experiments[" + std::to_string(k) + "]";
        auto it = registry.find(spec.name);
        if (it == registry.end()) {
            throw ConfigError(where + ".name", "unknown experiment '" + spec.name + "'");
        }
        Params prm(spec.params, where + ".params");
        ExperimentRunner run = it->second.prepare(prm);
        prm.finish();
        jobs.push_back(Prepared{spec.name, std::move(run), prm.resolved()});
    }

    const fs::path root(cfg.output_dir);
    fs::create_directories(root);
    Json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["master_seed"] = cfg.seed;
    manifest["started_at"] = io::utc_timestamp();
    Json echo;
    echo["seed"] = cfg.seed;
    echo["output_dir"] = cfg.output_dir;
    echo["experiments"] = Json::array();
    for (const auto& j : jobs) {
        echo["experiments"].push_back(Json{{"name", j.name}, {"params", j.params}});
    }
    manifest["config_echo"] = echo;
    manifest["experiments"] = Json::array();

    bool hard_failure = false;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const auto& job = jobs[k];
        const std::string dir = directory_name(k, job.name);
        log << "[" << dir << "] running\n" << std::flush;
        RunContext ctx{cfg.seed, threads};
        ExperimentOutput out = job.run(ctx);

        Json entry;
        entry["name"] = job.name;
        entry["directory"] = dir;
        entry["files"] = Json::array();
        for (const auto& table : out.tables) {
            const std::string file = table.name() + ".csv";
            io::write_atomic(root / dir / file, table.render());
            entry["files"].push_back(dir + "/" + file);
        }
        Json assertions = Json::array();
        for (const auto& a : out.assertions) {
            assertions.push_back(
                Json{{"name", a.name}, {"hard", a.hard}, {"passed", a.passed}, {"detail", a.detail}});
            log << "[" << dir << "] " << (a.passed ? "PASS" : (a.hard ? "FAIL" : "WARN")) << " "
                << a.name << (a.detail.empty() ? "" : " (" + a.detail + ")") << "\n";
            hard_failure = hard_failure || (a.hard && !a.passed);
        }
        Json summary{{"name", job.name}, {"seed", cfg.seed}, {"params", job.params},
                     {"summary", out.summary}, {"assertions", assertions}};
        io::write_atomic(root / dir / "summary.json", summary.dump(2) + "\n");
        entry["files"].push_back(dir + "/summary.json");
        entry["assertions"] = assertions;
        manifest["experiments"].push_back(std::move(entry));
    }
    manifest["finished_at"] = io::utc_timestamp();
    manifest["exit_code"] = hard_failure ? kExitAssertion : kExitOk;
    io::write_atomic(root / "manifest.json", manifest.dump(2) + "\n");
    return hard_failure ? kExitAssertion : kExitOk;
}

}  // namespace lppn
