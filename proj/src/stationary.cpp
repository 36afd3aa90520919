#include "lppn/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lppn/rng.hpp"

namespace lppn {
namespace {

void require_unit_open(double x, const char* name)
{
    if (!(x > 0.0 && x < 1.0)) {
        throw DomainError(std::string(name) + " must lie in (0,1), got " + std::to_string(x));
    }
}

std::vector<std::int64_t> boundary_row(std::uint64_t seed, Coord base, Coord step, int count,
                                       StreamTag tag, double prob)
{
    std::vector<std::int64_t> out(std::size_t(std::max(count, 0)));
    for (int i = 1; i <= count; ++i) {
        out[std::size_t(i - 1)] = geometric_inverse(site_key(seed, base + i * step, 0, tag), prob);
    }
    return out;
}

}  // namespace

double q_of_lambda(double p, double lambda)
{
    double r = std::sqrt((1.0 - p) * lambda * (1.0 - lambda));
    return (p * lambda + p * r) / (1.0 - p + p * lambda + 2.0 * r);
}

double q_derivative(double p, double lambda)
{
    double r = std::sqrt((1.0 - p) * lambda * (1.0 - lambda));
    double s = std::sqrt(lambda) + std::sqrt((1.0 - p) * (1.0 - lambda));
    return p * (1.0 - p) / (2.0 * r * s * s);
}

LambdaParams lambda_params(double p, double lambda, double clamp)
{
    require_unit_open(p, "p");
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw DomainError("lambda must lie in (0,1), got " + std::to_string(lambda));
    }
    lambda = std::clamp(lambda, clamp, 1.0 - clamp);
    LambdaParams lp;
    lp.p = p;
    lp.lambda = lambda;
    lp.q = q_of_lambda(p, lambda);
    lp.pH = lp.q;
    lp.pV = 1.0 - (1.0 - p) / (1.0 - lp.q);
    lp.qprime = q_derivative(p, lambda);
    lp.dir1 = lambda;
    lp.dir2 = 1.0 - lambda;
    return lp;
}

double shape_function(double p, double x1, double x2)
{
    require_unit_open(p, "p");
    if (x1 < 0.0 || x2 < 0.0) {
        throw DomainError("shape function needs a nonnegative direction");
    }
    return ((1.0 - p) * (x1 + x2) + 2.0 * std::sqrt((1.0 - p) * x1 * x2)) / p;
}

StationaryField::StationaryField(LambdaParams params, Coord base, WeightGrid bulk,
                                 std::vector<std::int64_t> south, std::vector<std::int64_t> west)
    : params_(params), extent_(bulk.rect()), bulk_(std::move(bulk))
{
    if (extent_.lo != base) {
        throw DomainError("bulk grid must start at the base corner");
    }
    if (south.size() != std::size_t(extent_.width() - 1)
        || west.size() != std::size_t(extent_.height() - 1)) {
        throw DomainError("boundary lengths do not match the extent");
    }
    g_ = Grid<std::int64_t>(extent_, 0);
    const Coord top = extent_.hi;
    for (int i = 1; i <= top.x1 - base.x1; ++i) {
        Coord c = base + i * e1;
        g_[c] = g_[c - e1] + south[std::size_t(i - 1)];
    }
    for (int j = 1; j <= top.x2 - base.x2; ++j) {
        Coord c = base + j * e2;
        g_[c] = g_[c - e2] + west[std::size_t(j - 1)];
    }
    for (int y = base.x2 + 1; y <= top.x2; ++y) {
        for (int x = base.x1 + 1; x <= top.x1; ++x) {
            Coord c{x, y};
            g_[c] = std::max(g_[c - e1], g_[c - e2]) + bulk_[c];
        }
    }
}

std::int64_t StationaryField::omega_h(Coord x) const
{
    if (!extent_.contains(x) || x.x1 <= extent_.lo.x1) {
        throw DomainError("omega_h undefined at " + to_string(x));
    }
    return g_[x] - g_[x - e1];
}

std::int64_t StationaryField::omega_v(Coord x) const
{
    if (!extent_.contains(x) || x.x2 <= extent_.lo.x2) {
        throw DomainError("omega_v undefined at " + to_string(x));
    }
    return g_[x] - g_[x - e2];
}

void StationaryField::check_pair(Coord x, Coord y) const
{
    if (!leq(x, y) || !extent_.contains(x) || !extent_.contains(y)) {
        throw DomainError("need base <= x <= y inside the extent, got x=" + to_string(x)
                          + " y=" + to_string(y));
    }
}

std::int64_t StationaryField::travel_time(Coord x, Coord y) const
{
    check_pair(x, y);
    return g_[y] - g_[x];
}

WeightGrid StationaryField::alternative_weights(Coord x, Coord y) const
{
    check_pair(x, y);
    return materialize(Rect{x, y}, [&](Coord c) -> std::int64_t {
        if (c == x) {
            return 0;
        }
        if (c.x2 == x.x2) {
            return omega_h(c);
        }
        if (c.x1 == x.x1) {
            return omega_v(c);
        }
        return bulk_[c];
    });
}

GeodesicReport StationaryField::geodesic(Coord x, Coord y) const
{
    WeightGrid alt = alternative_weights(x, y);
    return geodesic_report(alt, x, y);
}

StationaryField build_stationary(const WeightGrid& bulk, double p, double lambda, Coord base,
                                 Coord top, std::uint64_t boundary_seed)
{
    Rect extent = checked_rect(base, top);
    if (!bulk.rect().contains(extent)) {
        throw DomainError("bulk grid does not cover the stationary extent");
    }
    LambdaParams lp = lambda_params(p, lambda);
    WeightGrid own = materialize(extent, [&](Coord c) { return bulk[c]; });
    auto south = boundary_row(boundary_seed, base, e1, top.x1 - base.x1, StreamTag::BoundaryH, lp.pH);
    auto west = boundary_row(boundary_seed, base, e2, top.x2 - base.x2, StreamTag::BoundaryV, lp.pV);
    return StationaryField(lp, base, std::move(own), std::move(south), std::move(west));
}

StationaryField build_stationary(const WeightConfig& cfg, double lambda, Coord base, Coord top,
                                 std::uint64_t boundary_seed)
{
    Rect extent = checked_rect(base, top);
    if (!cfg.region().contains(extent)) {
        throw DomainError("weight region does not cover the stationary extent");
    }
    WeightGrid bulk = materialize(extent, [&](Coord c) { return cfg.weight_at(c); });
    return build_stationary(bulk, cfg.p(), lambda, base, top, boundary_seed);
}

StationaryField build_stationary(double p, double lambda, Coord base, Coord top,
                                 std::uint64_t seed)
{
    WeightConfig cfg(p, derive_seed(seed, 0, StreamTag::Generic), checked_rect(base, top));
    return build_stationary(cfg, lambda, base, top, derive_seed(seed, 1, StreamTag::Generic));
}

ExitTimes exit_times(const StationaryField& sf, Coord x, Coord y)
{
    GeodesicReport rep = sf.geodesic(x, y);
    ExitTimes z;
    for (Coord c : rep.downmost) {
        if (c.x2 == x.x2) {
            z.horizontal = std::max(z.horizontal, c.x1 - x.x1);
        }
    }
    for (Coord c : rep.upmost) {
        if (c.x1 == x.x1) {
            z.vertical = std::max(z.vertical, c.x2 - x.x2);
        }
    }
    return z;
}

bool exits_right(const GeodesicReport& report)
{
    return report.downmost.size() > 1 && report.downmost[1] - report.downmost[0] == e1;
}

bool exits_up(const GeodesicReport& report)
{
    return report.upmost.size() > 1 && report.upmost[1] - report.upmost[0] == e2;
}

WeightGrid reflect_grid(const WeightGrid& g)
{
    Rect r{reflect(g.rect().hi), reflect(g.rect().lo)};
    return materialize(r, [&](Coord c) { return g[reflect(c)]; });
}

std::vector<std::int64_t> lindley_inter_departures(std::span<const std::int64_t> inter_arrivals,
                                                   std::span<const std::int64_t> services)
{
    if (inter_arrivals.size() != services.size()) {
        throw DomainError("arrival and service sequences differ in length");
    }
    std::vector<std::int64_t> out(services.size());
    std::int64_t arrival = 0;
    std::int64_t departure = 0;
    for (std::size_t j = 0; j < services.size(); ++j) {
        arrival += inter_arrivals[j];
        std::int64_t next = std::max(departure, arrival) + services[j];
        out[j] = next - departure;
        departure = next;
    }
    return out;
}

CoupledColumns couple_columns(double p, double lambda, double lambda_prime, int length,
                              int burn_in, std::uint64_t seed)
{
    if (!(lambda < lambda_prime)) {
        throw DomainError("couple_columns needs lambda < lambda_prime");
    }
    if (length < 1 || burn_in < 0 || burn_in >= length) {
        throw DomainError("couple_columns needs length >= 1 and 0 <= burn_in < length");
    }
    LambdaParams lo = lambda_params(p, lambda);
    LambdaParams hi = lambda_params(p, lambda_prime);

    CoupledColumns cc;
    cc.lambda = lo.lambda;
    cc.lambda_prime = hi.lambda;
    cc.burn_in = burn_in;
    cc.service.resize(std::size_t(length));
    cc.arrivals.resize(std::size_t(length));
    for (int j = 0; j < length; ++j) {
        cc.service[std::size_t(j)] =
            geometric_inverse(plain_key(seed, std::uint64_t(j), StreamTag::BoundaryV), lo.pV);
        cc.arrivals[std::size_t(j)] =
            geometric_inverse(plain_key(seed, std::uint64_t(j), StreamTag::BoundaryArrival), hi.pV);
    }
    cc.departures = lindley_inter_departures(cc.arrivals, cc.service);

    auto steady = cc.steady_departures();
    std::size_t half = steady.size() / 2;
    if (half >= 2) {
        auto moments = [](std::span<const std::int64_t> xs) {
            double mean = 0.0;
            for (auto x : xs) {
                mean += double(x);
            }
            mean /= double(xs.size());
            double var = 0.0;
            for (auto x : xs) {
                var += (double(x) - mean) * (double(x) - mean);
            }
            return std::pair{mean, var / double(xs.size() - 1)};
        };
        auto [m1, v1] = moments(steady.first(half));
        auto [m2, v2] = moments(steady.subspan(half));
        double se = std::sqrt(v1 / double(half) + v2 / double(steady.size() - half));
        cc.half_mean_z = se > 0.0 ? (m1 - m2) / se : 0.0;
        cc.stationarity_warning = std::abs(cc.half_mean_z) > 3.0;
    }
    return cc;
}

}  // namespace lppn
