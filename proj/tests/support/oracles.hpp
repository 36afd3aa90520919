#pragma once

// Brute-force references used only by tests. None of these share code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "lppn/coord.hpp"
#include "lppn/grid.hpp"

namespace oracle {

using lppn::Coord;

using Path = std::vector<Coord>;

//! Calls fn on every up/right path from u to v.
inline void for_each_path(Coord u, Coord v, const std::function<void(const Path&)>& fn)
{
    Path path{u};
    std::function<void()> rec = [&] {
        Coord c = path.back();
        if (c == v) {
            fn(path);
            return;
        }
        if (c.x1 < v.x1) {
            path.push_back(Coord{c.x1 + 1, c.x2});
            rec();
            path.pop_back();
        }
        if (c.x2 < v.x2) {
            path.push_back(Coord{c.x1, c.x2 + 1});
            rec();
            path.pop_back();
        }
    };
    rec();
}

struct Geodesics {
    std::int64_t value = 0;
    std::vector<Path> all;  //!< every maximizing path
    std::set<std::pair<int, int>> members;
};

inline Geodesics enumerate_geodesics(const lppn::WeightGrid& w, Coord u, Coord v)
{
    Geodesics g;
    bool first = true;
    for_each_path(u, v, [&](const Path& path) {
        std::int64_t total = 0;
        for (Coord c : path) {
            total += w[c];
        }
        if (first || total > g.value) {
            g.value = total;
            g.all.clear();
            first = false;
        }
        if (total == g.value) {
            g.all.push_back(path);
        }
    });
    for (const auto& path : g.all) {
        for (Coord c : path) {
            g.members.insert({c.x1, c.x2});
        }
    }
    return g;
}

//! Lowest height of the path on each vertical line.
inline std::map<int, int> lowest_per_column(const Path& path)
{
    std::map<int, int> low;
    for (Coord c : path) {
        auto it = low.find(c.x1);
        if (it == low.end() || c.x2 < it->second) {
            low[c.x1] = c.x2;
        }
    }
    return low;
}

//! gamma is weakly above other on every shared column.
inline bool above(const Path& gamma, const Path& other)
{
    auto a = lowest_per_column(gamma);
    auto b = lowest_per_column(other);
    for (const auto& [x, y] : a) {
        auto it = b.find(x);
        if (it != b.end() && y < it->second) {
            return false;
        }
    }
    return true;
}

//! The geodesic above (or below) every other one, found by pairwise comparison.
inline Path extremal(const Geodesics& g, bool upmost)
{
    for (const auto& cand : g.all) {
        bool ok = true;
        for (const auto& other : g.all) {
            ok = ok && (upmost ? above(cand, other) : above(other, cand));
        }
        if (ok) {
            return cand;
        }
    }
    return {};
}

//! Some geodesic uses the edge a -> b.
inline bool edge_on_geodesic(const Geodesics& g, Coord a, Coord b)
{
    for (const auto& path : g.all) {
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            if (path[k] == a && path[k + 1] == b) {
                return true;
            }
        }
    }
    return false;
}

//! P_t f by the dense 2^m x 2^m product kernel.
inline std::vector<double> dense_semigroup(const std::vector<double>& f, int m, double p, double t)
{
    const double keep = std::exp(-t);
    auto k1 = [&](int x, int y) {
        double stat = y ? p : 1.0 - p;
        return keep * (x == y ? 1.0 : 0.0) + (1.0 - keep) * stat;
    };
    const std::size_t size = std::size_t(1) << m;
    std::vector<double> out(size, 0.0);
    for (std::size_t x = 0; x < size; ++x) {
        long double acc = 0.0L;
        for (std::size_t y = 0; y < size; ++y) {
            long double k = 1.0L;
            for (int i = 0; i < m; ++i) {
                k *= k1(int((x >> i) & 1u), int((y >> i) & 1u));
            }
            acc += k * f[y];
        }
        out[x] = double(acc);
    }
    return out;
}

struct LsiSeries {
    long double entropy = 0.0L;
    long double variance = 0.0L;
};

//! Ent(f_u^2) and Var(f_u) for f_u(k) = ((1-u)/(1-p))^{k/2}, summing k < terms.
inline LsiSeries lsi_series(double p, double u, int terms = 10000)
{
    const long double r = (1.0L - u) / (1.0L - p);
    long double ef = 0.0L, ef2 = 0.0L, ef2log = 0.0L;
    for (int k = 0; k < terms; ++k) {
        // p (1-p)^k r^k and p (1-p)^k r^{k/2}, written without overflowing r^k.
        long double mass_f2 = p * std::pow(1.0L - u, (long double)k);
        long double mass_f = p * std::pow((1.0L - p) * (1.0L - u), 0.5L * k);
        ef += mass_f;
        ef2 += mass_f2;
        ef2log += mass_f2 * (long double)k * std::log(r);
    }
    return LsiSeries{ef2log - ef2 * std::log(ef2), ef2 - ef * ef};
}

//! Departure epochs of a single-server queue started empty, then their differences.
inline std::vector<std::int64_t> queue_inter_departures(const std::vector<std::int64_t>& inter_arrivals,
                                                        const std::vector<std::int64_t>& services)
{
    std::vector<std::int64_t> out;
    std::int64_t arrival = 0, depart = 0, previous = 0;
    for (std::size_t j = 0; j < services.size(); ++j) {
        arrival += inter_arrivals[j];
        std::int64_t start = std::max(arrival, depart);
        depart = start + services[j];
        out.push_back(depart - previous);
        previous = depart;
    }
    return out;
}

//! P(S_1 >= 0, ..., S_n >= 0) for +-1 steps by listing all 2^n sign patterns.
inline double walk_stays_nonnegative(double p_plus, int n)
{
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        int s = 0;
        bool ok = true;
        double prob = 1.0;
        for (int k = 0; k < n; ++k) {
            bool up = (mask >> k) & 1u;
            s += up ? 1 : -1;
            prob *= up ? p_plus : 1.0 - p_plus;
            ok = ok && s >= 0;
        }
        if (ok) {
            total += prob;
        }
    }
    return total;
}

//! Cov(f(Y), f(Y^S)) = E[E[f | Y outside S]^2] - (E f)^2, in doubles.
inline double resampled_covariance(const std::vector<double>& f, const std::vector<double>& law,
                                   int vars, std::uint32_t resampled)
{
    const int support = int(law.size());
    std::size_t outcomes = 1;
    for (int i = 0; i < vars; ++i) {
        outcomes *= std::size_t(support);
    }
    auto digits = [&](std::size_t y) {
        std::vector<int> d(static_cast<std::size_t>(vars));
        for (int i = 0; i < vars; ++i) {
            d[std::size_t(i)] = int(y % std::size_t(support));
            y /= std::size_t(support);
        }
        return d;
    };
    auto prob = [&](std::size_t y) {
        double q = 1.0;
        for (int d : digits(y)) {
            q *= law[std::size_t(d)];
        }
        return q;
    };
    std::map<std::vector<int>, std::pair<double, double>> cond;  // kept digits -> (mass, mass * f)
    double mean = 0.0;
    for (std::size_t y = 0; y < outcomes; ++y) {
        auto d = digits(y);
        for (int i = 0; i < vars; ++i) {
            if ((resampled >> i) & 1u) {
                d[std::size_t(i)] = -1;
            }
        }
        double q = prob(y);
        cond[d].first += q;
        cond[d].second += q * f[y];
        mean += q * f[y];
    }
    double second = 0.0;
    for (const auto& [key, mf] : cond) {
        second += mf.second * mf.second / mf.first;
    }
    return second - mean * mean;
}

}  // namespace oracle
