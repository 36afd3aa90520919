#include "lppn/lpp.hpp"

#include <algorithm>
#include <map>

namespace lppn {
namespace {

void require_covered(const WeightGrid& w, Rect r)
{
    if (!w.rect().contains(r)) {
        throw DomainError("rectangle " + to_string(r.lo) + "-" + to_string(r.hi)
                          + " not covered by weight grid");
    }
}

}  // namespace

std::int64_t travel_time(const WeightGrid& w, Coord u, Coord v)
{
    require_covered(w, checked_rect(u, v));
    return travel_time_streaming([&](Coord x) { return w[x]; }, u, v);
}

Grid<std::int64_t> forward_table(const WeightGrid& w, Coord u, Coord v)
{
    Rect r = checked_rect(u, v);
    require_covered(w, r);
    Grid<std::int64_t> f(r, kMinusInf);
    for (int y = u.x2; y <= v.x2; ++y) {
        for (int x = u.x1; x <= v.x1; ++x) {
            Coord c{x, y};
            std::int64_t best = kMinusInf;
            if (x > u.x1) {
                best = f[c - e1];
            }
            if (y > u.x2) {
                best = std::max(best, f[c - e2]);
            }
            if (c == u) {
                best = 0;
            }
            f[c] = best + w[c];
        }
    }
    return f;
}

Grid<std::int64_t> backward_table(const WeightGrid& w, Coord u, Coord v)
{
    Rect r = checked_rect(u, v);
    require_covered(w, r);
    Grid<std::int64_t> b(r, kMinusInf);
    for (int y = v.x2; y >= u.x2; --y) {
        for (int x = v.x1; x >= u.x1; --x) {
            Coord c{x, y};
            std::int64_t best = kMinusInf;
            if (x < v.x1) {
                best = b[c + e1];
            }
            if (y < v.x2) {
                best = std::max(best, b[c + e2]);
            }
            if (c == v) {
                best = 0;
            }
            b[c] = best + w[c];
        }
    }
    return b;
}

TravelTable::TravelTable(const WeightGrid& w, Coord u, Coord v)
    : weights_(&w),
      region_(checked_rect(u, v)),
      forward_(forward_table(w, u, v)),
      backward_(backward_table(w, u, v))
{
}

std::vector<Coord> TravelTable::extremal_geodesic(bool prefer_up) const
{
    const Coord target = region_.hi;
    const std::int64_t total = value();
    auto continues = [&](Coord x, Coord y) {
        return region_.contains(y) && forward_[x] + backward_[y] == total;
    };

    std::vector<Coord> path{region_.lo};
    Coord x = region_.lo;
    while (x != target) {
        Coord first = prefer_up ? x + e2 : x + e1;
        Coord second = prefer_up ? x + e1 : x + e2;
        x = continues(x, first) ? first : second;
        path.push_back(x);
    }
    return path;
}

GeodesicReport geodesic_report(const WeightGrid& w, Coord u, Coord v)
{
    TravelTable table(w, u, v);
    GeodesicReport report;
    report.value = table.value();
    report.member_mask = Grid<std::uint8_t>(table.region(), 0);
    for (int y = u.x2; y <= v.x2; ++y) {
        for (int x = u.x1; x <= v.x1; ++x) {
            report.member_mask[Coord{x, y}] = table.on_geodesic(Coord{x, y}) ? 1 : 0;
        }
    }
    report.upmost = table.extremal_geodesic(true);
    report.downmost = table.extremal_geodesic(false);
    return report;
}

bool is_directed_path(std::span<const Coord> path)
{
    if (path.empty()) {
        return false;
    }
    for (std::size_t k = 1; k < path.size(); ++k) {
        Coord step = path[k] - path[k - 1];
        if (step != e1 && step != e2) {
            return false;
        }
    }
    return true;
}

std::int64_t path_weight(const WeightGrid& w, std::span<const Coord> path)
{
    std::int64_t total = 0;
    for (Coord c : path) {
        total += w[c];
    }
    return total;
}

bool path_above(std::span<const Coord> gamma, std::span<const Coord> other)
{
    std::map<int, int> lowest;
    for (Coord c : other) {
        auto [it, fresh] = lowest.emplace(c.x1, c.x2);
        if (!fresh) {
            it->second = std::min(it->second, c.x2);
        }
    }
    std::map<int, int> own;
    for (Coord c : gamma) {
        auto [it, fresh] = own.emplace(c.x1, c.x2);
        if (!fresh) {
            it->second = std::min(it->second, c.x2);
        }
    }
    for (auto [line, low] : own) {
        auto it = lowest.find(line);
        if (it != lowest.end() && low < it->second) {
            return false;
        }
    }
    return true;
}

bool path_above_horizontal(std::span<const Coord> gamma, std::span<const Coord> other)
{
    std::map<int, int> rightmost;
    for (Coord c : other) {
        auto [it, fresh] = rightmost.emplace(c.x2, c.x1);
        if (!fresh) {
            it->second = std::max(it->second, c.x1);
        }
    }
    std::map<int, int> own;
    for (Coord c : gamma) {
        auto [it, fresh] = own.emplace(c.x2, c.x1);
        if (!fresh) {
            it->second = std::max(it->second, c.x1);
        }
    }
    for (auto [line, right] : own) {
        auto it = rightmost.find(line);
        if (it != rightmost.end() && right > it->second) {
            return false;
        }
    }
    return true;
}

bool IncrementProfile::exits_at_origin() const
{
    return std::all_of(d.begin(), d.end(), [](std::int64_t x) { return x >= 0; });
}

IncrementProfile increment_profile(const WeightGrid& field, Coord v, int n)
{
    if (n < 1 || !leq(Coord{0, 0}, v) || !leq(v, Coord{n, n}) || v.x1 >= n) {
        throw DomainError("increment_profile needs 0 <= v <= n e_+ with v1 < n, got v="
                          + to_string(v) + " n=" + std::to_string(n));
    }
    require_covered(field, Rect{{0, 0}, {n, n}});

    const Coord w{n - v.x1, n - v.x2};
    const Rect shifted{-v, w};
    WeightGrid local = materialize(shifted, [&](Coord c) { return field[c + v]; });

    IncrementProfile prof;
    prof.v = v;
    prof.n = n;
    prof.i_min = -v.x2;
    prof.i_max = w.x2;

    auto fwd = forward_table(local, -v, Coord{0, w.x2});
    auto bwd = backward_table(local, Coord{1, -v.x2}, w);
    for (int i = prof.i_min; i <= prof.i_max; ++i) {
        prof.to_axis.push_back(fwd[Coord{0, i}]);
        prof.from_axis.push_back(bwd[Coord{1, i}]);
    }
    for (int j = prof.i_min + 1; j <= prof.i_max; ++j) {
        prof.delta.push_back(prof.T_to_axis(j) - prof.T_to_axis(j - 1));
        prof.delta_prime.push_back(prof.T_from_axis(j - 1) - prof.T_from_axis(j));
    }

    prof.d.assign(std::size_t(prof.i_max - prof.i_min + 1), 0);
    std::int64_t acc = 0;
    for (int i = 1; i <= prof.i_max; ++i) {
        acc += -prof.Delta(i) + prof.DeltaPrime(i);
        prof.d[std::size_t(i - prof.i_min)] = acc;
    }
    acc = 0;
    for (int i = -1; i >= prof.i_min; --i) {
        acc += prof.Delta(i + 1) - prof.DeltaPrime(i + 1);
        prof.d[std::size_t(i - prof.i_min)] = acc;
    }
    return prof;
}

}  // namespace lppn
