#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "lppn/lattice.hpp"
#include "lppn/lpp.hpp"
#include "oracles.hpp"

using namespace lppn;

namespace {

WeightGrid random_field(std::mt19937_64& gen, int w, int h, int max_weight)
{
    std::uniform_int_distribution<int> d(0, max_weight);
    return materialize(Rect{{0, 0}, {w - 1, h - 1}}, [&](Coord) { return d(gen); });
}

std::vector<Coord> as_vector(const oracle::Path& p) { return std::vector<Coord>(p.begin(), p.end()); }

}  // namespace

TEST_CASE("two by two example")
{
    WeightGrid w(Rect{{0, 0}, {1, 1}});
    w[Coord{0, 0}] = 1;
    w[Coord{1, 0}] = 2;
    w[Coord{0, 1}] = 3;
    w[Coord{1, 1}] = 4;
    CHECK(travel_time(w, Coord{0, 0}, Coord{1, 1}) == 8);
    GeodesicReport r = geodesic_report(w, Coord{0, 0}, Coord{1, 1});
    CHECK(r.value == 8);
    CHECK(r.member_mask[Coord{0, 0}] == 1);
    CHECK(r.member_mask[Coord{0, 1}] == 1);
    CHECK(r.member_mask[Coord{1, 1}] == 1);
    CHECK(r.member_mask[Coord{1, 0}] == 0);
    CHECK(r.upmost == std::vector<Coord>{{0, 0}, {0, 1}, {1, 1}});
    CHECK(r.downmost == r.upmost);
}

TEST_CASE("all-zero weights put every vertex on a geodesic")
{
    WeightGrid w(Rect{{0, 0}, {4, 3}}, 0);
    GeodesicReport r = geodesic_report(w, Coord{0, 0}, Coord{4, 3});
    CHECK(r.value == 0);
    for (std::uint8_t m : r.member_mask.data()) {
        CHECK(m == 1);
    }
    CHECK(r.upmost.front() == Coord{0, 0});
    CHECK(r.upmost[1] == Coord{0, 1});
    CHECK(r.downmost[1] == Coord{1, 0});
}

TEST_CASE("dynamic programme agrees with path enumeration")
{
    std::mt19937_64 gen(1);
    for (int trial = 0; trial < 100; ++trial) {
        int w = 1 + int(gen() % 6), h = 1 + int(gen() % 6);
        WeightGrid field = random_field(gen, w, h, trial % 2 ? 3 : 9);
        Coord u{0, 0}, v{w - 1, h - 1};
        auto geo = oracle::enumerate_geodesics(field, u, v);
        GeodesicReport r = geodesic_report(field, u, v);
        CHECK(r.value == geo.value);
        CHECK(travel_time(field, u, v) == geo.value);
        CHECK(travel_time_streaming([&](Coord c) { return field[c]; }, u, v) == geo.value);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                CHECK(bool(r.member_mask[Coord{x, y}]) == geo.members.count({x, y}) > 0);
            }
        }
        CHECK(r.upmost == as_vector(oracle::extremal(geo, true)));
        CHECK(r.downmost == as_vector(oracle::extremal(geo, false)));
        CHECK(is_directed_path(r.upmost));
        CHECK(path_weight(field, r.upmost) == geo.value);
    }
}

TEST_CASE("forward and backward tables")
{
    std::mt19937_64 gen(2);
    WeightGrid field = random_field(gen, 7, 5, 5);
    Coord u{1, 1}, v{6, 4};
    auto fwd = forward_table(field, u, v);
    auto bwd = backward_table(field, u, v);
    for (int y = 1; y <= 4; ++y) {
        for (int x = 1; x <= 6; ++x) {
            Coord c{x, y};
            CHECK(fwd[c] == travel_time(field, u, c));
            CHECK(bwd[c] == travel_time(field, c, v));
        }
    }
    TravelTable table(field, u, v);
    CHECK(table.value() == travel_time(field, u, v));
}

TEST_CASE("the two orderings of paths agree")
{
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        int w = 2 + int(gen() % 5), h = 2 + int(gen() % 5);
        std::vector<oracle::Path> paths;
        oracle::for_each_path(Coord{0, 0}, Coord{w - 1, h - 1},
                              [&](const oracle::Path& p) { paths.push_back(p); });
        const auto& a = paths[gen() % paths.size()];
        const auto& b = paths[gen() % paths.size()];
        CHECK(path_above(a, b) == path_above_horizontal(a, b));
        CHECK(path_above(a, b) == oracle::above(a, b));
    }
}

TEST_CASE("every geodesic lies between the extremal ones")
{
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 50; ++trial) {
        WeightGrid field = random_field(gen, 6, 6, 2);
        auto geo = oracle::enumerate_geodesics(field, Coord{0, 0}, Coord{5, 5});
        GeodesicReport r = geodesic_report(field, Coord{0, 0}, Coord{5, 5});
        for (const auto& g : geo.all) {
            CHECK(path_above(r.upmost, g));
            CHECK(path_above(g, r.downmost));
        }
    }
}

TEST_CASE("monotone and one-Lipschitz in the weights")
{
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 100; ++trial) {
        WeightGrid field = random_field(gen, 8, 8, 6);
        Coord u{0, 0}, v{7, 7};
        std::int64_t base = travel_time(field, u, v);
        Coord site{int(gen() % 8), int(gen() % 8)};
        WeightGrid raised = field;
        raised[site] += 3;
        std::int64_t after = travel_time(raised, u, v);
        CHECK(after >= base);
        CHECK(after <= base + 3);
    }
}

TEST_CASE("transpose symmetry")
{
    std::mt19937_64 gen(6);
    WeightGrid field = random_field(gen, 9, 6, 7);
    WeightGrid t = materialize(Rect{{0, 0}, {5, 8}}, [&](Coord c) { return field[Coord{c.x2, c.x1}]; });
    CHECK(travel_time(field, Coord{0, 0}, Coord{8, 5}) == travel_time(t, Coord{0, 0}, Coord{5, 8}));
    CHECK(travel_time(field, Coord{2, 1}, Coord{7, 4}) == travel_time(t, Coord{1, 2}, Coord{4, 7}));
}

TEST_CASE("increment decomposition")
{
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + int(gen() % 8);
        WeightConfig cfg(0.5, gen(), Rect{{0, 0}, {n, n}});
        WeightGrid field = cfg.materialize();
        Coord v{int(gen() % std::uint64_t(n)), int(gen() % std::uint64_t(n + 1))};
        IncrementProfile prof = increment_profile(field, v, n);
        const Coord top{n, n};
        auto T = [&](Coord a, Coord b) { return travel_time(field, a, b); };
        const std::int64_t through_origin = T(Coord{0, 0}, v) + T(v + e1, top);
        for (int i = prof.i_min; i <= prof.i_max; ++i) {
            Coord row = v + i * e2;
            CHECK(prof.T_to_axis(i) == T(Coord{0, 0}, row));
            CHECK(prof.T_from_axis(i) == T(row + e1, top));
            CHECK(prof.D(i) == through_origin - T(Coord{0, 0}, row) - T(row + e1, top));
        }
        for (int j = prof.i_min + 1; j <= prof.i_max; ++j) {
            CHECK(prof.Delta(j) >= 0);
            CHECK(prof.DeltaPrime(j) >= 0);
        }
        CHECK(prof.D(0) == 0);
    }
}

TEST_CASE("nonnegative D is the same as a geodesic using the edge to the right")
{
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 7;
        WeightConfig cfg(0.5, gen(), Rect{{0, 0}, {n, n}});
        WeightGrid field = cfg.materialize();
        Coord v{int(gen() % n), int(gen() % (n + 1))};
        IncrementProfile prof = increment_profile(field, v, n);
        auto geo = oracle::enumerate_geodesics(field, Coord{0, 0}, Coord{n, n});
        CHECK(prof.exits_at_origin() == oracle::edge_on_geodesic(geo, v, v + e1));
    }
}

TEST_CASE("domain errors")
{
    WeightGrid w(Rect{{0, 0}, {3, 3}}, 1);
    CHECK_THROWS_AS(travel_time(w, Coord{2, 2}, Coord{1, 3}), DomainError);
    CHECK_THROWS_AS(travel_time(w, Coord{0, 0}, Coord{4, 3}), DomainError);
    CHECK_THROWS_AS(increment_profile(w, Coord{3, 0}, 3), DomainError);
    CHECK_THROWS_AS(increment_profile(w, Coord{0, 0}, 4), DomainError);
    CHECK_FALSE(is_directed_path(std::vector<Coord>{{0, 0}, {1, 1}}));
    CHECK(is_directed_path(std::vector<Coord>{{0, 0}, {1, 0}, {1, 1}}));
}
