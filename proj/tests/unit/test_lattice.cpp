#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lppn/lattice.hpp"
#include "lppn/stats.hpp"

using namespace lppn;

TEST_CASE("first success index")
{
    CHECK(first_success([](int i) { return i == 0; }) == 0);
    CHECK(first_success([](int i) { return i == 3; }) == 3);
    CHECK(first_success([](int i) { return i >= 7; }) == 7);
    CHECK_THROWS_AS(first_success([](int) { return false; }), RngIntegrityError);
}

TEST_CASE("weights are geometric")
{
    WeightConfig cfg(0.5, 17, Rect{{0, 0}, {999, 999}});
    double total = 0.0;
    for (int y = 0; y < 1000; ++y) {
        for (int x = 0; x < 1000; ++x) {
            total += double(cfg.weight_at(Coord{x, y}));
        }
    }
    CHECK(std::abs(total / 1e6 - 1.0) < 0.01);

    for (double p : {0.3, 0.5, 0.7}) {
        WeightConfig c(p, 5, Rect{{0, 0}, {999, 99}});
        WeightGrid g = c.materialize();
        CHECK(chi_square_geometric(g.data(), p).p_value >= 1e-3);
    }
}

TEST_CASE("materialize agrees with weight_at")
{
    WeightConfig cfg(0.4, 3, Rect{{-4, -2}, {6, 5}});
    WeightGrid g = cfg.materialize();
    for (int y = -2; y <= 5; ++y) {
        for (int x = -4; x <= 6; ++x) {
            CHECK(g[Coord{x, y}] == cfg.weight_at(Coord{x, y}));
        }
    }
}

TEST_CASE("zero clock leaves the field unchanged")
{
    WeightConfig cfg(0.5, 8, Rect{{0, 0}, {30, 30}});
    int cap = coupled_cap(30, 0.5);
    for (int y = 0; y <= 30; ++y) {
        for (int x = 0; x <= 30; ++x) {
            Coord v{x, y};
            CHECK(bit_noisy_weight(cfg, v, 0.0) == cfg.weight_at(v));
            CHECK(site_noisy_weight(cfg, v, 0.0) == cfg.weight_at(v));
            CHECK(coupled_site_weight(cfg, v, 0.0, cap) == cfg.weight_at(v));
            for (NoiseKind k : {NoiseKind::Bit, NoiseKind::Site, NoiseKind::Coupled}) {
                CHECK(NoisyPair(cfg, 0.0, k, cap).noisy_weight_at(v) == cfg.weight_at(v));
            }
        }
    }
}

TEST_CASE("large clock decorrelates")
{
    WeightConfig cfg(0.5, 9, Rect{{0, 0}, {299, 299}});
    std::vector<double> a, b, c;
    for (int y = 0; y < 300; ++y) {
        for (int x = 0; x < 300; ++x) {
            Coord v{x, y};
            a.push_back(double(cfg.weight_at(v)));
            b.push_back(double(bit_noisy_weight(cfg, v, 1e6)));
            c.push_back(double(site_noisy_weight(cfg, v, 1e6)));
        }
    }
    double bound = 4.0 / std::sqrt(double(a.size()));
    CHECK(std::abs(pearson(a, b)) < bound);
    CHECK(std::abs(pearson(a, c)) < bound);
}

TEST_CASE("bit noise flip probability matches an independent simulation")
{
    const double p = 0.5, t = 0.2;
    const int samples = 400000;
    WeightConfig cfg(p, 12, Rect{{0, 0}, {999, 399}});
    std::int64_t changed = 0;
    for (int y = 0; y < 400; ++y) {
        for (int x = 0; x < 1000; ++x) {
            Coord v{x, y};
            changed += bit_noisy_weight(cfg, v, t) != cfg.weight_at(v);
        }
    }

    std::mt19937_64 gen(2024);
    std::bernoulli_distribution coin(p);
    std::exponential_distribution<double> clock(1.0);
    std::int64_t ref_changed = 0;
    for (int s = 0; s < samples; ++s) {
        int before = -1, after = -1;
        for (int i = 0; before < 0 || after < 0; ++i) {
            bool x = coin(gen), xp = coin(gen);
            bool resampled = clock(gen) <= t;
            if (before < 0 && x) {
                before = i;
            }
            if (after < 0 && (resampled ? xp : x)) {
                after = i;
            }
        }
        ref_changed += before != after;
    }
    CHECK(std::abs(double(changed) / samples - double(ref_changed) / samples) < 0.005);
}

TEST_CASE("site noise replaces the whole weight by the replacement value")
{
    WeightConfig cfg(0.4, 21, Rect{{0, 0}, {40, 40}});
    for (int y = 0; y <= 40; ++y) {
        for (int x = 0; x <= 40; ++x) {
            Coord v{x, y};
            std::int64_t w = site_noisy_weight(cfg, v, 0.3);
            bool resampled = cfg.site_clock(v) <= 0.3;
            CHECK(w == (resampled ? cfg.replacement_weight(v) : cfg.weight_at(v)));
        }
    }
}

TEST_CASE("coupled cap")
{
    CHECK(coupled_cap(100, 0.5) == 34);
    for (int n : {2, 10, 100, 1000}) {
        for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            int cap = coupled_cap(n, p);
            CHECK(double(n) * n * std::pow(1.0 - p, cap) <= std::pow(double(n), -3.0) * (1 + 1e-9));
            CHECK(double(n) * n * std::pow(1.0 - p, cap - 1) > std::pow(double(n), -3.0));
        }
        int previous = coupled_cap(n, 0.05);
        for (double p = 0.1; p < 0.96; p += 0.05) {
            CHECK(coupled_cap(n, p) <= previous);
            previous = coupled_cap(n, p);
        }
    }
    CHECK_THROWS_AS(coupled_cap(1, 0.5), DomainError);
    CHECK_THROWS_AS(coupled_cap(10, 1.0), DomainError);
}

TEST_CASE("coupled clock fires exactly when one of the first cap bits is resampled")
{
    const int cap = 6;
    const double t = 0.05;
    WeightConfig cfg(0.5, 31, Rect{{0, 0}, {99, 99}});
    int implication_checked = 0;
    for (int y = 0; y < 100; ++y) {
        for (int x = 0; x < 100; ++x) {
            Coord v{x, y};
            bool any = false;
            for (int i = 0; i < cap; ++i) {
                any = any || bit_resampled(cfg, v, i, t);
            }
            CHECK(coupled_bit_resampled(cfg, v, t, cap) == any);
            if (!any && cfg.weight_at(v) < cap) {
                CHECK(bit_noisy_weight(cfg, v, t) == cfg.weight_at(v));
                ++implication_checked;
            }
        }
    }
    CHECK(implication_checked > 5000);
}

TEST_CASE("several clocks in one scan equal separate scans")
{
    WeightConfig cfg(0.35, 4, Rect{{0, 0}, {25, 25}});
    std::vector<double> ts{0.5, 0.0, 2.0, 0.1, 0.5};
    std::vector<std::int64_t> out(ts.size());
    for (int y = 0; y <= 25; ++y) {
        for (int x = 0; x <= 25; ++x) {
            Coord v{x, y};
            bit_noisy_weights(cfg, v, ts, out);
            for (std::size_t k = 0; k < ts.size(); ++k) {
                CHECK(out[k] == bit_noisy_weight(cfg, v, ts[k]));
            }
        }
    }
}

TEST_CASE("noise is monotone in the clock for a single bit")
{
    WeightConfig cfg(0.5, 77, Rect{{0, 0}, {10, 10}});
    for (int i = 0; i < 20; ++i) {
        Coord v{i % 11, i / 11};
        double clock = cfg.bit_clock(v, 0);
        CHECK_FALSE(bit_resampled(cfg, v, 0, clock * 0.999));
        CHECK(bit_resampled(cfg, v, 0, clock));
    }
}

TEST_CASE("domain errors")
{
    CHECK_THROWS_AS(WeightConfig(0.0, 1, Rect{{0, 0}, {1, 1}}), DomainError);
    CHECK_THROWS_AS(WeightConfig(1.0, 1, Rect{{0, 0}, {1, 1}}), DomainError);
    CHECK_THROWS_AS(WeightConfig(0.5, 1, Rect{{2, 0}, {1, 1}}), DomainError);
    WeightConfig cfg(0.5, 1, Rect{{0, 0}, {3, 3}});
    CHECK_THROWS_AS(cfg.weight_at(Coord{4, 0}), DomainError);
    CHECK_THROWS_AS(bit_noisy_weight(cfg, Coord{-1, 0}, 0.5), DomainError);
    CHECK_THROWS_AS(bit_noisy_weight(cfg, Coord{0, 0}, -0.5), DomainError);
    CHECK_THROWS_AS(NoisyPair(cfg, 0.5, NoiseKind::Coupled, 0), DomainError);
    CHECK_THROWS_AS(parse_noise_kind("spin"), DomainError);
    CHECK(parse_noise_kind("bit") == NoiseKind::Bit);
    CHECK(parse_noise_kind("BIT") == NoiseKind::Bit);
    CHECK(parse_noise_kind("coupled") == NoiseKind::Coupled);
}
