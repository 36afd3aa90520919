#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lppn/coord.hpp"
#include "lppn/grid.hpp"
#include "lppn/lattice.hpp"
#include "lppn/lpp.hpp"

namespace lppn {

inline constexpr double kLambdaClamp = 1e-9;

struct LambdaParams {
    double p = 0.0;
    double lambda = 0.0;
    double q = 0.0;
    double pH = 0.0;
    double pV = 0.0;
    double qprime = 0.0;
    double dir1 = 0.0;  //!< characteristic direction lambda e1 + (1-lambda) e2
    double dir2 = 0.0;
};

double q_of_lambda(double p, double lambda);
double q_derivative(double p, double lambda);

//! lambda is clamped to [clamp, 1 - clamp].
LambdaParams lambda_params(double p, double lambda, double clamp = kLambdaClamp);

//! Limit of T(0, n x) / n.
double shape_function(double p, double x1, double x2);

//---------------------------------------------------------------------------//
/*!
 * Quarter-plane LPP with geometric boundary weights.
 *
 * G(base) = 0, the south row and west column accumulate the boundary
 * weights, and G(x) = max(G(x-e1), G(x-e2)) + omega_x inside.
 */
//---------------------------------------------------------------------------//
class StationaryField {
public:
    //! south[i-1] sits at base + i e1, west[j-1] at base + j e2.
    StationaryField(LambdaParams params, Coord base, WeightGrid bulk,
                    std::vector<std::int64_t> south, std::vector<std::int64_t> west);

    const LambdaParams& params() const { return params_; }
    Coord base() const { return extent_.lo; }
    const Rect& extent() const { return extent_; }

    std::int64_t G(Coord x) const { return g_[x]; }
    std::int64_t bulk_weight(Coord x) const { return bulk_[x]; }
    const WeightGrid& bulk() const { return bulk_; }

    //! G(x) - G(x - e1); requires x1 > base1.
    std::int64_t omega_h(Coord x) const;
    //! G(x) - G(x - e2); requires x2 > base2.
    std::int64_t omega_v(Coord x) const;

    //! G(y) - G(x) for base <= x <= y.
    std::int64_t travel_time(Coord x, Coord y) const;

    //! Boundary increments on the rays from x, zero at x, bulk beyond.
    WeightGrid alternative_weights(Coord x, Coord y) const;

    GeodesicReport geodesic(Coord x, Coord y) const;

private:
    void check_pair(Coord x, Coord y) const;

    LambdaParams params_;
    Rect extent_;
    WeightGrid bulk_;
    Grid<std::int64_t> g_;
};

//! Bulk weights from cfg, boundary weights keyed by boundary_seed.
StationaryField build_stationary(const WeightConfig& cfg, double lambda, Coord base, Coord top,
                                 std::uint64_t boundary_seed);

//! Same, with an already materialized bulk grid covering R_{base,top}.
StationaryField build_stationary(const WeightGrid& bulk, double p, double lambda, Coord base,
                                 Coord top, std::uint64_t boundary_seed);

//! Fresh bulk and boundary derived from one seed.
StationaryField build_stationary(double p, double lambda, Coord base, Coord top,
                                 std::uint64_t seed);

struct ExitTimes {
    int horizontal = 0;  //!< largest j with x + j e1 on the downmost geodesic
    int vertical = 0;    //!< largest j with x + j e2 on the upmost geodesic
};

ExitTimes exit_times(const StationaryField& sf, Coord x, Coord y);

//! First step of the downmost geodesic is e1.
bool exits_right(const GeodesicReport& report);
//! First step of the upmost geodesic is e2.
bool exits_up(const GeodesicReport& report);

//! Point reflection x -> -x + e1 of a grid.
WeightGrid reflect_grid(const WeightGrid& g);
inline Coord reflect(Coord x) { return -x + e1; }

struct CoupledColumns {
    double lambda = 0.0;
    double lambda_prime = 0.0;
    int burn_in = 0;
    std::vector<std::int64_t> service;     //!< omega^V(lambda)
    std::vector<std::int64_t> arrivals;    //!< inter-arrival times
    std::vector<std::int64_t> departures;  //!< inter-departure times, omega^V(lambda')
    double half_mean_z = 0.0;              //!< first vs second half of post burn-in departures
    bool stationarity_warning = false;

    std::span<const std::int64_t> steady_departures() const
    {
        return std::span<const std::int64_t>(departures).subspan(std::size_t(burn_in));
    }
};

//! Discrete Lindley recursion started empty; returns inter-departure times.
std::vector<std::int64_t> lindley_inter_departures(std::span<const std::int64_t> inter_arrivals,
                                                   std::span<const std::int64_t> services);

CoupledColumns couple_columns(double p, double lambda, double lambda_prime, int length,
                              int burn_in, std::uint64_t seed);

}  // namespace lppn
