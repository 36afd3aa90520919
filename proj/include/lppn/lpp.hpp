#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "lppn/coord.hpp"
#include "lppn/grid.hpp"

namespace lppn {

inline constexpr std::int64_t kMinusInf = std::numeric_limits<std::int64_t>::min() / 4;

//! T(u,v) with O(width) memory; weight is any callable Coord -> integer.
template<class F>
std::int64_t travel_time_streaming(F&& weight, Coord u, Coord v)
{
    Rect r = checked_rect(u, v);
    std::vector<std::int64_t> row(std::size_t(r.width()), kMinusInf);
    for (int y = u.x2; y <= v.x2; ++y) {
        std::int64_t left = kMinusInf;
        for (int x = u.x1; x <= v.x1; ++x) {
            std::size_t k = std::size_t(x - u.x1);
            std::int64_t best = left > row[k] ? left : row[k];
            if (x == u.x1 && y == u.x2) {
                best = 0;
            }
            row[k] = best + std::int64_t(weight(Coord{x, y}));
            left = row[k];
        }
    }
    return row.back();
}

std::int64_t travel_time(const WeightGrid& w, Coord u, Coord v);

//! F(x) = T(u,x) over R_{u,v}.
Grid<std::int64_t> forward_table(const WeightGrid& w, Coord u, Coord v);
//! B(x) = T(x,v) over R_{u,v}.
Grid<std::int64_t> backward_table(const WeightGrid& w, Coord u, Coord v);

/// Forward and backward passage times over one rectangle.
class TravelTable {
public:
    TravelTable(const WeightGrid& w, Coord u, Coord v);

    const Rect& region() const { return region_; }
    std::int64_t value() const { return forward_[region_.hi]; }
    std::int64_t forward(Coord x) const { return forward_[x]; }
    std::int64_t backward(Coord x) const { return backward_[x]; }
    std::int64_t weight(Coord x) const { return (*weights_)[x]; }

    bool on_geodesic(Coord x) const
    {
        return forward_[x] + backward_[x] - weight(x) == value();
    }

    //! Greedy geodesic preferring e2 (upmost) or e1 (downmost) steps.
    std::vector<Coord> extremal_geodesic(bool prefer_up) const;

private:
    const WeightGrid* weights_;
    Rect region_;
    Grid<std::int64_t> forward_;
    Grid<std::int64_t> backward_;
};

struct GeodesicReport {
    std::int64_t value = 0;
    Grid<std::uint8_t> member_mask;
    std::vector<Coord> upmost;
    std::vector<Coord> downmost;
};

GeodesicReport geodesic_report(const WeightGrid& w, Coord u, Coord v);

bool is_directed_path(std::span<const Coord> path);
std::int64_t path_weight(const WeightGrid& w, std::span<const Coord> path);

//! On every shared vertical line, the lowest point of gamma is at or above that of other.
bool path_above(std::span<const Coord> gamma, std::span<const Coord> other);
//! On every shared horizontal line, the rightmost point of gamma is at or left of that of other.
bool path_above_horizontal(std::span<const Coord> gamma, std::span<const Coord> other);

//---------------------------------------------------------------------------//
/*!
 * Decomposition of the passage time across the vertical axis at v.
 *
 * Coordinates are shifted so that v sits at the origin; the rectangle becomes
 * R_{-v,w} with w = n e_+ - v. Arrays are indexed by offsets from i_min.
 */
//---------------------------------------------------------------------------//
struct IncrementProfile {
    Coord v;
    int n = 0;
    int i_min = 0;  //!< -v2
    int i_max = 0;  //!< n - v2
    std::vector<std::int64_t> to_axis;    //!< T(-v, i e2)
    std::vector<std::int64_t> from_axis;  //!< T(e1 + i e2, w)
    std::vector<std::int64_t> d;          //!< D_i, built from increments
    std::vector<std::int64_t> delta;        //!< Delta_j, j in (i_min, i_max]
    std::vector<std::int64_t> delta_prime;  //!< Delta'_j, j in (i_min, i_max]

    std::int64_t D(int i) const { return d[std::size_t(i - i_min)]; }
    std::int64_t Delta(int j) const { return delta[std::size_t(j - i_min - 1)]; }
    std::int64_t DeltaPrime(int j) const { return delta_prime[std::size_t(j - i_min - 1)]; }
    std::int64_t T_to_axis(int i) const { return to_axis[std::size_t(i - i_min)]; }
    std::int64_t T_from_axis(int i) const { return from_axis[std::size_t(i - i_min)]; }

    //! Every D_i >= 0: some geodesic leaves the axis through the edge 0 -> e1.
    bool exits_at_origin() const;
};

//! field must cover R_{0, n e_+}; requires 0 <= v <= n e_+ and v1 < n.
IncrementProfile increment_profile(const WeightGrid& field, Coord v, int n);

}  // namespace lppn
