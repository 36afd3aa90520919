#pragma once

#include <cstdint>
#include <vector>

#include "lppn/coord.hpp"

namespace lppn {

/// Dense table over a rectangle, row-major in x2.
template<class T>
class Grid {
public:
    Grid() = default;
    Grid(Rect rect, T fill = T{})
        : rect_(rect), data_(std::size_t(rect.area()), fill)
    {
    }

    const Rect& rect() const { return rect_; }
    bool contains(Coord c) const { return rect_.contains(c); }

    T& operator[](Coord c) { return data_[offset(c)]; }
    const T& operator[](Coord c) const { return data_[offset(c)]; }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

private:
    std::size_t offset(Coord c) const
    {
        return std::size_t(c.x2 - rect_.lo.x2) * std::size_t(rect_.width())
               + std::size_t(c.x1 - rect_.lo.x1);
    }

    Rect rect_{};
    std::vector<T> data_;
};

using WeightGrid = Grid<std::int64_t>;

/// Fill a grid from any callable Coord -> weight.
template<class F>
WeightGrid materialize(Rect rect, F&& weight)
{
    WeightGrid g(rect);
    for (int y = rect.lo.x2; y <= rect.hi.x2; ++y) {
        for (int x = rect.lo.x1; x <= rect.hi.x1; ++x) {
            g[Coord{x, y}] = std::int64_t(weight(Coord{x, y}));
        }
    }
    return g;
}

}  // namespace lppn
