#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace lppn {

/// Integer lattice point (x1 horizontal, x2 vertical).
struct Coord {
    int x1 = 0;
    int x2 = 0;

    friend constexpr bool operator==(Coord a, Coord b) { return a.x1 == b.x1 && a.x2 == b.x2; }
    friend constexpr bool operator!=(Coord a, Coord b) { return !(a == b); }
    friend constexpr Coord operator+(Coord a, Coord b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
    friend constexpr Coord operator-(Coord a, Coord b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
    friend constexpr Coord operator-(Coord a) { return {-a.x1, -a.x2}; }
    friend constexpr Coord operator*(int k, Coord a) { return {k * a.x1, k * a.x2}; }
};

inline constexpr Coord e1{1, 0};
inline constexpr Coord e2{0, 1};

/// Componentwise order u <= v.
constexpr bool leq(Coord u, Coord v) { return u.x1 <= v.x1 && u.x2 <= v.x2; }

inline std::string to_string(Coord c)
{
    return "(" + std::to_string(c.x1) + "," + std::to_string(c.x2) + ")";
}

/// Closed rectangle R_{lo,hi} = {x : lo <= x <= hi}.
struct Rect {
    Coord lo;
    Coord hi;

    constexpr int width() const { return hi.x1 - lo.x1 + 1; }
    constexpr int height() const { return hi.x2 - lo.x2 + 1; }
    constexpr std::int64_t area() const { return std::int64_t(width()) * height(); }
    constexpr bool contains(Coord c) const { return leq(lo, c) && leq(c, hi); }
    constexpr bool contains(Rect r) const { return contains(r.lo) && contains(r.hi); }
};

/// Thrown when an argument violates a documented precondition.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline Rect checked_rect(Coord u, Coord v)
{
    if (!leq(u, v)) {
        throw DomainError("corners out of order: " + to_string(u) + " !<= " + to_string(v));
    }
    return Rect{u, v};
}

}  // namespace lppn
