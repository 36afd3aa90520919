#pragma once

#include <cstdint>
#include <vector>

#include "lppn/coord.hpp"
#include "lppn/lpp.hpp"

namespace lppn::detail {

//! T(0, n e_+) for several fields at once; weights(c, out) fills one weight per field.
template<class W>
std::vector<std::int64_t> multi_travel_times(int n, std::size_t fields, W&& weights)
{
    const std::size_t width = std::size_t(n) + 1;
    std::vector<std::int64_t> row(width * fields, kMinusInf);
    std::vector<std::int64_t> site(fields);
    for (int y = 0; y <= n; ++y) {
        for (int x = 0; x <= n; ++x) {
            weights(Coord{x, y}, site);
            std::int64_t* cur = &row[std::size_t(x) * fields];
            const std::int64_t* left = x > 0 ? &row[std::size_t(x - 1) * fields] : nullptr;
            for (std::size_t k = 0; k < fields; ++k) {
                std::int64_t best = cur[k];
                if (left && left[k] > best) {
                    best = left[k];
                }
                if (x == 0 && y == 0) {
                    best = 0;
                }
                cur[k] = best + site[k];
            }
        }
    }
    row.erase(row.begin(), row.end() - std::ptrdiff_t(fields));
    return row;
}

inline std::vector<double> as_doubles(const std::vector<std::int64_t>& xs)
{
    return std::vector<double>(xs.begin(), xs.end());
}

}  // namespace lppn::detail
