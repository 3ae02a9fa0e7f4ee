#include "lcr/fdr.hpp"

#include "lcr/error.hpp"

#include <algorithm>
#include <numeric>

namespace lcr::stat {

AdjustedPValues bh_adjust(std::span<const double> p) {
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::Domain, "p-value outside [0, 1]");
    }
    AdjustedPValues out;
    out.raw.assign(p.begin(), p.end());
    out.adjusted.assign(p.size(), 0.0);
    const std::size_t m = p.size();
    if (m == 0) return out;

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] < p[b]; });

    double running = 1.0;
    for (std::size_t rank = m; rank >= 1; --rank) {
        const std::size_t i = order[rank - 1];
        const double q = p[i] * static_cast<double>(m) / static_cast<double>(rank);
        running = std::min(running, q);
        out.adjusted[i] = std::min(1.0, std::max(p[i], running));
    }
    return out;
}

}  // namespace lcr::stat
