#pragma once

#include <span>
#include <vector>

namespace lcr::stat {

struct AdjustedPValues {
    std::vector<double> raw;
    std::vector<double> adjusted;  // same order as raw
};

// Benjamini-Hochberg step-up adjustment.
AdjustedPValues bh_adjust(std::span<const double> p);

}  // namespace lcr::stat
