#pragma once

#include "lcr/dataset.hpp"

#include <string>
#include <vector>

namespace lcr::stat {

struct StepwiseStep {
    std::string variable;
    double p_value = 1.0;
};

struct StepwiseResult {
    std::vector<std::string> selected;
    std::vector<StepwiseStep> steps;
    std::vector<std::string> warnings;
};

inline constexpr double kDefaultAlphaEnter = 0.05;

// Greedy forward selection on partial t-test p-values. Ties go to the
// earlier candidate in `candidates`.
StepwiseResult stepwise_forward(const Dataset& d, const std::string& response,
                                const std::vector<std::string>& candidates,
                                double alpha_enter = kDefaultAlphaEnter);

}  // namespace lcr::stat
