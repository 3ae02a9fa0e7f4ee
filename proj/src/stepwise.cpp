#include "lcr/stepwise.hpp"

#include "lcr/error.hpp"
#include "lcr/regression.hpp"

#include <algorithm>
#include <optional>

namespace lcr::stat {

StepwiseResult stepwise_forward(const Dataset& d, const std::string& response,
                                const std::vector<std::string>& candidates, double alpha_enter) {
    if (candidates.empty()) throw Error(ErrorKind::Domain, "stepwise: no candidate variables");
    if (std::find(candidates.begin(), candidates.end(), response) != candidates.end()) {
        throw Error(ErrorKind::Domain, "stepwise: response '" + response + "' is also a candidate");
    }
    if (!(alpha_enter > 0.0 && alpha_enter <= 1.0)) {
        throw Error(ErrorKind::Domain, "stepwise: alpha_enter must be in (0, 1]");
    }

    const auto y = d.column(response);
    std::vector<std::vector<double>> cols;
    for (const auto& c : candidates) cols.push_back(d.column(c));

    StepwiseResult result;
    std::vector<std::size_t> chosen;
    std::vector<bool> in_model(candidates.size(), false);

    while (chosen.size() < candidates.size()) {
        std::optional<std::size_t> best;
        double best_p = 1.0;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (in_model[c]) continue;
            const std::size_t p = chosen.size() + 2;
            Matrix X(d.size(), p);
            for (std::size_t i = 0; i < d.size(); ++i) {
                X(i, 0) = 1.0;
                for (std::size_t k = 0; k < chosen.size(); ++k) X(i, k + 1) = cols[chosen[k]][i];
                X(i, p - 1) = cols[c][i];
            }
            try {
                const auto fit = ols_fit(X, y);
                const double pv = fit.p.back();
                if (!best || pv < best_p) {
                    best = c;
                    best_p = pv;
                }
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::SingularDesign && e.kind() != ErrorKind::InsufficientData) throw;
                result.warnings.push_back("stepwise: skipped '" + candidates[c] + "': " + e.what());
            }
        }
        if (!best || !(best_p < alpha_enter)) break;
        chosen.push_back(*best);
        in_model[*best] = true;
        result.selected.push_back(candidates[*best]);
        result.steps.push_back({candidates[*best], best_p});
    }
    return result;
}

}  // namespace lcr::stat
