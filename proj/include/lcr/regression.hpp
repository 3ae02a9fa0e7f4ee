#pragma once

#include "lcr/matrix.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lcr::stat {

// Simple linear regression y = intercept + slope * x.
//
// When the residual sum of squares vanishes (`perfect_fit`), standard errors
// are reported as 0 and the t statistics / p-values are left empty.
struct SlrFit {
    std::size_t n = 0;
    std::size_t df = 0;
    double intercept = 0.0;
    double se_intercept = 0.0;
    std::optional<double> t_intercept;
    std::optional<double> p_intercept;
    double slope = 0.0;
    double se_slope = 0.0;
    std::optional<double> t_slope;
    std::optional<double> p_slope;
    double r2 = 0.0;
    double rss = 0.0;
    bool perfect_fit = false;
};

SlrFit slr_fit(std::span<const double> x, std::span<const double> y);

struct OlsFit {
    std::vector<std::string> names;
    std::vector<double> coefficients;
    std::vector<double> se;
    std::vector<double> t;
    std::vector<double> p;
    std::vector<double> residuals;
    double r2 = 0.0;
    double rss = 0.0;
    std::size_t df_residual = 0;
};

// Least squares via Householder QR. `X` carries its own intercept column.
// Throws SingularDesign when X is numerically rank deficient.
OlsFit ols_fit(const Matrix& X, std::span<const double> y, const std::vector<std::string>& names = {});

}  // namespace lcr::stat
