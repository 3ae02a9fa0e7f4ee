#include "lcr/regression.hpp"

#include "lcr/distributions.hpp"
#include "lcr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lcr::stat {

namespace {

// RSS counts as zero when it is at rounding level relative to the response spread.
constexpr double kPerfectFitRelTol = 1e-24;

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

SlrFit slr_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorKind::Domain, "slr_fit: x and y lengths differ");
    }
    const std::size_t n = x.size();
    if (n < 3) {
        throw Error(ErrorKind::InsufficientData,
                    "simple regression needs at least 3 points, have " + std::to_string(n));
    }
    const double xbar = mean_of(x);
    const double ybar = mean_of(y);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - xbar;
        const double dy = y[i] - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::DegeneratePredictor, "predictor is constant");

    SlrFit fit;
    fit.n = n;
    fit.df = n - 2;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        rss += r * r;
    }
    fit.perfect_fit = rss <= kPerfectFitRelTol * syy;
    fit.rss = fit.perfect_fit ? 0.0 : rss;
    fit.r2 = syy > 0.0 ? std::clamp(1.0 - fit.rss / syy, 0.0, 1.0) : 0.0;
    if (fit.perfect_fit) return fit;

    const double s2 = rss / static_cast<double>(fit.df);
    const double nd = static_cast<double>(n);
    fit.se_slope = std::sqrt(s2 / sxx);
    fit.se_intercept = std::sqrt(s2 * (1.0 / nd + xbar * xbar / sxx));
    const double df = static_cast<double>(fit.df);
    fit.t_slope = fit.slope / fit.se_slope;
    fit.t_intercept = fit.intercept / fit.se_intercept;
    fit.p_slope = t_two_sided_p(*fit.t_slope, df);
    fit.p_intercept = t_two_sided_p(*fit.t_intercept, df);
    return fit;
}

OlsFit ols_fit(const Matrix& X, std::span<const double> y, const std::vector<std::string>& names) {
    const std::size_t n = X.rows();
    const std::size_t p = X.cols();
    if (y.size() != n) throw Error(ErrorKind::Domain, "ols_fit: X rows and y length differ");
    if (p == 0) throw Error(ErrorKind::Domain, "ols_fit: design has no columns");
    if (!names.empty() && names.size() != p) {
        throw Error(ErrorKind::Domain, "ols_fit: name count does not match design columns");
    }
    // p counts the intercept column, so this is n > (predictors) + 1.
    if (n <= p) {
        throw Error(ErrorKind::InsufficientData, "ols_fit: need more rows (" + std::to_string(n) +
                                                     ") than coefficients (" + std::to_string(p) + ")");
    }

    Matrix a = X;
    std::vector<double> col_norm(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < n; ++i) col_norm[j] += X(i, j) * X(i, j);
        col_norm[j] = std::sqrt(col_norm[j]);
    }
    std::vector<double> qty(y.begin(), y.end());
    std::vector<double> v(n);

    for (std::size_t j = 0; j < p; ++j) {
        double norm = 0.0;
        for (std::size_t i = j; i < n; ++i) norm += a(i, j) * a(i, j);
        norm = std::sqrt(norm);
        if (!(norm > 1e-10 * col_norm[j])) {
            throw Error(ErrorKind::SingularDesign, "design matrix is rank deficient at column " +
                                                       (names.empty() ? std::to_string(j) : names[j]));
        }
        const double alpha = a(j, j) > 0.0 ? -norm : norm;
        for (std::size_t i = j; i < n; ++i) v[i] = a(i, j);
        v[j] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = j; i < n; ++i) vnorm2 += v[i] * v[i];
        for (std::size_t c = j; c < p; ++c) {
            double dot = 0.0;
            for (std::size_t i = j; i < n; ++i) dot += v[i] * a(i, c);
            const double s = 2.0 * dot / vnorm2;
            for (std::size_t i = j; i < n; ++i) a(i, c) -= s * v[i];
        }
        double dot = 0.0;
        for (std::size_t i = j; i < n; ++i) dot += v[i] * qty[i];
        const double s = 2.0 * dot / vnorm2;
        for (std::size_t i = j; i < n; ++i) qty[i] -= s * v[i];
    }

    OlsFit fit;
    fit.names = names;
    if (fit.names.empty()) {
        for (std::size_t j = 0; j < p; ++j) fit.names.push_back("x" + std::to_string(j));
    }
    fit.coefficients.assign(p, 0.0);
    for (std::size_t jj = p; jj-- > 0;) {
        double s = qty[jj];
        for (std::size_t c = jj + 1; c < p; ++c) s -= a(jj, c) * fit.coefficients[c];
        fit.coefficients[jj] = s / a(jj, jj);
    }

    // (X'X)^-1 = R^-1 R^-T
    Matrix rinv(p, p);
    for (std::size_t c = 0; c < p; ++c) {
        rinv(c, c) = 1.0 / a(c, c);
        for (std::size_t r = c; r-- > 0;) {
            double s = 0.0;
            for (std::size_t k = r + 1; k <= c; ++k) s += a(r, k) * rinv(k, c);
            rinv(r, c) = -s / a(r, r);
        }
    }

    fit.residuals.resize(n);
    const double ybar = mean_of(y);
    double sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = 0.0;
        for (std::size_t j = 0; j < p; ++j) pred += X(i, j) * fit.coefficients[j];
        fit.residuals[i] = y[i] - pred;
        fit.rss += fit.residuals[i] * fit.residuals[i];
        sst += (y[i] - ybar) * (y[i] - ybar);
    }
    fit.df_residual = n - p;
    fit.r2 = sst > 0.0 ? std::clamp(1.0 - fit.rss / sst, 0.0, 1.0) : 0.0;

    const double s2 = fit.rss / static_cast<double>(fit.df_residual);
    const double df = static_cast<double>(fit.df_residual);
    for (std::size_t j = 0; j < p; ++j) {
        double var = 0.0;
        for (std::size_t k = j; k < p; ++k) var += rinv(j, k) * rinv(j, k);
        const double se = std::sqrt(s2 * var);
        fit.se.push_back(se);
        const double b = fit.coefficients[j];
        if (se > 0.0) {
            fit.t.push_back(b / se);
            fit.p.push_back(t_two_sided_p(b / se, df));
        } else {
            fit.t.push_back(b == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), b));
            fit.p.push_back(b == 0.0 ? 1.0 : 0.0);
        }
    }
    return fit;
}

}  // namespace lcr::stat
