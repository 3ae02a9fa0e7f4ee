#include "lcr/distributions.hpp"

#include "lcr/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace lcr::stat {

namespace {

constexpr int kMaxIterations = 300;
constexpr double kTolerance = 1e-14;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kTolerance) break;
    }
    return h;
}

double front_factor(double a, double b, double x, double y) {
    return std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                    b * std::log(y));
}

}  // namespace

double regularized_beta(double a, double b, double x, double y) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::Domain, "incomplete beta needs a, b > 0");
    if (!(x >= 0.0) || !(x <= 1.0)) throw Error(ErrorKind::Domain, "incomplete beta needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (y == 0.0) return 1.0;
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front_factor(a, b, x, y) * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front_factor(b, a, y, x) * beta_continued_fraction(b, a, y) / b;
}

double regularized_beta(double a, double b, double x) { return regularized_beta(a, b, x, 1.0 - x); }

namespace {

void check_df(double df, const char* what) {
    if (!(df >= 1.0) || !std::isfinite(df)) {
        throw Error(ErrorKind::Domain, std::string(what) + " degrees of freedom must be >= 1");
    }
}

// P(T > |t|) for t >= 0.
double t_upper_tail(double t, double df) {
    const double t2 = t * t;
    if (std::isinf(t2)) return 0.0;
    const double x = df / (df + t2);
    const double y = t2 / (df + t2);
    return 0.5 * regularized_beta(0.5 * df, 0.5, x, y);
}

}  // namespace

double t_cdf(double t, double df) {
    check_df(df, "t");
    if (std::isnan(t)) throw Error(ErrorKind::Domain, "t_cdf of NaN");
    const double tail = t_upper_tail(std::fabs(t), df);
    return t > 0.0 ? 1.0 - tail : tail;
}

double t_two_sided_p(double t, double df) {
    check_df(df, "t");
    if (std::isnan(t)) throw Error(ErrorKind::Domain, "p-value of NaN statistic");
    return std::min(1.0, 2.0 * t_upper_tail(std::fabs(t), df));
}

double t_quantile(double p, double df) {
    check_df(df, "t");
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::Domain, "t quantile needs p in (0, 1)");
    if (p == 0.5) return 0.0;
    double lo = -1.0;
    double hi = 1.0;
    while (t_cdf(lo, df) > p) lo *= 2.0;
    while (t_cdf(hi, df) < p) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, std::fabs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (t_cdf(mid, df) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double f_cdf(double f, double df1, double df2) {
    check_df(df1, "F numerator");
    check_df(df2, "F denominator");
    if (!(f >= 0.0)) throw Error(ErrorKind::Domain, "F statistic must be >= 0");
    if (std::isinf(f)) return 1.0;
    const double x = df1 * f / (df1 * f + df2);
    const double y = df2 / (df1 * f + df2);
    return regularized_beta(0.5 * df1, 0.5 * df2, x, y);
}

double f_sf(double f, double df1, double df2) {
    check_df(df1, "F numerator");
    check_df(df2, "F denominator");
    if (!(f >= 0.0)) throw Error(ErrorKind::Domain, "F statistic must be >= 0");
    if (std::isinf(f)) return 0.0;
    const double x = df1 * f / (df1 * f + df2);
    const double y = df2 / (df1 * f + df2);
    return regularized_beta(0.5 * df2, 0.5 * df1, y, x);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace lcr::stat
