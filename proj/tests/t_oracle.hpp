#pragma once

// Test-only oracle: two-sided Student-t p-value by direct Simpson
// integration of the density. Deliberately shares no code with the
// incomplete-beta implementation it checks.

#include <cmath>
#include <numbers>

namespace cvxs::testing {

inline double t_density(double x, double df) {
    const double log_c = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                         0.5 * std::log(df * std::numbers::pi);
    return std::exp(log_c - (df + 1.0) / 2.0 * std::log1p(x * x / df));
}

inline double t_two_sided_p_by_integration(double t, double df) {
    const double lo = std::abs(t);
    const double hi = lo + 60.0; // tail mass beyond is far below 1e-12 here
    const int n = 200000;        // even
    const double h = (hi - lo) / n;
    double sum = t_density(lo, df) + t_density(hi, df);
    for (int i = 1; i < n; ++i) {
        sum += t_density(lo + i * h, df) * (i % 2 == 0 ? 2.0 : 4.0);
    }
    return 2.0 * sum * h / 3.0;
}

} // namespace cvxs::testing
