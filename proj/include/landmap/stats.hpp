#pragma once

#include <cstdint>
#include <vector>

namespace landmap {
namespace stats {

// P(X <= k) for X ~ Binomial(n, p), exact summation in log space.
double binomial_cdf(long long k, long long n, double p);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Exact (Clopper-Pearson) two-sided confidence interval for a binomial
// proportion with k successes out of n.
Interval clopper_pearson(long long k, long long n, double confidence = 0.95);

// Largest k with P(Bin(n, p) <= k) <= tail; -1 when even k = 0 exceeds the
// tail. Observed counts at or below this are evidence the true rate is < p.
long long lower_tail_threshold(long long n, double p, double tail);

// Upper regularized incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

// Pearson chi-square goodness-of-fit p-value of observed counts against the
// given cell probabilities (df = cells - 1).
double chi_square_pvalue(const std::vector<long long>& observed,
                         const std::vector<double>& expected_probs);

} // namespace stats
} // namespace landmap
