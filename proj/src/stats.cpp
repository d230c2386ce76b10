#include "landmap/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace landmap {
namespace stats {

double binomial_cdf(long long k, long long n, double p) {
    if (n < 0 || p < 0.0 || p > 1.0) throw std::invalid_argument("binomial_cdf: bad arguments");
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    if (p == 0.0) return 1.0;
    if (p == 1.0) return 0.0; // k < n here
    double sum = 0.0;
    const double logp = std::log(p), logq = std::log1p(-p);
    for (long long i = 0; i <= k; ++i) {
        double logterm = std::lgamma(double(n + 1)) - std::lgamma(double(i + 1)) -
                         std::lgamma(double(n - i + 1)) + double(i) * logp +
                         double(n - i) * logq;
        sum += std::exp(logterm);
    }
    return sum < 1.0 ? sum : 1.0;
}

Interval clopper_pearson(long long k, long long n, double confidence) {
    if (n <= 0 || k < 0 || k > n) throw std::invalid_argument("clopper_pearson: bad arguments");
    const double tail = (1.0 - confidence) / 2.0;
    Interval iv;
    // lower: p with P(X >= k) = tail;  upper: p with P(X <= k) = tail
    if (k == 0) {
        iv.lo = 0.0;
    } else {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (1.0 - binomial_cdf(k - 1, n, mid) > tail ? hi : lo) = mid;
        }
        iv.lo = 0.5 * (lo + hi);
    }
    if (k == n) {
        iv.hi = 1.0;
    } else {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (binomial_cdf(k, n, mid) > tail ? lo : hi) = mid;
        }
        iv.hi = 0.5 * (lo + hi);
    }
    return iv;
}

long long lower_tail_threshold(long long n, double p, double tail) {
    long long best = -1;
    for (long long k = 0; k <= n; ++k) {
        if (binomial_cdf(k, n, p) <= tail)
            best = k;
        else
            break;
    }
    return best;
}

namespace {

// Q(a, x) by series for x < a+1, continued fraction (modified Lentz) otherwise.
double gamma_q_impl(double a, double x) {
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        double logp = -x + a * std::log(x) - std::lgamma(a);
        return 1.0 - sum * std::exp(logp);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("regularized_gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    return std::min(1.0, std::max(0.0, gamma_q_impl(a, x)));
}

double chi_square_pvalue(const std::vector<long long>& observed,
                         const std::vector<double>& expected_probs) {
    if (observed.size() != expected_probs.size() || observed.size() < 2)
        throw std::invalid_argument("chi_square_pvalue: need matching cells (>= 2)");
    long long total = 0;
    for (long long c : observed) total += c;
    if (total <= 0) throw std::invalid_argument("chi_square_pvalue: empty sample");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double expected = expected_probs[i] * double(total);
        if (expected <= 0.0) throw std::invalid_argument("chi_square_pvalue: zero expected cell");
        double diff = double(observed[i]) - expected;
        stat += diff * diff / expected;
    }
    double df = double(observed.size() - 1);
    return regularized_gamma_q(df / 2.0, stat / 2.0);
}

} // namespace stats
} // namespace landmap
