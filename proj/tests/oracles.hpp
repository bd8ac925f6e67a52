// Independent oracles used by the unit and acceptance suites. Everything
// here deliberately avoids the library's own numerical paths: the beta CDF
// is integrated by quadrature, binomial tails are summed term by term, and
// the step-up procedure is re-derived by trying every cutoff.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "seqmct/confidence.hpp"
#include "seqmct/procedures.hpp"

namespace oracles {

// Beta(a,b) CDF by composite Simpson quadrature of the density.
inline double beta_cdf_quadrature(double a, double b, double x, int panels = 20000) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) x = 1.0;
    const double log_norm =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    auto density = [&](double t) {
        if (t <= 0.0 || t >= 1.0) {
            // Endpoint limits for a,b >= 1; the integrand is only evaluated
            // at interior nodes for the parameters used in the tests.
            return (a > 1.0 && b > 1.0) ? 0.0
                                        : std::exp(log_norm + (a - 1.0) * std::log(std::max(t, 1e-300)) +
                                                   (b - 1.0) * std::log1p(-std::min(t, 1.0 - 1e-16)));
        }
        return std::exp(log_norm + (a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t));
    };
    const double h = x / panels;
    double sum = density(0.0) + density(x);
    for (int i = 1; i < panels; ++i) {
        sum += density(i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

// Inverts the quadrature CDF by bisection.
inline double beta_quantile_quadrature(double a, double b, double prob,
                                       double tol = 1e-10) {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (beta_cdf_quadrature(a, b, mid) < prob) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// log P(N = s) for N ~ Binomial(k, p).
inline double binomial_log_pmf(std::uint64_t s, std::uint64_t k, double p) {
    if (p <= 0.0) return s == 0 ? 0.0 : -INFINITY;
    if (p >= 1.0) return s == k ? 0.0 : -INFINITY;
    const double kd = static_cast<double>(k), sd = static_cast<double>(s);
    return std::lgamma(kd + 1.0) - std::lgamma(sd + 1.0) - std::lgamma(kd - sd + 1.0) +
           sd * std::log(p) + (kd - sd) * std::log1p(-p);
}

// P(N <= s), direct summation.
inline double binomial_cdf(std::uint64_t s, std::uint64_t k, double p) {
    double total = 0.0;
    for (std::uint64_t j = 0; j <= s && j <= k; ++j) {
        total += std::exp(binomial_log_pmf(j, k, p));
    }
    return std::min(total, 1.0);
}

// P(N >= s).
inline double binomial_upper_tail(std::uint64_t s, std::uint64_t k, double p) {
    double total = 0.0;
    for (std::uint64_t j = s; j <= k; ++j) {
        total += std::exp(binomial_log_pmf(j, k, p));
    }
    return std::min(total, 1.0);
}

// Clopper-Pearson by direct binomial-tail inversion:
//   lower = smallest p with P(N >= S | p) >= rho
//   upper = largest  p with P(N <= S | p) >= rho
inline seqmct::Interval clopper_pearson_by_tail_inversion(std::uint64_t S,
                                                          std::uint64_t k,
                                                          double rho,
                                                          double tol = 1e-11) {
    double lower = 0.0;
    if (S > 0) {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (binomial_upper_tail(S, k, mid) >= rho) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lower = 0.5 * (lo + hi);
    }
    double upper = 1.0;
    if (S < k) {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (binomial_cdf(S, k, mid) >= rho) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        upper = 0.5 * (lo + hi);
    }
    return {lower, upper};
}

// Step-up procedure by trying every candidate cutoff directly.
inline seqmct::IndexSet bh_by_cutoff_search(const seqmct::PValueVector& p,
                                            double alpha) {
    const std::size_t m = p.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    std::size_t best = 0;
    for (std::size_t k = 1; k <= m; ++k) {
        if (p[order[k - 1]] <= static_cast<double>(k) * alpha / static_cast<double>(m)) {
            best = k;
        }
    }
    seqmct::IndexSet rejected(order.begin(), order.begin() + best);
    std::sort(rejected.begin(), rejected.end());
    return rejected;
}

}  // namespace oracles
