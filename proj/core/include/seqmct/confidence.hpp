#pragma once

#include <cstddef>
#include <cstdint>

namespace seqmct {

/// Closed sub-interval of [0, 1].
struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double width() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Parameters of the error-spending sequence eta_k = k*epsilon/(k+r).
struct SpendingConfig {
    double epsilon = 0.01;  // overall error budget, in (0, 1)
    double r = 10000.0;     // spending rate, > 0
    std::size_t m = 1;      // number of hypotheses sharing the budget
};

void validate_spending(const SpendingConfig& cfg);

/// Regularized incomplete beta function I_x(a, b). Exposed for oracles
/// and tests; evaluated by continued fraction (Lentz's method).
double regularized_incomplete_beta(double a, double b, double x);

/// Quantile of the Beta(a, b) distribution: the z with I_z(a, b) = prob,
/// to 1e-12 absolute. Monotone in prob. Throws std::invalid_argument for
/// a <= 0 or b <= 0 or prob outside [0, 1].
double beta_quantile(double a, double b, double prob);

/// Two-sided Clopper-Pearson interval for a binomial proportion from
/// exceedance count S out of k samples, with rho error probability spent
/// per tail (coverage 1 - 2*rho). S = 0 and S = k use the closed forms
/// [0, 1 - rho^(1/k)] and [rho^(1/k), 1].
Interval clopper_pearson(std::uint64_t S, std::uint64_t k, double rho);

/// eta_k = k*epsilon/(k+r); eta_0 = 0, non-decreasing, limit epsilon.
double spending_eta(std::uint64_t k, const SpendingConfig& cfg);

/// The interval function f(S, k, Delta): Clopper-Pearson at
/// rho_k = (eta_k - eta_{k-Delta}) / (2m). Requires 1 <= Delta <= k and
/// a strictly positive rho_k.
Interval interval_fn(std::uint64_t S, std::uint64_t k, std::uint64_t delta,
                     const SpendingConfig& cfg);

}  // namespace seqmct
