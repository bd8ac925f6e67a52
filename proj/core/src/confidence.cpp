#include "seqmct/confidence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqmct {

void validate_spending(const SpendingConfig& cfg) {
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
        throw std::invalid_argument("spending epsilon must be in (0,1)");
    }
    if (!(cfg.r > 0.0)) throw std::invalid_argument("spending rate r must be > 0");
    if (cfg.m < 1) throw std::invalid_argument("hypothesis count m must be >= 1");
}

namespace {

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
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
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("incomplete beta requires a > 0 and b > 0");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("incomplete beta requires x in [0,1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    // Symmetry switch keeps the continued fraction convergent.
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double beta_quantile(double a, double b, double prob) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("beta_quantile requires a > 0 and b > 0");
    }
    if (!(prob >= 0.0 && prob <= 1.0)) {
        throw std::invalid_argument("beta_quantile requires prob in [0,1]");
    }
    if (prob == 0.0) return 0.0;
    if (prob == 1.0) return 1.0;

    const double lbeta = log_beta(a, b);
    double lo = 0.0, hi = 1.0;
    double x = a / (a + b);  // start at the mean

    // Newton iterations safeguarded by a shrinking bisection bracket.
    for (int iter = 0; iter < 200; ++iter) {
        const double f = regularized_incomplete_beta(a, b, x) - prob;
        if (f > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        if (hi - lo < 1e-14) break;

        double next;
        const double log_pdf =
            (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lbeta;
        if (log_pdf > -700.0) {
            next = x - f / std::exp(log_pdf);
        } else {
            next = std::numeric_limits<double>::quiet_NaN();
        }
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) < 1e-15 && std::fabs(f) < 1e-15) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

Interval clopper_pearson(std::uint64_t S, std::uint64_t k, double rho) {
    if (k == 0) throw std::invalid_argument("clopper_pearson requires k >= 1");
    if (S > k) throw std::invalid_argument("clopper_pearson requires S <= k");
    if (!(rho > 0.0 && rho < 0.5)) {
        throw std::invalid_argument("clopper_pearson requires rho in (0, 0.5)");
    }

    const double kd = static_cast<double>(k);
    if (S == 0) return {0.0, 1.0 - std::pow(rho, 1.0 / kd)};
    if (S == k) return {std::pow(rho, 1.0 / kd), 1.0};

    const double Sd = static_cast<double>(S);
    const double lo = beta_quantile(Sd, kd - Sd + 1.0, rho);
    const double hi = beta_quantile(Sd + 1.0, kd - Sd, 1.0 - rho);
    return {lo, hi};
}

double spending_eta(std::uint64_t k, const SpendingConfig& cfg) {
    validate_spending(cfg);
    const double kd = static_cast<double>(k);
    return kd * cfg.epsilon / (kd + cfg.r);
}

Interval interval_fn(std::uint64_t S, std::uint64_t k, std::uint64_t delta,
                     const SpendingConfig& cfg) {
    if (delta < 1 || delta > k) {
        throw std::invalid_argument("interval_fn requires 1 <= delta <= k");
    }
    if (S > k) throw std::invalid_argument("interval_fn requires S <= k");
    const double rho = (spending_eta(k, cfg) - spending_eta(k - delta, cfg)) /
                       (2.0 * static_cast<double>(cfg.m));
    if (!(rho > 0.0)) {
        throw std::invalid_argument("interval_fn: degenerate spending (rho = 0)");
    }
    return clopper_pearson(S, k, rho);
}

}  // namespace seqmct
