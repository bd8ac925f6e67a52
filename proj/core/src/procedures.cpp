#include "seqmct/procedures.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace seqmct {

void validate_pvalues(const PValueVector& p) {
    if (p.empty()) throw std::invalid_argument("p-value vector must be nonempty");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
            throw std::invalid_argument("p-value out of [0,1] at index " +
                                        std::to_string(i + 1));
        }
    }
}

void validate_procedure(const ProcedureSpec& spec) {
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
        throw std::invalid_argument("procedure threshold alpha must be in (0,1)");
    }
}

namespace {

// Indices 0..m-1 sorted by (value, index); the stable tie-break.
std::vector<std::size_t> order_by_value(const PValueVector& p) {
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (p[a] != p[b]) return p[a] < p[b];
        return a < b;
    });
    return order;
}

}  // namespace

std::vector<std::size_t> ranks(const PValueVector& p) {
    validate_pvalues(p);
    const auto order = order_by_value(p);
    std::vector<std::size_t> rank(p.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;
    return rank;
}

IndexSet bh_classify(const PValueVector& p, double alpha) {
    validate_pvalues(p);
    const std::size_t m = p.size();
    const auto order = order_by_value(p);

    std::size_t cutoff = 0;  // largest i with p_(i) <= i*alpha/m
    for (std::size_t i = m; i >= 1; --i) {
        if (p[order[i - 1]] <=
            static_cast<double>(i) * alpha / static_cast<double>(m)) {
            cutoff = i;
            break;
        }
    }

    IndexSet rejected(order.begin(), order.begin() + cutoff);
    std::sort(rejected.begin(), rejected.end());
    return rejected;
}

IndexSet bonferroni_classify(const PValueVector& p, double alpha) {
    validate_pvalues(p);
    const double threshold = alpha / static_cast<double>(p.size());
    IndexSet rejected;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= threshold) rejected.push_back(i);
    }
    return rejected;
}

IndexSet classify(const ProcedureSpec& spec, const PValueVector& p) {
    validate_procedure(spec);
    switch (spec.kind) {
        case ProcedureKind::BenjaminiHochberg:
            return bh_classify(p, spec.alpha);
        case ProcedureKind::Bonferroni:
            return bonferroni_classify(p, spec.alpha);
    }
    throw std::logic_error("unknown procedure kind");
}

}  // namespace seqmct
