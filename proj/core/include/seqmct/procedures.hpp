#pragma once

#include <cstddef>
#include <vector>

namespace seqmct {

/// Vector of p-values, every entry in [0, 1]. Hypothesis indices are
/// 0-based internally; documentation and I/O use 1-based indices.
using PValueVector = std::vector<double>;

/// Sorted ascending set of hypothesis indices (0-based).
using IndexSet = std::vector<std::size_t>;

enum class ProcedureKind { BenjaminiHochberg, Bonferroni };

struct ProcedureSpec {
    ProcedureKind kind = ProcedureKind::BenjaminiHochberg;
    double alpha = 0.1;  // in (0, 1)
};

/// Throws std::invalid_argument unless every entry is in [0,1] and m >= 1.
void validate_pvalues(const PValueVector& p);

/// Throws std::invalid_argument unless alpha is in (0, 1).
void validate_procedure(const ProcedureSpec& spec);

/// 1-based ranks of the p-values under ascending order. Ties are broken
/// by ascending original index, so the result is a deterministic
/// permutation of 1..m.
std::vector<std::size_t> ranks(const PValueVector& p);

/// Benjamini-Hochberg step-up procedure: rejects the k smallest p-values
/// where k is the largest index with p_(i) <= i*alpha/m. Values exactly on
/// the threshold line count as rejected.
IndexSet bh_classify(const PValueVector& p, double alpha);

/// Bonferroni correction: rejects every i with p_i <= alpha/m.
IndexSet bonferroni_classify(const PValueVector& p, double alpha);

/// Dispatch over ProcedureSpec.
IndexSet classify(const ProcedureSpec& spec, const PValueVector& p);

}  // namespace seqmct
