#include "seqmct/sources.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace seqmct {

BernoulliOracle::BernoulliOracle(PValueVector pstar, std::uint64_t seed)
    : pstar_(std::move(pstar)) {
    validate_pvalues(pstar_);
    streams_.reserve(pstar_.size());
    for (std::size_t i = 0; i < pstar_.size(); ++i) {
        streams_.emplace_back(substream_seed(seed, i));
    }
}

std::optional<std::uint64_t> BernoulliOracle::draw(std::size_t hypothesis,
                                                   std::uint64_t count) {
    SplitMix64& rng = streams_[hypothesis];
    const double p = pstar_[hypothesis];
    std::uint64_t ones = 0;
    for (std::uint64_t j = 0; j < count; ++j) {
        if (rng.next_double() < p) ++ones;
    }
    return ones;
}

PermutationSource::PermutationSource(std::vector<std::vector<double>> data,
                                     std::vector<int> labels, std::uint64_t seed)
    : data_(std::move(data)), labels_(std::move(labels)) {
    if (data_.empty()) throw std::invalid_argument("permutation source: empty matrix");
    const std::size_t n_obs = labels_.size();
    std::size_t n0 = 0;
    for (int lab : labels_) {
        if (lab != 0 && lab != 1) {
            throw std::invalid_argument("permutation source: labels must be 0 or 1");
        }
        if (lab == 0) ++n0;
    }
    if (n0 == 0 || n0 == n_obs) {
        throw std::invalid_argument("permutation source: both groups must be nonempty");
    }
    group0_size_ = n0;

    t_obs_.reserve(data_.size());
    for (const auto& row : data_) {
        if (row.size() != n_obs) {
            throw std::invalid_argument(
                "permutation source: row length does not match label count");
        }
        double sum0 = 0.0, sum1 = 0.0;
        for (std::size_t j = 0; j < n_obs; ++j) {
            (labels_[j] == 0 ? sum0 : sum1) += row[j];
        }
        t_obs_.push_back(std::fabs(sum0 / static_cast<double>(n0) -
                                   sum1 / static_cast<double>(n_obs - n0)));
    }

    streams_.reserve(data_.size());
    scratch_.resize(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) {
        streams_.emplace_back(substream_seed(seed, i));
        scratch_[i].resize(n_obs);
        std::iota(scratch_[i].begin(), scratch_[i].end(), 0);
    }
}

std::optional<std::uint64_t> PermutationSource::draw(std::size_t hypothesis,
                                                     std::uint64_t count) {
    const auto& row = data_[hypothesis];
    SplitMix64& rng = streams_[hypothesis];
    auto& idx = scratch_[hypothesis];
    const std::size_t n_obs = row.size();
    const std::size_t n0 = group0_size_;
    const double total = std::accumulate(row.begin(), row.end(), 0.0);

    std::uint64_t ones = 0;
    for (std::uint64_t rep = 0; rep < count; ++rep) {
        // Partial Fisher-Yates: a uniformly random group-0 subset of size n0.
        double sum0 = 0.0;
        for (std::size_t j = 0; j < n0; ++j) {
            const std::size_t pick =
                j + static_cast<std::size_t>(rng.next_below(n_obs - j));
            std::swap(idx[j], idx[pick]);
            sum0 += row[idx[j]];
        }
        const double stat = std::fabs(sum0 / static_cast<double>(n0) -
                                      (total - sum0) / static_cast<double>(n_obs - n0));
        if (stat >= t_obs_[hypothesis]) ++ones;
    }
    return ones;
}

std::optional<std::uint64_t> FixedSource::draw(std::size_t hypothesis,
                                               std::uint64_t count) {
    const auto& seq = indicators_[hypothesis];
    std::size_t& pos = pos_[hypothesis];
    if (pos + count > seq.size()) return std::nullopt;
    std::uint64_t ones = 0;
    for (std::uint64_t j = 0; j < count; ++j) ones += seq[pos + j] != 0;
    pos += count;
    return ones;
}

}  // namespace seqmct
