#pragma once

#include <cstdint>
#include <vector>

#include "seqmct/engine.hpp"
#include "seqmct/procedures.hpp"
#include "seqmct/rng.hpp"

namespace seqmct {

/// Infinite source with known ideal p-values: indicator X_ij ~
/// Bernoulli(pstar_i), independent. Each hypothesis owns a substream
/// derived from (seed, i), so parallel and serial consumption produce the
/// same streams.
class BernoulliOracle final : public SampleSource {
public:
    BernoulliOracle(PValueVector pstar, std::uint64_t seed);

    std::size_t size() const override { return pstar_.size(); }
    std::optional<std::uint64_t> draw(std::size_t hypothesis,
                                      std::uint64_t count) override;

    const PValueVector& pstar() const { return pstar_; }

private:
    PValueVector pstar_;
    std::vector<SplitMix64> streams_;
};

/// Permutation-test source on a data matrix (hypotheses x observations)
/// with binary group labels. The statistic is the magnitude of the
/// difference of group means; each indicator is 1(T_perm >= t_obs) under a
/// fresh uniformly random relabeling.
class PermutationSource final : public SampleSource {
public:
    /// data[i] holds the observations of hypothesis i; labels[j] in {0,1}
    /// assigns observation j to a group. Both groups must be nonempty.
    PermutationSource(std::vector<std::vector<double>> data,
                      std::vector<int> labels, std::uint64_t seed);

    std::size_t size() const override { return data_.size(); }
    std::optional<std::uint64_t> draw(std::size_t hypothesis,
                                      std::uint64_t count) override;

    double observed_statistic(std::size_t hypothesis) const {
        return t_obs_[hypothesis];
    }

private:
    std::vector<std::vector<double>> data_;
    std::vector<int> labels_;
    std::size_t group0_size_ = 0;
    std::vector<double> t_obs_;
    std::vector<SplitMix64> streams_;
    std::vector<std::vector<std::size_t>> scratch_;  // per-hypothesis index buffer
};

/// Wraps a source and counts every indicator drawn; used to cross-check
/// reported effort.
class CountingSource final : public SampleSource {
public:
    explicit CountingSource(SampleSource& inner) : inner_(&inner) {}

    std::size_t size() const override { return inner_->size(); }
    std::optional<std::uint64_t> draw(std::size_t hypothesis,
                                      std::uint64_t count) override {
        auto got = inner_->draw(hypothesis, count);
        if (got) drawn_ += count;
        return got;
    }
    void skip(std::size_t hypothesis, std::uint64_t count) override {
        inner_->skip(hypothesis, count);
        drawn_ += count;
    }

    std::uint64_t drawn() const { return drawn_; }

private:
    SampleSource* inner_;
    std::uint64_t drawn_ = 0;
};

/// Finite source replaying fixed indicator sequences; mostly for tests and
/// for exercising the source-exhausted path.
class FixedSource final : public SampleSource {
public:
    explicit FixedSource(std::vector<std::vector<int>> indicators)
        : indicators_(std::move(indicators)), pos_(indicators_.size(), 0) {}

    std::size_t size() const override { return indicators_.size(); }
    std::optional<std::uint64_t> draw(std::size_t hypothesis,
                                      std::uint64_t count) override;

private:
    std::vector<std::vector<int>> indicators_;
    std::vector<std::size_t> pos_;
};

}  // namespace seqmct
