#ifndef OLCF_EXACT_HPP
#define OLCF_EXACT_HPP

#include <utility>
#include <vector>

#include "olcf/model.hpp"
#include "olcf/types.hpp"

namespace olcf {

enum class LearningMode { OL, NL };

using DecisionPath = std::vector<Decision>;

/// Largest backer count handled by exhaustive path enumeration (3^12 paths).
inline constexpr int kMaxExactBackers = 12;

/// Exact joint probability mass over pledge-count pairs (n1, n2), stored
/// densely for 0 <= n1, n2 <= N.
class OutcomePMF {
public:
    explicit OutcomePMF(int n_backers)
        : n_(n_backers),
          mass_(static_cast<std::size_t>((n_backers + 1) * (n_backers + 1)), 0.0) {}

    int n_backers() const { return n_; }
    double mass(int n1, int n2) const { return mass_[idx(n1, n2)]; }
    double& mass(int n1, int n2) { return mass_[idx(n1, n2)]; }

    double total() const;
    std::pair<double, double> expected_pledges() const;
    /// P(n_project >= threshold).
    double tail_probability(int project, int threshold) const;
    OutcomePMF swapped() const;

private:
    std::size_t idx(int n1, int n2) const {
        return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n_ + 1) +
               static_cast<std::size_t>(n2);
    }
    int n_;
    std::vector<double> mass_;
};

/// P(path | V) under the chosen learning regime. Under OL each step is
/// conditioned on the running history; under NL every backer acts like a
/// first backer.
double path_probability(const DecisionPath& path, QualityState state,
                        const ExpertnessMatrix& em, LearningMode mode);

/// Exact pmf of (n1, n2): one depth-first pass over all 3^N decision paths,
/// reusing the history likelihood along shared prefixes. Throws
/// EnumerationLimitError beyond kMaxExactBackers.
OutcomePMF outcome_distribution(QualityState state, const ExpertnessMatrix& em,
                                LearningMode mode);

/// Same enumeration, returning the pmfs of all four quality states from a
/// single pass (the path recursion carries all state likelihoods anyway).
std::array<OutcomePMF, 4> outcome_distribution_all_states(const ExpertnessMatrix& em,
                                                          LearningMode mode);

std::pair<double, double> expected_pledges(const OutcomePMF& pmf);

}  // namespace olcf

#endif
