#ifndef OLCF_MONTECARLO_HPP
#define OLCF_MONTECARLO_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "olcf/exact.hpp"
#include "olcf/metrics.hpp"
#include "olcf/types.hpp"

namespace olcf {

struct SimConfig {
    int n_backers;
    int target_count;
    QualityState state;
    ExpertnessMatrix em;
    LearningMode mode;
    long long replications = 50000;
    std::uint64_t seed = 0;
    double service_fee_rate = 1.0;
    // Share the signal streams between the OL and NL runs of a comparison
    // pair (decisions still draw from mode-specific streams).
    bool common_random_numbers = true;
};

/// Point estimates of every metric from R simulated campaigns, with
/// delta-method standard errors for the product-form metrics. With a single
/// replication the standard errors are reported as +infinity.
struct SimEstimates {
    double mean_n1 = 0, mean_n2 = 0;
    double se_mean_n1 = 0, se_mean_n2 = 0;
    double success1_freq = 0, success2_freq = 0;
    double se_success1 = 0, se_success2 = 0;
    double contentedness = 0, se_contentedness = 0;
    double profit = 0, se_profit = 0;
    double effectiveness = 0, se_effectiveness = 0;
    long long replications_used = 0;
};

/// Simulate one campaign: sequential backers draw signals from the true
/// state, decide by the pledge distribution of their posterior (OL) or of
/// their signal-only posterior (NL), and under OL the public history
/// likelihood absorbs each decision. The history vector is renormalized
/// after every update, which leaves all posteriors unchanged and keeps the
/// recursion safe for any backer count. O(1) work per backer.
std::pair<int, int> simulate_path(const SimConfig& cfg, long long replication);

SimEstimates estimate_metrics(const SimConfig& cfg);

struct Figure9Point {
    int n_backers;
    int target_count;
    QualityState state;
    double delta_effectiveness;  // OL estimate minus NL estimate, averaged
                                 // over the 25 expertness systems
};

/// Large-system experiment: half/half expertness systems over all accuracy
/// pairs in {0.55, 0.65, 0.75, 0.85, 0.95}^2, quality states (1,1), (1,0),
/// (0,0), and one effectiveness delta per (target, state).
std::vector<Figure9Point> figure9_experiment(int n_backers,
                                             const std::vector<int>& targets,
                                             long long replications, std::uint64_t seed,
                                             bool common_random_numbers = true);

namespace detail {

/// Exact integer sums over replications; merging is order-independent, so
/// estimates are bitwise identical for any worker count.
struct CountSums {
    std::uint64_t n1 = 0, n2 = 0;
    std::uint64_t n1sq = 0, n2sq = 0, n1n2 = 0;
    std::uint64_t b1 = 0, b2 = 0, b1b2 = 0;
    std::uint64_t n1b1 = 0, n1b2 = 0, n2b1 = 0, n2b2 = 0;

    void add(int n1v, int n2v, bool hit1, bool hit2);
    CountSums& operator+=(const CountSums& o);
};

CountSums accumulate_counts(const SimConfig& cfg, long long first, long long count);
CountSums accumulate_counts_parallel(const SimConfig& cfg, int max_threads);

/// Joint histogram of (n1, n2) over R replications, as raw counts.
std::vector<std::uint64_t> count_histogram(const SimConfig& cfg, int max_threads);

SimEstimates estimates_from(const CountSums& s, const SimConfig& cfg);

}  // namespace detail

}  // namespace olcf

#endif
