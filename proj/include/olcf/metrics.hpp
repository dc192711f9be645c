#ifndef OLCF_METRICS_HPP
#define OLCF_METRICS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "olcf/exact.hpp"
#include "olcf/types.hpp"

namespace olcf {

enum class MetricKind { Contentedness, Success1, Success2, Profit, Effectiveness };

constexpr std::array<MetricKind, 5> kAllMetrics{
    MetricKind::Contentedness, MetricKind::Success1, MetricKind::Success2,
    MetricKind::Profit, MetricKind::Effectiveness};

std::string metric_name(MetricKind m);

/// All-or-nothing campaign parameters shared by the platform metrics.
struct FundingConfig {
    int target_count;              // pledges required for a project to fund
    double service_fee_rate = 1.0; // gamma
    int n_backers = 2;
};

/// Expected number of backers with no post-campaign regret.
double contentedness(const OutcomePMF& pmf, QualityState state);

/// P(n_project >= target).
double success_probability(const OutcomePMF& pmf, int project, const FundingConfig& cfg);

/// gamma * sum_i E[n_i] * success_i — the definitional product of the
/// unconditional expectation and the success probability.
double platform_profit(const OutcomePMF& pmf, const FundingConfig& cfg);

/// Signed funding-allocation measure: funded pledges count positively for
/// high-quality projects and negatively for low-quality ones.
double platform_effectiveness(const OutcomePMF& pmf, QualityState state,
                              const FundingConfig& cfg);

double metric_value(MetricKind m, const OutcomePMF& pmf, QualityState state,
                    const FundingConfig& cfg);

/// OL minus NL value of one metric from exact outcome distributions.
double impact_delta(MetricKind m, QualityState state, const ExpertnessMatrix& em,
                    const FundingConfig& cfg);

/// Cell-centered accuracy grid strictly inside (0.5, 1):
/// 0.5 + (k + 1/2) * step for k = 0, 1, ...
std::vector<double> interior_grid(double step);

struct ImpactCell {
    std::optional<double> max_improvement;  // largest delta over {delta >= 0}
    std::optional<double> max_harm;         // smallest delta over {delta < 0}
    double average_impact = 0.0;            // uniform-expertness mean of delta
    double improvement_fraction = 0.0;      // |{delta >= 0}| / grid size
};

/// Improvement/harm potentials and average impact of OL against NL for every
/// (metric, quality state) over a backer-expertness grid, two-backer system.
class ImpactReport {
public:
    ImpactReport(double grid_step, const FundingConfig& cfg)
        : grid_step_(grid_step), cfg_(cfg) {}

    const ImpactCell& cell(MetricKind m, QualityState state) const {
        return cells_[static_cast<std::size_t>(m)]
                     [static_cast<std::size_t>(state.index())];
    }
    ImpactCell& cell(MetricKind m, QualityState state) {
        return cells_[static_cast<std::size_t>(m)]
                     [static_cast<std::size_t>(state.index())];
    }
    double grid_step() const { return grid_step_; }
    const FundingConfig& config() const { return cfg_; }

private:
    double grid_step_;
    FundingConfig cfg_;
    std::array<std::array<ImpactCell, 4>, 5> cells_{};
};

/// Evaluate impact_delta for every metric and state over the interior grid
/// of (p1, p2) backer accuracies. The average uses the midpoint rule for the
/// uniform-expertness integral (density 4 on (0.5, 1)^2).
ImpactReport impact_report(const FundingConfig& cfg, double grid_step = 0.005);

/// Per-point deltas of one metric/state pair, for heatmap-style sweeps.
struct SweepPoint {
    double p1, p2, delta;
};
std::vector<SweepPoint> impact_sweep(MetricKind m, QualityState state,
                                     const FundingConfig& cfg, double grid_step);

}  // namespace olcf

#endif
