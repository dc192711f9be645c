#include "olcf/metrics.hpp"

#include <cmath>

namespace olcf {

std::string metric_name(MetricKind m) {
    switch (m) {
        case MetricKind::Contentedness: return "content";
        case MetricKind::Success1: return "success1";
        case MetricKind::Success2: return "success2";
        case MetricKind::Profit: return "profit";
        case MetricKind::Effectiveness: return "effectiveness";
    }
    return "?";
}

double contentedness(const OutcomePMF& pmf, QualityState state) {
    auto [e1, e2] = pmf.expected_pledges();
    switch (state.index()) {
        case 0: return e1 + e2;                       // (1,1)
        case 1: return e1;                            // (1,0)
        case 2: return e2;                            // (0,1)
        default: return pmf.n_backers() - (e1 + e2);  // (0,0)
    }
}

double success_probability(const OutcomePMF& pmf, int project, const FundingConfig& cfg) {
    return pmf.tail_probability(project, cfg.target_count);
}

double platform_profit(const OutcomePMF& pmf, const FundingConfig& cfg) {
    auto [e1, e2] = pmf.expected_pledges();
    return cfg.service_fee_rate * (e1 * success_probability(pmf, 1, cfg) +
                                   e2 * success_probability(pmf, 2, cfg));
}

double platform_effectiveness(const OutcomePMF& pmf, QualityState state,
                              const FundingConfig& cfg) {
    auto [e1, e2] = pmf.expected_pledges();
    double t1 = e1 * success_probability(pmf, 1, cfg) * (state.high(1) ? 1.0 : -1.0);
    double t2 = e2 * success_probability(pmf, 2, cfg) * (state.high(2) ? 1.0 : -1.0);
    return t1 + t2;
}

double metric_value(MetricKind m, const OutcomePMF& pmf, QualityState state,
                    const FundingConfig& cfg) {
    switch (m) {
        case MetricKind::Contentedness: return contentedness(pmf, state);
        case MetricKind::Success1: return success_probability(pmf, 1, cfg);
        case MetricKind::Success2: return success_probability(pmf, 2, cfg);
        case MetricKind::Profit: return platform_profit(pmf, cfg);
        case MetricKind::Effectiveness: return platform_effectiveness(pmf, state, cfg);
    }
    return 0.0;
}

double impact_delta(MetricKind m, QualityState state, const ExpertnessMatrix& em,
                    const FundingConfig& cfg) {
    OutcomePMF ol = outcome_distribution(state, em, LearningMode::OL);
    OutcomePMF nl = outcome_distribution(state, em, LearningMode::NL);
    return metric_value(m, ol, state, cfg) - metric_value(m, nl, state, cfg);
}

std::vector<double> interior_grid(double step) {
    if (!(step > 0.0) || step > 0.05)
        throw std::invalid_argument("grid step must lie in (0, 0.05]");
    double ratio = 0.5 / step;
    long long count = std::llround(ratio);
    if (std::fabs(ratio - static_cast<double>(count)) > 1e-9)
        count = static_cast<long long>(std::ceil(ratio));
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(count));
    for (long long k = 0; k < count; ++k) {
        double p = 0.5 + (static_cast<double>(k) + 0.5) * step;
        if (p < 1.0 - 1e-12) g.push_back(p);
    }
    return g;
}

ImpactReport impact_report(const FundingConfig& cfg, double grid_step) {
    const std::vector<double> grid = interior_grid(grid_step);
    ImpactReport rep(grid_step, cfg);

    struct Acc {
        std::optional<double> best, worst;
        double sum = 0.0;
        long long improve = 0, total = 0;
    };
    std::array<std::array<Acc, 4>, 5> acc{};

    for (double p1 : grid) {
        for (double p2 : grid) {
            ExpertnessMatrix em = ExpertnessMatrix::backer_symmetric({p1, p2});
            auto ol = outcome_distribution_all_states(em, LearningMode::OL);
            auto nl = outcome_distribution_all_states(em, LearningMode::NL);
            for (auto state : QualityState::all()) {
                auto vi = static_cast<std::size_t>(state.index());
                for (MetricKind m : kAllMetrics) {
                    double d = metric_value(m, ol[vi], state, cfg) -
                               metric_value(m, nl[vi], state, cfg);
                    Acc& a = acc[static_cast<std::size_t>(m)][vi];
                    a.sum += d;
                    ++a.total;
                    if (d >= 0.0) {
                        ++a.improve;
                        if (!a.best || d > *a.best) a.best = d;
                    } else if (!a.worst || d < *a.worst) {
                        a.worst = d;
                    }
                }
            }
        }
    }

    for (MetricKind m : kAllMetrics)
        for (auto state : QualityState::all()) {
            const Acc& a =
                acc[static_cast<std::size_t>(m)][static_cast<std::size_t>(state.index())];
            ImpactCell& c = rep.cell(m, state);
            c.max_improvement = a.best;
            c.max_harm = a.worst;
            // midpoint rule for the density-4 integral over (0.5,1)^2 reduces
            // to the plain grid mean when the step divides 0.5 evenly
            c.average_impact = a.sum / static_cast<double>(a.total);
            c.improvement_fraction =
                static_cast<double>(a.improve) / static_cast<double>(a.total);
        }
    return rep;
}

std::vector<SweepPoint> impact_sweep(MetricKind m, QualityState state,
                                     const FundingConfig& cfg, double grid_step) {
    const std::vector<double> grid = interior_grid(grid_step);
    std::vector<SweepPoint> out;
    out.reserve(grid.size() * grid.size());
    for (double p1 : grid)
        for (double p2 : grid) {
            ExpertnessMatrix em = ExpertnessMatrix::backer_symmetric({p1, p2});
            out.push_back({p1, p2, impact_delta(m, state, em, cfg)});
        }
    return out;
}

}  // namespace olcf
