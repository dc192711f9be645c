#include "olcf/equilibrium.hpp"

namespace olcf {

namespace {

void check_cost(double cost) {
    if (!(cost >= 0.0 && cost <= 1.0))
        throw std::domain_error("development cost must lie in [0, 1]");
}

// Success probabilities S_i(V) for both projects at all four states, for one
// expertness matrix and mode. The matrix does not depend on the state, so
// one enumeration pass per state suffices for every deviation comparison.
struct SuccessTable {
    std::array<double, 4> s1, s2;

    double get(int project, QualityState state) const {
        auto i = static_cast<std::size_t>(state.index());
        return project == 1 ? s1[i] : s2[i];
    }
};

SuccessTable success_table(const ExpertnessMatrix& em, const FundingConfig& cfg,
                           LearningMode mode) {
    SuccessTable t{};
    auto pmfs = outcome_distribution_all_states(em, mode);
    for (auto state : QualityState::all()) {
        auto i = static_cast<std::size_t>(state.index());
        t.s1[i] = success_probability(pmfs[i], 1, cfg);
        t.s2[i] = success_probability(pmfs[i], 2, cfg);
    }
    return t;
}

constexpr QualityState kHH{Quality::High, Quality::High};
constexpr QualityState kHL{Quality::High, Quality::Low};
constexpr QualityState kLH{Quality::Low, Quality::High};
constexpr QualityState kLL{Quality::Low, Quality::Low};

QualityState equilibrium_from(const SuccessTable& s, double c) {
    if (s.get(1, kHH) - c > s.get(1, kLH) && s.get(2, kHH) - c > s.get(2, kHL))
        return kHH;
    if (s.get(1, kHL) - c > s.get(1, kLL) && s.get(2, kHL) >= s.get(2, kHH) - c)
        return kHL;
    if (s.get(1, kLH) >= s.get(1, kHH) - c && s.get(2, kLH) - c > s.get(2, kLL))
        return kLH;
    return kLL;
}

}  // namespace

double net_profitability(int project, QualityState state, const ExpertnessMatrix& em,
                         const FundingConfig& cfg, LearningMode mode, double cost) {
    check_cost(cost);
    OutcomePMF pmf = outcome_distribution(state, em, mode);
    double s = success_probability(pmf, project, cfg);
    return state.high(project) ? s - cost : s;
}

QualityState equilibrium_state(const ExpertnessScheme& scheme, const FundingConfig& cfg,
                               LearningMode mode, double cost) {
    check_cost(cost);
    return equilibrium_from(success_table(scheme.matrix(), cfg, mode), cost);
}

double high_quality_fraction(const FundingConfig& cfg, LearningMode mode, double cost,
                             double grid_step) {
    check_cost(cost);
    const std::vector<double> grid = interior_grid(grid_step);
    long long hits = 0, total = 0;
    for (double p1 : grid)
        for (double p2 : grid) {
            auto s = success_table(ExpertnessScheme::backer(p1, p2).matrix(), cfg, mode);
            hits += equilibrium_from(s, cost) == kHH;
            ++total;
        }
    return static_cast<double>(hits) / static_cast<double>(total);
}

std::vector<EquilibriumMapPoint> equilibrium_map(ExpertnessScheme::Kind kind,
                                                 const FundingConfig& cfg,
                                                 LearningMode mode, double cost,
                                                 double grid_step) {
    check_cost(cost);
    const std::vector<double> grid = interior_grid(grid_step);
    std::vector<EquilibriumMapPoint> out;
    out.reserve(grid.size() * grid.size());
    for (double p1 : grid)
        for (double p2 : grid) {
            ExpertnessScheme scheme{kind, p1, p2};
            out.push_back({p1, p2, equilibrium_state(scheme, cfg, mode, cost)});
        }
    return out;
}

}  // namespace olcf
