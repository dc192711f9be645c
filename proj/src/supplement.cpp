#include "olcf/supplement.hpp"

#include <cmath>

#include "olcf/model.hpp"

namespace olcf::supplement {

namespace {

// Per-project building blocks of the factored forms. For a backer with
// accuracy p: `informed` is the chance both of two independent signals for
// the project agree with one reading, `confused` its complement pair.
inline double agree(double p) { return p * p + (1.0 - p) * (1.0 - p); }
inline double cross(double p) { return 2.0 * p * (1.0 - p); }
inline double lean_for(double p) { return 0.5 + p - p * p; }      // 1/2 + p(1-p)... pledge lean
inline double lean_against(double p) { return 1.0 - p + p * p; }  // 1 - p(1-p)

enum class Role { OwnPledged, OtherPledged, Abstained };

// One normalizer factor per project: depends on the second backer's signal
// for that project, the first backer's cross factor for it, and whether the
// observed decision pledged this project, the other one, or neither.
double normalizer_factor(double q, double B, Signal s, Role role) {
    if (s == Signal::High) {
        switch (role) {
            case Role::OwnPledged:   return q + B * (1.0 - 2.0 * q);
            case Role::OtherPledged: return 1.0 - q / 2.0 + B * (q - 0.5);
            case Role::Abstained:    return 1.0 - q + B * (2.0 * q - 1.0);
        }
    } else {
        switch (role) {
            case Role::OwnPledged:   return 1.0 - q + B * (2.0 * q - 1.0);
            case Role::OtherPledged: return (1.0 + q) / 2.0 + B * (0.5 - q);
            case Role::Abstained:    return q + B * (1.0 - 2.0 * q);
        }
    }
    return 0.0;
}

Role role_of(Decision x1, int project) {
    if (x1 == Decision::None) return Role::Abstained;
    bool own = (x1 == Decision::Project1) == (project == 1);
    return own ? Role::OwnPledged : Role::OtherPledged;
}

}  // namespace

double first_backer_decision_likelihood(Decision d, QualityState state,
                                        const ExpertnessRow& row) {
    const bool h1 = state.high(1), h2 = state.high(2);
    switch (d) {
        case Decision::Project1:
            return (h1 ? agree(row.p1) : cross(row.p1)) *
                   (h2 ? lean_for(row.p2) : lean_against(row.p2));
        case Decision::Project2:
            return (h2 ? agree(row.p2) : cross(row.p2)) *
                   (h1 ? lean_for(row.p1) : lean_against(row.p1));
        case Decision::None:
            return (h1 ? cross(row.p1) : agree(row.p1)) *
                   (h2 ? cross(row.p2) : agree(row.p2));
    }
    return 0.0;
}

BeliefVector second_backer_posterior(SignalPair s2, Decision x1,
                                     const ExpertnessRow& row1,
                                     const ExpertnessRow& row2) {
    const double B1 = cross(row1.p1), B2 = cross(row1.p2);
    const double den = normalizer_factor(row2.p1, B1, s2.s1, role_of(x1, 1)) *
                       normalizer_factor(row2.p2, B2, s2.s2, role_of(x1, 2));
    BeliefVector out;
    for (auto state : QualityState::all()) {
        double num = signal_pair_likelihood(s2, state, row2) *
                     first_backer_decision_likelihood(x1, state, row1);
        out[state] = num / den;
    }
    return out;
}

double two_backer_path_probability(Decision x1, Decision x2, QualityState state,
                                   const ExpertnessRow& row1, const ExpertnessRow& row2) {
    double second = 0.0;
    for (auto s2 : SignalPair::all()) {
        BeliefVector post = second_backer_posterior(s2, x1, row1, row2);
        second += pledge_distribution(post)[x2] * signal_pair_likelihood(s2, state, row2);
    }
    return first_backer_decision_likelihood(x1, state, row1) * second;
}

OracleReport oracle_check(const std::vector<ExpertnessMatrix>& grid) {
    OracleReport rep;
    constexpr std::array<Decision, 3> kDecisions{Decision::None, Decision::Project1,
                                                 Decision::Project2};

    // first-backer forms over a 5x5 accuracy grid
    constexpr std::array<double, 5> ps{0.55, 0.65, 0.75, 0.85, 0.95};
    for (double a : ps)
        for (double b : ps) {
            ExpertnessRow row{a, b};
            for (auto d : kDecisions)
                for (auto state : QualityState::all()) {
                    double rec = decision_likelihood_given_state(
                        HistoryLikelihoods::empty(), state, row)[d];
                    double closed = first_backer_decision_likelihood(d, state, row);
                    rep.max_first_backer_dev =
                        std::max(rep.max_first_backer_dev, std::fabs(rec - closed));
                }
        }

    for (const auto& em : grid) {
        if (em.size() != 2)
            throw std::invalid_argument("oracle grid matrices must have two backers");
        const auto& r1 = em.row(0);
        const auto& r2 = em.row(1);

        // 12 second-backer posterior scenarios
        for (auto x1 : kDecisions) {
            HistoryLikelihoods hist = history_update(HistoryLikelihoods::empty(), x1, r1);
            for (auto s2 : SignalPair::all()) {
                BeliefVector rec = posterior(s2, hist, r2);
                BeliefVector closed = second_backer_posterior(s2, x1, r1, r2);
                for (auto state : QualityState::all())
                    rep.max_posterior_dev = std::max(
                        rep.max_posterior_dev, std::fabs(rec[state] - closed[state]));
            }
        }

        // 9 joint paths, all states, plus normalization per state
        for (auto state : QualityState::all()) {
            double sum = 0.0;
            for (auto x1 : kDecisions)
                for (auto x2 : kDecisions) {
                    double rec = path_probability({x1, x2}, state, em, LearningMode::OL);
                    double closed = two_backer_path_probability(x1, x2, state, r1, r2);
                    rep.max_path_dev =
                        std::max(rep.max_path_dev, std::fabs(rec - closed));
                    sum += rec;
                }
            rep.max_path_sum_err = std::max(rep.max_path_sum_err, std::fabs(sum - 1.0));
        }
        ++rep.matrices_checked;
    }
    return rep;
}

std::vector<ExpertnessMatrix> default_oracle_grid() {
    constexpr std::array<double, 3> ps{0.55, 0.75, 0.95};
    std::vector<ExpertnessMatrix> out;
    out.reserve(81);
    for (double a : ps)
        for (double b : ps)
            for (double c : ps)
                for (double d : ps)
                    out.push_back(ExpertnessMatrix({{a, b}, {c, d}}));
    return out;
}

}  // namespace olcf::supplement
