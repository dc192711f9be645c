#include "olcf/model.hpp"

namespace olcf {

namespace {

// Sums over states/signal pairs are grouped so that exchanging the two
// projects permutes only the operands of a single commutative addition.
// This keeps every probability bitwise identical under a project swap.
inline double paired_sum(const std::array<double, 4>& v) {
    return (v[0] + v[3]) + (v[1] + v[2]);
}

inline double signal_match(Signal s, Quality v, double p) {
    bool match = (s == Signal::High) == (v == Quality::High);
    return match ? p : 1.0 - p;
}

}  // namespace

double signal_pair_likelihood(SignalPair signals, QualityState state,
                              const ExpertnessRow& row) {
    if (!(row.p1 >= 0.5 && row.p1 <= 1.0) || !(row.p2 >= 0.5 && row.p2 <= 1.0))
        throw std::domain_error("expertness entries must lie in [0.5, 1]");
    return signal_match(signals.s1, state.v1, row.p1) *
           signal_match(signals.s2, state.v2, row.p2);
}

BeliefVector prior_belief() {
    return BeliefVector{{0.25, 0.25, 0.25, 0.25}};
}

BeliefVector posterior(SignalPair signals, const HistoryLikelihoods& hist,
                       const ExpertnessRow& row) {
    std::array<double, 4> num{};
    for (auto state : QualityState::all()) {
        auto i = static_cast<std::size_t>(state.index());
        num[i] = signal_pair_likelihood(signals, state, row) * hist.likelihood[i];
    }
    double z = paired_sum(num);
    if (z <= 0.0)
        throw std::domain_error("degenerate history: all state likelihoods are zero");
    BeliefVector out;
    for (std::size_t i = 0; i < 4; ++i) out.p[i] = num[i] / z;
    return out;
}

DecisionDistribution pledge_distribution(const BeliefVector& b) {
    DecisionDistribution d;
    d.p[0] = b.p[3];
    d.p[1] = b.p[1] + 0.5 * b.p[0];
    d.p[2] = b.p[2] + 0.5 * b.p[0];
    return d;
}

StepLikelihoodTable step_likelihood_table(const HistoryLikelihoods& hist,
                                          const ExpertnessRow& row) {
    // term[d][signal index][state index], then reduce over signals in the
    // swap-stable (HH,LL)+(HL,LH) grouping. A signal pair that is impossible
    // under every state the history allows (accuracy-1 rows produce these)
    // has zero joint probability and contributes nothing.
    std::array<std::array<std::array<double, 4>, 4>, 3> term{};
    for (auto signals : SignalPair::all()) {
        auto si = static_cast<std::size_t>(signals.index());
        std::array<double, 4> lik{}, num{};
        for (auto state : QualityState::all()) {
            auto vi = static_cast<std::size_t>(state.index());
            lik[vi] = signal_pair_likelihood(signals, state, row);
            num[vi] = lik[vi] * hist.likelihood[vi];
        }
        double z = paired_sum(num);
        if (z == 0.0) continue;
        DecisionDistribution pd;
        pd.p[0] = num[3] / z;
        pd.p[1] = (num[1] + 0.5 * num[0]) / z;
        pd.p[2] = (num[2] + 0.5 * num[0]) / z;
        for (std::size_t vi = 0; vi < 4; ++vi) {
            term[0][si][vi] = pd.p[0] * lik[vi];
            term[1][si][vi] = pd.p[1] * lik[vi];
            term[2][si][vi] = pd.p[2] * lik[vi];
        }
    }
    StepLikelihoodTable t;
    for (std::size_t d = 0; d < 3; ++d)
        for (std::size_t vi = 0; vi < 4; ++vi)
            t.p[d][vi] = (term[d][0][vi] + term[d][3][vi]) +
                         (term[d][1][vi] + term[d][2][vi]);
    return t;
}

DecisionDistribution decision_likelihood_given_state(const HistoryLikelihoods& hist,
                                                     QualityState state,
                                                     const ExpertnessRow& row) {
    return step_likelihood_table(hist, row).column(state);
}

HistoryLikelihoods history_update(const HistoryLikelihoods& hist, Decision observed,
                                  const ExpertnessRow& row) {
    StepLikelihoodTable t = step_likelihood_table(hist, row);
    HistoryLikelihoods out;
    auto d = static_cast<std::size_t>(observed);
    for (std::size_t vi = 0; vi < 4; ++vi)
        out.likelihood[vi] = hist.likelihood[vi] * t.p[d][vi];
    out.step = hist.step + 1;
    return out;
}

DecisionDistribution nl_decision_distribution(SignalPair signals, const ExpertnessRow& row) {
    return pledge_distribution(posterior(signals, HistoryLikelihoods::empty(), row));
}

}  // namespace olcf
