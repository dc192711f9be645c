#ifndef OLCF_MODEL_HPP
#define OLCF_MODEL_HPP

#include "olcf/types.hpp"

namespace olcf {

/// P(s^1|V^1) * P(s^2|V^2): signals are conditionally independent across
/// projects given the true state.
double signal_pair_likelihood(SignalPair signals, QualityState state, const ExpertnessRow& row);

/// Uniform prior over the four quality states (unbiased backers).
BeliefVector prior_belief();

/// Bayesian posterior of the acting backer: proportional to the signal-pair
/// likelihood times the history likelihood, normalized over states.
/// Throws std::domain_error if every history entry is zero.
BeliefVector posterior(SignalPair signals, const HistoryLikelihoods& hist,
                       const ExpertnessRow& row);

/// Probabilistic pledging strategy:
///   P(x=1) = P((1,0)) + P((1,1))/2,  P(x=2) = P((0,1)) + P((1,1))/2,
///   P(x=0) = P((0,0)).
DecisionDistribution pledge_distribution(const BeliefVector& belief);

/// P(x_j = d | x_1..x_{j-1}, V) for every decision d and state V: the
/// backer's pledge distribution marginalized over their signal pair, with
/// the signal pair weighted by its likelihood under V. One table per step;
/// column v is the per-state DecisionDistribution.
struct StepLikelihoodTable {
    // [decision][state index]
    std::array<std::array<double, 4>, 3> p{};

    DecisionDistribution column(QualityState state) const {
        auto i = static_cast<std::size_t>(state.index());
        return DecisionDistribution{{p[0][i], p[1][i], p[2][i]}};
    }
};

StepLikelihoodTable step_likelihood_table(const HistoryLikelihoods& hist,
                                          const ExpertnessRow& row);

DecisionDistribution decision_likelihood_given_state(const HistoryLikelihoods& hist,
                                                     QualityState state,
                                                     const ExpertnessRow& row);

/// Absorb one observed decision into the history likelihoods:
/// new[V] = old[V] * P(x = observed | history, V).
HistoryLikelihoods history_update(const HistoryLikelihoods& hist, Decision observed,
                                  const ExpertnessRow& row);

/// Decision distribution of a backer who ignores earlier decisions and uses
/// only their own signals; under no-learning every backer behaves like the
/// first backer.
DecisionDistribution nl_decision_distribution(SignalPair signals, const ExpertnessRow& row);

}  // namespace olcf

#endif
