#ifndef OLCF_SUPPLEMENT_HPP
#define OLCF_SUPPLEMENT_HPP

#include <vector>

#include "olcf/exact.hpp"
#include "olcf/types.hpp"

// Closed-form expressions for the two-backer system, coded directly from the
// factored algebra rather than through the step recursion. They exist to
// cross-validate the recursion engine and are exercised by the validation
// suite; production paths never call them.

namespace olcf::supplement {

/// First-backer decision likelihood P(x1 = d | V) in factored closed form.
double first_backer_decision_likelihood(Decision d, QualityState state,
                                        const ExpertnessRow& row);

/// Second backer's posterior after observing own signals and the first
/// decision, using the per-project factored normalizer.
BeliefVector second_backer_posterior(SignalPair s2, Decision x1,
                                     const ExpertnessRow& row1,
                                     const ExpertnessRow& row2);

/// Closed-form joint path probability P(x1, x2 | V) for the two-backer
/// system: first-backer likelihood times the signal-marginalized second
/// decision probability.
double two_backer_path_probability(Decision x1, Decision x2, QualityState state,
                                   const ExpertnessRow& row1, const ExpertnessRow& row2);

struct OracleReport {
    double max_first_backer_dev = 0.0;  // recursion vs closed form, 5x5 row grid
    double max_posterior_dev = 0.0;     // 12 scenarios x 4 states per matrix
    double max_path_dev = 0.0;          // 9 paths x 4 states per matrix
    double max_path_sum_err = 0.0;      // |sum over 9 paths - 1|
    int matrices_checked = 0;

    bool pass() const {
        return max_first_backer_dev <= 1e-12 && max_posterior_dev <= 1e-10 &&
               max_path_dev <= 1e-10 && max_path_sum_err <= 1e-10;
    }
};

/// Compare the recursion engine against every closed form over the given
/// two-backer matrices (plus a fixed 5x5 accuracy grid for the first-backer
/// forms) and report the worst absolute deviations.
OracleReport oracle_check(const std::vector<ExpertnessMatrix>& grid);

/// {0.55, 0.75, 0.95}^4 two-backer matrices: 81 expertness combinations.
std::vector<ExpertnessMatrix> default_oracle_grid();

}  // namespace olcf::supplement

#endif
