#ifndef OLCF_EQUILIBRIUM_HPP
#define OLCF_EQUILIBRIUM_HPP

#include <vector>

#include "olcf/metrics.hpp"
#include "olcf/types.hpp"

namespace olcf {

/// Expertness parameterization for the creators' quality game.
struct ExpertnessScheme {
    enum class Kind { BackerAsymmetric, ProjectAsymmetric };
    Kind kind;
    double a;  // backer 1 accuracy, or project 1 accuracy
    double b;  // backer 2 accuracy, or project 2 accuracy

    static ExpertnessScheme backer(double p1, double p2) {
        return {Kind::BackerAsymmetric, p1, p2};
    }
    static ExpertnessScheme project(double p_proj1, double p_proj2) {
        return {Kind::ProjectAsymmetric, p_proj1, p_proj2};
    }
    /// Two-backer matrix realizing this scheme.
    ExpertnessMatrix matrix() const {
        return kind == Kind::BackerAsymmetric
                   ? ExpertnessMatrix({{a, a}, {b, b}})
                   : ExpertnessMatrix::project_symmetric(2, a, b);
    }
};

/// Success probability of `project` at quality state `state`, minus the
/// development cost when that project is high-quality in `state`.
double net_profitability(int project, QualityState state, const ExpertnessMatrix& em,
                         const FundingConfig& cfg, LearningMode mode, double cost);

/// Creators' simultaneous quality choice: the four candidate states are
/// tested in the order (1,1), (1,0), (0,1), (0,0); the unilateral-deviation
/// comparisons use the strict/weak operators exactly as stated, with no
/// floating-point slack.
QualityState equilibrium_state(const ExpertnessScheme& scheme, const FundingConfig& cfg,
                               LearningMode mode, double cost);

/// Fraction of the interior backer-accuracy grid whose equilibrium is (1,1),
/// under the backer-asymmetric scheme.
double high_quality_fraction(const FundingConfig& cfg, LearningMode mode, double cost,
                             double grid_step = 0.01);

struct EquilibriumMapPoint {
    double p1, p2;
    QualityState equilibrium;
};

/// equilibrium_state at every interior grid point of the chosen scheme family.
std::vector<EquilibriumMapPoint> equilibrium_map(ExpertnessScheme::Kind kind,
                                                 const FundingConfig& cfg,
                                                 LearningMode mode, double cost,
                                                 double grid_step = 0.01);

}  // namespace olcf

#endif
