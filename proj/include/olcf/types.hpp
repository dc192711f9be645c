#ifndef OLCF_TYPES_HPP
#define OLCF_TYPES_HPP

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace olcf {

enum class Quality : int { Low = 0, High = 1 };

/// True quality pair (V^1, V^2) of the two competing projects.
/// Index order: (1,1)=0, (1,0)=1, (0,1)=2, (0,0)=3.
struct QualityState {
    Quality v1;
    Quality v2;

    constexpr int index() const {
        return (v1 == Quality::High ? 0 : 2) + (v2 == Quality::High ? 0 : 1);
    }
    static constexpr QualityState from_index(int i) {
        return {i < 2 ? Quality::High : Quality::Low,
                (i % 2 == 0) ? Quality::High : Quality::Low};
    }
    static constexpr std::array<QualityState, 4> all() {
        return {QualityState{Quality::High, Quality::High},
                QualityState{Quality::High, Quality::Low},
                QualityState{Quality::Low, Quality::High},
                QualityState{Quality::Low, Quality::Low}};
    }
    constexpr bool high(int project) const {
        return (project == 1 ? v1 : v2) == Quality::High;
    }
    constexpr QualityState swapped() const { return {v2, v1}; }
    constexpr bool operator==(const QualityState&) const = default;

    std::string label() const {
        return std::string(v1 == Quality::High ? "1" : "0") +
               (v2 == Quality::High ? "1" : "0");
    }
};

enum class Signal : int { Low = 0, High = 1 };

/// Private signal pair (s^1, s^2) a backer receives for the two projects.
/// Index order: (H,H)=0, (H,L)=1, (L,H)=2, (L,L)=3.
struct SignalPair {
    Signal s1;
    Signal s2;

    constexpr int index() const {
        return (s1 == Signal::High ? 0 : 2) + (s2 == Signal::High ? 0 : 1);
    }
    static constexpr std::array<SignalPair, 4> all() {
        return {SignalPair{Signal::High, Signal::High},
                SignalPair{Signal::High, Signal::Low},
                SignalPair{Signal::Low, Signal::High},
                SignalPair{Signal::Low, Signal::Low}};
    }
    constexpr SignalPair swapped() const { return {s2, s1}; }
    constexpr bool operator==(const SignalPair&) const = default;
};

/// Pledging decision: abstain, fund project 1, or fund project 2.
enum class Decision : int { None = 0, Project1 = 1, Project2 = 2 };

constexpr Decision swapped_decision(Decision d) {
    if (d == Decision::Project1) return Decision::Project2;
    if (d == Decision::Project2) return Decision::Project1;
    return Decision::None;
}

/// Signal accuracy of one backer: probability that the private signal for
/// each project matches its true quality.
struct ExpertnessRow {
    double p1;
    double p2;

    constexpr ExpertnessRow swapped() const { return {p2, p1}; }
    constexpr bool operator==(const ExpertnessRow&) const = default;
};

/// Per-backer, per-project signal accuracies. Entries are validated once at
/// construction; all probability code assumes rows are in [0.5, 1].
class ExpertnessMatrix {
public:
    explicit ExpertnessMatrix(std::vector<ExpertnessRow> rows) : rows_(std::move(rows)) {
        if (rows_.empty())
            throw std::invalid_argument("expertness matrix needs at least one backer");
        for (const auto& r : rows_) {
            if (!(r.p1 >= 0.5 && r.p1 <= 1.0) || !(r.p2 >= 0.5 && r.p2 <= 1.0))
                throw std::domain_error("expertness entries must lie in [0.5, 1]");
        }
    }

    int size() const { return static_cast<int>(rows_.size()); }
    const ExpertnessRow& row(int backer) const { return rows_.at(backer); }
    const std::vector<ExpertnessRow>& rows() const { return rows_; }

    ExpertnessMatrix swapped() const {
        std::vector<ExpertnessRow> out;
        out.reserve(rows_.size());
        for (const auto& r : rows_) out.push_back(r.swapped());
        return ExpertnessMatrix(std::move(out));
    }

    /// One accuracy per backer, identical for both projects.
    static ExpertnessMatrix backer_symmetric(const std::vector<double>& p) {
        std::vector<ExpertnessRow> rows;
        rows.reserve(p.size());
        for (double v : p) rows.push_back({v, v});
        return ExpertnessMatrix(std::move(rows));
    }

    /// One accuracy per project, identical across backers.
    static ExpertnessMatrix project_symmetric(int n_backers, double p_proj1, double p_proj2) {
        return ExpertnessMatrix(std::vector<ExpertnessRow>(
            static_cast<std::size_t>(n_backers), ExpertnessRow{p_proj1, p_proj2}));
    }

    /// First half of the backers at accuracy a, second half at b (N even).
    static ExpertnessMatrix half_half(int n_backers, double a, double b) {
        if (n_backers % 2 != 0)
            throw std::invalid_argument("half/half expertness needs an even backer count");
        std::vector<ExpertnessRow> rows(static_cast<std::size_t>(n_backers));
        for (int j = 0; j < n_backers; ++j) {
            double p = j < n_backers / 2 ? a : b;
            rows[static_cast<std::size_t>(j)] = {p, p};
        }
        return ExpertnessMatrix(std::move(rows));
    }

private:
    std::vector<ExpertnessRow> rows_;
};

/// Probability distribution over the four quality states.
struct BeliefVector {
    std::array<double, 4> p{};

    double operator[](QualityState s) const { return p[static_cast<std::size_t>(s.index())]; }
    double& operator[](QualityState s) { return p[static_cast<std::size_t>(s.index())]; }
    double sum() const { return (p[0] + p[3]) + (p[1] + p[2]); }
};

/// Probabilities of the three pledging decisions, indexed by Decision.
struct DecisionDistribution {
    std::array<double, 3> p{};

    double operator[](Decision d) const { return p[static_cast<std::size_t>(d)]; }
    double& operator[](Decision d) { return p[static_cast<std::size_t>(d)]; }
    double sum() const { return p[0] + (p[1] + p[2]); }
};

/// Unnormalized history likelihoods P(x_1..x_j | V), one entry per quality
/// state. An empty history has every entry 1.
struct HistoryLikelihoods {
    std::array<double, 4> likelihood{1.0, 1.0, 1.0, 1.0};
    int step = 0;

    static HistoryLikelihoods empty() { return {}; }
    double operator[](QualityState s) const {
        return likelihood[static_cast<std::size_t>(s.index())];
    }
};

/// Raised when an exact-enumeration request exceeds the path-count guard.
class EnumerationLimitError : public std::length_error {
public:
    using std::length_error::length_error;
};

}  // namespace olcf

#endif
