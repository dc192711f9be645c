#include "olcf/exact.hpp"

#include <algorithm>
#include <cmath>

namespace olcf {

namespace {

void check_size(int n) {
    if (n > kMaxExactBackers)
        throw EnumerationLimitError(
            "exact enumeration is limited to " + std::to_string(kMaxExactBackers) +
            " backers (3^N paths); use the simulation engine instead");
}

struct CellBuckets {
    // Per (n1, n2) cell, the individual path contributions for one state.
    // Summed after sorting by value so the result does not depend on the
    // path visit order; a project swap then yields bitwise-mirrored cells.
    std::vector<std::vector<double>> contrib;
    int n;

    explicit CellBuckets(int n_backers)
        : contrib(static_cast<std::size_t>((n_backers + 1) * (n_backers + 1))),
          n(n_backers) {}

    void add(int n1, int n2, double v) {
        contrib[static_cast<std::size_t>(n1) * static_cast<std::size_t>(n + 1) +
                static_cast<std::size_t>(n2)]
            .push_back(v);
    }

    OutcomePMF reduce() const {
        OutcomePMF pmf(n);
        for (int n1 = 0; n1 <= n; ++n1)
            for (int n2 = 0; n2 <= n; ++n2) {
                auto cell = contrib[static_cast<std::size_t>(n1) *
                                        static_cast<std::size_t>(n + 1) +
                                    static_cast<std::size_t>(n2)];
                std::sort(cell.begin(), cell.end());
                double s = 0.0;
                for (double v : cell) s += v;
                pmf.mass(n1, n2) = s;
            }
        return pmf;
    }
};

// One step table per backer under NL; every backer acts like a first backer.
std::vector<StepLikelihoodTable> nl_tables(const ExpertnessMatrix& em) {
    std::vector<StepLikelihoodTable> out;
    out.reserve(static_cast<std::size_t>(em.size()));
    for (int j = 0; j < em.size(); ++j)
        out.push_back(step_likelihood_table(HistoryLikelihoods::empty(), em.row(j)));
    return out;
}

// Shared DFS over decision paths. `lik` carries P(prefix | V) for all four
// states; under OL it also serves as the conditioning history, under NL the
// per-backer first-backer tables apply.
template <typename Leaf>
void enumerate_paths(const ExpertnessMatrix& em, LearningMode mode, Leaf&& leaf) {
    const int n = em.size();
    const std::vector<StepLikelihoodTable> fixed =
        mode == LearningMode::NL ? nl_tables(em) : std::vector<StepLikelihoodTable>{};
    struct Frame {
        HistoryLikelihoods hist;  // conditioning history (OL only)
        std::array<double, 4> lik;
        int n1, n2;
    };
    auto rec = [&](auto&& self, int j, const Frame& f) -> void {
        if (j == n) {
            leaf(f.n1, f.n2, f.lik);
            return;
        }
        const StepLikelihoodTable t =
            mode == LearningMode::OL ? step_likelihood_table(f.hist, em.row(j))
                                     : fixed[static_cast<std::size_t>(j)];
        for (int d = 0; d < 3; ++d) {
            Frame next;
            next.n1 = f.n1 + (d == 1);
            next.n2 = f.n2 + (d == 2);
            for (std::size_t vi = 0; vi < 4; ++vi)
                next.lik[vi] = f.lik[vi] * t.p[static_cast<std::size_t>(d)][vi];
            if (mode == LearningMode::OL) {
                next.hist.likelihood = next.lik;
                next.hist.step = j + 1;
            }
            self(self, j + 1, next);
        }
    };
    Frame root{HistoryLikelihoods::empty(), {1.0, 1.0, 1.0, 1.0}, 0, 0};
    rec(rec, 0, root);
}

}  // namespace

double OutcomePMF::total() const {
    // ascending-magnitude sum, stable across mirrored layouts
    std::vector<double> v(mass_);
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

std::pair<double, double> OutcomePMF::expected_pledges() const {
    double e1 = 0.0, e2 = 0.0;
    for (int n1 = 0; n1 <= n_; ++n1)
        for (int n2 = 0; n2 <= n_; ++n2) {
            double m = mass(n1, n2);
            e1 += n1 * m;
            e2 += n2 * m;
        }
    return {e1, e2};
}

double OutcomePMF::tail_probability(int project, int threshold) const {
    double s = 0.0;
    for (int n1 = 0; n1 <= n_; ++n1)
        for (int n2 = 0; n2 <= n_; ++n2)
            if ((project == 1 ? n1 : n2) >= threshold) s += mass(n1, n2);
    return s;
}

OutcomePMF OutcomePMF::swapped() const {
    OutcomePMF out(n_);
    for (int n1 = 0; n1 <= n_; ++n1)
        for (int n2 = 0; n2 <= n_; ++n2) out.mass(n2, n1) = mass(n1, n2);
    return out;
}

double path_probability(const DecisionPath& path, QualityState state,
                        const ExpertnessMatrix& em, LearningMode mode) {
    if (static_cast<int>(path.size()) != em.size())
        throw std::invalid_argument("path length must equal the backer count");
    check_size(em.size());
    HistoryLikelihoods hist = HistoryLikelihoods::empty();
    std::array<double, 4> lik{1.0, 1.0, 1.0, 1.0};
    for (int j = 0; j < em.size(); ++j) {
        StepLikelihoodTable t =
            mode == LearningMode::OL ? step_likelihood_table(hist, em.row(j))
                                     : step_likelihood_table(HistoryLikelihoods::empty(),
                                                             em.row(j));
        auto d = static_cast<std::size_t>(path[static_cast<std::size_t>(j)]);
        for (std::size_t vi = 0; vi < 4; ++vi) lik[vi] *= t.p[d][vi];
        if (mode == LearningMode::OL) {
            hist.likelihood = lik;
            hist.step = j + 1;
        }
    }
    return lik[static_cast<std::size_t>(state.index())];
}

OutcomePMF outcome_distribution(QualityState state, const ExpertnessMatrix& em,
                                LearningMode mode) {
    check_size(em.size());
    CellBuckets cells(em.size());
    auto vi = static_cast<std::size_t>(state.index());
    enumerate_paths(em, mode, [&](int n1, int n2, const std::array<double, 4>& lik) {
        cells.add(n1, n2, lik[vi]);
    });
    return cells.reduce();
}

std::array<OutcomePMF, 4> outcome_distribution_all_states(const ExpertnessMatrix& em,
                                                          LearningMode mode) {
    check_size(em.size());
    std::array<CellBuckets, 4> cells{CellBuckets(em.size()), CellBuckets(em.size()),
                                     CellBuckets(em.size()), CellBuckets(em.size())};
    enumerate_paths(em, mode, [&](int n1, int n2, const std::array<double, 4>& lik) {
        for (std::size_t vi = 0; vi < 4; ++vi) cells[vi].add(n1, n2, lik[vi]);
    });
    return {cells[0].reduce(), cells[1].reduce(), cells[2].reduce(), cells[3].reduce()};
}

std::pair<double, double> expected_pledges(const OutcomePMF& pmf) {
    return pmf.expected_pledges();
}

}  // namespace olcf
