#include "olcf/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "olcf/model.hpp"
#include "olcf/rng.hpp"

namespace olcf {

namespace {

// Per-row tables that are invariant across replications.
struct RowTables {
    // signal-pair likelihood [signal index][state index]
    std::array<std::array<double, 4>, 4> sig;
    // first-backer (signal-only) pledge distribution per signal pair
    std::array<DecisionDistribution, 4> nl_pledge;
    double p_high_1;  // P(s^1 = H | true state)
    double p_high_2;
};

std::vector<RowTables> build_row_tables(const ExpertnessMatrix& em, QualityState state) {
    std::vector<RowTables> out(static_cast<std::size_t>(em.size()));
    for (int j = 0; j < em.size(); ++j) {
        RowTables& t = out[static_cast<std::size_t>(j)];
        const ExpertnessRow& row = em.row(j);
        for (auto s : SignalPair::all()) {
            auto si = static_cast<std::size_t>(s.index());
            for (auto v : QualityState::all())
                t.sig[si][static_cast<std::size_t>(v.index())] =
                    signal_pair_likelihood(s, v, row);
            t.nl_pledge[si] = nl_decision_distribution(s, row);
        }
        t.p_high_1 = state.high(1) ? row.p1 : 1.0 - row.p1;
        t.p_high_2 = state.high(2) ? row.p2 : 1.0 - row.p2;
    }
    return out;
}

inline Decision draw_decision(const DecisionDistribution& d, double u) {
    if (u < d[Decision::Project1]) return Decision::Project1;
    if (u < d[Decision::Project1] + d[Decision::Project2]) return Decision::Project2;
    return Decision::None;
}

std::pair<int, int> simulate_one(const SimConfig& cfg, const std::vector<RowTables>& tables,
                                 long long rep) {
    const auto r = static_cast<std::uint64_t>(rep);
    const bool ol = cfg.mode == LearningMode::OL;
    const std::uint64_t sig1_purpose =
        (ol || cfg.common_random_numbers) ? rng::kSignal1 : rng::kSignal1Independent;
    const std::uint64_t sig2_purpose =
        (ol || cfg.common_random_numbers) ? rng::kSignal2 : rng::kSignal2Independent;
    const std::uint64_t dec_purpose = ol ? rng::kDecisionOl : rng::kDecisionNl;

    std::array<double, 4> hist{1.0, 1.0, 1.0, 1.0};
    int n1 = 0, n2 = 0;
    for (int j = 0; j < cfg.n_backers; ++j) {
        const auto b = static_cast<std::uint64_t>(j);
        const RowTables& t = tables[static_cast<std::size_t>(j)];
        bool s1_high = rng::uniform(cfg.seed, r, b, sig1_purpose) < t.p_high_1;
        bool s2_high = rng::uniform(cfg.seed, r, b, sig2_purpose) < t.p_high_2;
        int sidx = (s1_high ? 0 : 2) + (s2_high ? 0 : 1);
        double u = rng::uniform(cfg.seed, r, b, dec_purpose);

        Decision d;
        if (!ol) {
            d = draw_decision(t.nl_pledge[static_cast<std::size_t>(sidx)], u);
        } else {
            // pledge distributions for all four signal pairs, conditioned on
            // the shared public history; signal pairs impossible under the
            // realized history carry zero weight and are skipped
            std::array<DecisionDistribution, 4> pledge{};
            std::array<bool, 4> viable{};
            for (std::size_t si = 0; si < 4; ++si) {
                std::array<double, 4> post;
                for (std::size_t vi = 0; vi < 4; ++vi)
                    post[vi] = t.sig[si][vi] * hist[vi];
                double z = (post[0] + post[3]) + (post[1] + post[2]);
                if (z == 0.0) continue;
                viable[si] = true;
                pledge[si].p[0] = post[3] / z;
                pledge[si].p[1] = (post[1] + 0.5 * post[0]) / z;
                pledge[si].p[2] = (post[2] + 0.5 * post[0]) / z;
            }
            d = draw_decision(pledge[static_cast<std::size_t>(sidx)], u);

            // absorb the realized decision into the public history and
            // renormalize (scale-invariant for every later posterior)
            auto di = static_cast<std::size_t>(d);
            for (std::size_t vi = 0; vi < 4; ++vi) {
                std::array<double, 4> term;
                for (std::size_t si = 0; si < 4; ++si)
                    term[si] = viable[si] ? pledge[si].p[di] * t.sig[si][vi] : 0.0;
                hist[vi] *= (term[0] + term[3]) + (term[1] + term[2]);
            }
            double z = (hist[0] + hist[3]) + (hist[1] + hist[2]);
            for (auto& h : hist) h /= z;
        }
        n1 += d == Decision::Project1;
        n2 += d == Decision::Project2;
    }
    return {n1, n2};
}

template <typename PerRep>
void run_replications(const SimConfig& cfg, int max_threads, PerRep&& per_rep) {
    const long long total = cfg.replications;
    constexpr long long kBlock = 8192;
    const long long blocks = (total + kBlock - 1) / kBlock;
    int threads = std::min<long long>(blocks, std::max(1, max_threads));
    if (threads <= 1) {
        for (long long rep = 0; rep < total; ++rep) per_rep(rep, 0);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (;;) {
                long long blk = next.fetch_add(1);
                if (blk >= blocks) break;
                long long lo = blk * kBlock;
                long long hi = std::min(total, lo + kBlock);
                for (long long rep = lo; rep < hi; ++rep) per_rep(rep, w);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

std::pair<int, int> simulate_path(const SimConfig& cfg, long long replication) {
    auto tables = build_row_tables(cfg.em, cfg.state);
    return simulate_one(cfg, tables, replication);
}

namespace detail {

void CountSums::add(int n1v, int n2v, bool hit1, bool hit2) {
    auto u1 = static_cast<std::uint64_t>(n1v);
    auto u2 = static_cast<std::uint64_t>(n2v);
    n1 += u1;
    n2 += u2;
    n1sq += u1 * u1;
    n2sq += u2 * u2;
    n1n2 += u1 * u2;
    b1 += hit1;
    b2 += hit2;
    b1b2 += hit1 && hit2;
    n1b1 += hit1 ? u1 : 0;
    n1b2 += hit2 ? u1 : 0;
    n2b1 += hit1 ? u2 : 0;
    n2b2 += hit2 ? u2 : 0;
}

CountSums& CountSums::operator+=(const CountSums& o) {
    n1 += o.n1; n2 += o.n2;
    n1sq += o.n1sq; n2sq += o.n2sq; n1n2 += o.n1n2;
    b1 += o.b1; b2 += o.b2; b1b2 += o.b1b2;
    n1b1 += o.n1b1; n1b2 += o.n1b2; n2b1 += o.n2b1; n2b2 += o.n2b2;
    return *this;
}

CountSums accumulate_counts(const SimConfig& cfg, long long first, long long count) {
    auto tables = build_row_tables(cfg.em, cfg.state);
    CountSums s;
    for (long long rep = first; rep < first + count; ++rep) {
        auto [n1, n2] = simulate_one(cfg, tables, rep);
        s.add(n1, n2, n1 >= cfg.target_count, n2 >= cfg.target_count);
    }
    return s;
}

CountSums accumulate_counts_parallel(const SimConfig& cfg, int max_threads) {
    auto tables = build_row_tables(cfg.em, cfg.state);
    std::vector<CountSums> per_worker(
        static_cast<std::size_t>(std::max(1, max_threads)));
    run_replications(cfg, max_threads, [&](long long rep, int worker) {
        auto [n1, n2] = simulate_one(cfg, tables, rep);
        per_worker[static_cast<std::size_t>(worker)].add(
            n1, n2, n1 >= cfg.target_count, n2 >= cfg.target_count);
    });
    CountSums total;
    for (const auto& w : per_worker) total += w;
    return total;
}

std::vector<std::uint64_t> count_histogram(const SimConfig& cfg, int max_threads) {
    auto tables = build_row_tables(cfg.em, cfg.state);
    const auto side = static_cast<std::size_t>(cfg.n_backers + 1);
    int workers = std::max(1, max_threads);
    std::vector<std::vector<std::uint64_t>> partial(
        static_cast<std::size_t>(workers), std::vector<std::uint64_t>(side * side, 0));
    run_replications(cfg, max_threads, [&](long long rep, int worker) {
        auto [n1, n2] = simulate_one(cfg, tables, rep);
        partial[static_cast<std::size_t>(worker)]
               [static_cast<std::size_t>(n1) * side + static_cast<std::size_t>(n2)] += 1;
    });
    std::vector<std::uint64_t> out(side * side, 0);
    for (const auto& p : partial)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += p[i];
    return out;
}

SimEstimates estimates_from(const CountSums& s, const SimConfig& cfg) {
    const double R = static_cast<double>(cfg.replications);
    const double inf = std::numeric_limits<double>::infinity();
    SimEstimates e;
    e.replications_used = cfg.replications;

    const double m1 = static_cast<double>(s.n1) / R;
    const double m2 = static_cast<double>(s.n2) / R;
    const double f1 = static_cast<double>(s.b1) / R;
    const double f2 = static_cast<double>(s.b2) / R;
    e.mean_n1 = m1;
    e.mean_n2 = m2;
    e.success1_freq = f1;
    e.success2_freq = f2;

    // sample covariances (unbiased); undefined for R = 1
    const bool have_var = cfg.replications > 1;
    const double denom = have_var ? R - 1.0 : 1.0;
    auto cov = [&](double sum_xy, double mx, double my) {
        return (sum_xy - R * mx * my) / denom;
    };
    const double v_n1 = cov(static_cast<double>(s.n1sq), m1, m1);
    const double v_n2 = cov(static_cast<double>(s.n2sq), m2, m2);
    const double v_b1 = cov(static_cast<double>(s.b1), f1, f1);  // b1^2 == b1
    const double v_b2 = cov(static_cast<double>(s.b2), f2, f2);
    const double c_n1n2 = cov(static_cast<double>(s.n1n2), m1, m2);
    const double c_n1b1 = cov(static_cast<double>(s.n1b1), m1, f1);
    const double c_n1b2 = cov(static_cast<double>(s.n1b2), m1, f2);
    const double c_n2b1 = cov(static_cast<double>(s.n2b1), m2, f1);
    const double c_n2b2 = cov(static_cast<double>(s.n2b2), m2, f2);
    const double c_b1b2 = cov(static_cast<double>(s.b1b2), f1, f2);

    auto se_of = [&](double variance) {
        if (!have_var) return inf;
        return variance > 0.0 ? std::sqrt(variance / R) : 0.0;
    };
    e.se_mean_n1 = se_of(v_n1);
    e.se_mean_n2 = se_of(v_n2);
    e.se_success1 = se_of(v_b1);
    e.se_success2 = se_of(v_b2);

    switch (cfg.state.index()) {
        case 0:
            e.contentedness = m1 + m2;
            e.se_contentedness = se_of(v_n1 + v_n2 + 2.0 * c_n1n2);
            break;
        case 1:
            e.contentedness = m1;
            e.se_contentedness = e.se_mean_n1;
            break;
        case 2:
            e.contentedness = m2;
            e.se_contentedness = e.se_mean_n2;
            break;
        default:
            e.contentedness = cfg.n_backers - (m1 + m2);
            e.se_contentedness = se_of(v_n1 + v_n2 + 2.0 * c_n1n2);
            break;
    }

    // delta method for g = w1 * m1 * f1 + w2 * m2 * f2 with gradient
    // (w1 f1, w1 m1, w2 f2, w2 m2) over (n1, b1, n2, b2)
    auto product_form = [&](double w1, double w2, double& value, double& se) {
        value = w1 * m1 * f1 + w2 * m2 * f2;
        const double g0 = w1 * f1, g1 = w1 * m1, g2 = w2 * f2, g3 = w2 * m2;
        double variance = g0 * g0 * v_n1 + g1 * g1 * v_b1 + g2 * g2 * v_n2 +
                          g3 * g3 * v_b2 + 2.0 * g0 * g1 * c_n1b1 +
                          2.0 * g0 * g2 * c_n1n2 + 2.0 * g0 * g3 * c_n1b2 +
                          2.0 * g1 * g2 * c_n2b1 + 2.0 * g1 * g3 * c_b1b2 +
                          2.0 * g2 * g3 * c_n2b2;
        se = se_of(variance);
    };
    double gamma = cfg.service_fee_rate;
    product_form(gamma, gamma, e.profit, e.se_profit);
    product_form(cfg.state.high(1) ? 1.0 : -1.0, cfg.state.high(2) ? 1.0 : -1.0,
                 e.effectiveness, e.se_effectiveness);
    return e;
}

}  // namespace detail

SimEstimates estimate_metrics(const SimConfig& cfg) {
    if (cfg.replications < 1)
        throw std::invalid_argument("at least one replication is required");
    if (cfg.em.size() != cfg.n_backers)
        throw std::invalid_argument("expertness matrix size must equal the backer count");
    if (cfg.target_count < 1 || cfg.target_count > cfg.n_backers)
        throw std::invalid_argument("target count must lie in [1, N]");
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    auto sums = detail::accumulate_counts_parallel(cfg, std::max(1, hw));
    return detail::estimates_from(sums, cfg);
}

std::vector<Figure9Point> figure9_experiment(int n_backers,
                                             const std::vector<int>& targets,
                                             long long replications, std::uint64_t seed,
                                             bool common_random_numbers) {
    if (n_backers % 2 != 0)
        throw std::invalid_argument("the half/half protocol needs an even backer count");
    for (int t : targets)
        if (t < 1 || t > n_backers)
            throw std::invalid_argument("targets must lie in [1, N]");

    constexpr std::array<double, 5> kAccuracies{0.55, 0.65, 0.75, 0.85, 0.95};
    const std::array<QualityState, 3> kStates{
        QualityState{Quality::High, Quality::High},
        QualityState{Quality::High, Quality::Low},
        QualityState{Quality::Low, Quality::Low}};

    struct Job {
        int system;  // index into the 25 accuracy pairs
        int state;   // index into kStates
        LearningMode mode;
    };
    std::vector<Job> jobs;
    for (int sys = 0; sys < 25; ++sys)
        for (int st = 0; st < 3; ++st)
            for (auto mode : {LearningMode::OL, LearningMode::NL})
                jobs.push_back({sys, st, mode});

    const auto side = static_cast<std::size_t>(n_backers + 1);
    std::vector<std::vector<std::uint64_t>> hist(jobs.size());

    // one histogram job per (system, state, mode); jobs are independent and
    // their streams are fully determined by the derived sub-seed
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) break;
            const Job& job = jobs[i];
            double p1 = kAccuracies[static_cast<std::size_t>(job.system / 5)];
            double p2 = kAccuracies[static_cast<std::size_t>(job.system % 5)];
            SimConfig cfg{n_backers,
                          1,  // targets are applied when reading the histogram
                          kStates[static_cast<std::size_t>(job.state)],
                          ExpertnessMatrix::half_half(n_backers, p1, p2),
                          job.mode,
                          replications,
                          rng::derive(seed, static_cast<std::uint64_t>(job.system),
                                      static_cast<std::uint64_t>(job.state), 0),
                          1.0,
                          common_random_numbers};
            hist[i] = detail::count_histogram(cfg, 1);
        }
    };
    int hw = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (int w = 0; w < hw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    auto effectiveness_from = [&](const std::vector<std::uint64_t>& h, QualityState state,
                                  int target) {
        const double R = static_cast<double>(replications);
        double e1 = 0, e2 = 0, f1 = 0, f2 = 0;
        for (std::size_t a = 0; a < side; ++a)
            for (std::size_t b = 0; b < side; ++b) {
                double c = static_cast<double>(h[a * side + b]);
                if (c == 0.0) continue;
                e1 += static_cast<double>(a) * c;
                e2 += static_cast<double>(b) * c;
                if (static_cast<int>(a) >= target) f1 += c;
                if (static_cast<int>(b) >= target) f2 += c;
            }
        e1 /= R; e2 /= R; f1 /= R; f2 /= R;
        return e1 * f1 * (state.high(1) ? 1.0 : -1.0) +
               e2 * f2 * (state.high(2) ? 1.0 : -1.0);
    };

    std::vector<Figure9Point> out;
    for (int target : targets) {
        for (int st = 0; st < 3; ++st) {
            QualityState state = kStates[static_cast<std::size_t>(st)];
            double delta_sum = 0.0;
            for (int sys = 0; sys < 25; ++sys) {
                std::size_t ol_idx = 0, nl_idx = 0;
                for (std::size_t i = 0; i < jobs.size(); ++i) {
                    if (jobs[i].system == sys && jobs[i].state == st) {
                        if (jobs[i].mode == LearningMode::OL) ol_idx = i;
                        else nl_idx = i;
                    }
                }
                delta_sum += effectiveness_from(hist[ol_idx], state, target) -
                             effectiveness_from(hist[nl_idx], state, target);
            }
            out.push_back({n_backers, target, state, delta_sum / 25.0});
        }
    }
    return out;
}

}  // namespace olcf
