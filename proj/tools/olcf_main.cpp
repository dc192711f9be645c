// olcf — exact evaluation, impact reports, grid sweeps, equilibrium maps and
// large-system simulation for the two-project observational-learning
// crowdfunding model. Emits CSV/JSON plus a run manifest per data file.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "olcf/equilibrium.hpp"
#include "olcf/exact.hpp"
#include "olcf/metrics.hpp"
#include "olcf/montecarlo.hpp"
#include "olcf/supplement.hpp"

using nlohmann::json;
using namespace olcf;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kSizeGuard = 3,
    kProtocol = 4,
    kValidation = 5,
};

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string utc_timestamp() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Data files are written once, atomically: stage to a temp name, then rename.
void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

void emit(const std::optional<std::string>& out_path, const std::string& content,
          const std::string& subcommand, const json& parameters) {
    if (!out_path) {
        std::cout << content;
        return;
    }
    atomic_write(*out_path, content);
    json manifest{{"tool", "olcf"},
                  {"version", kVersion},
                  {"subcommand", subcommand},
                  {"timestamp", utc_timestamp()},
                  {"parameters", parameters},
                  {"output", *out_path}};
    atomic_write(*out_path + ".manifest.json", manifest.dump(2) + "\n");
}

QualityState parse_quality(const std::string& s) {
    for (auto state : QualityState::all())
        if (state.label() == s) return state;
    throw CLI::ValidationError("--quality", "must be one of 11, 10, 01, 00");
}

LearningMode parse_mode(const std::string& s) {
    if (s == "ol") return LearningMode::OL;
    if (s == "nl") return LearningMode::NL;
    throw CLI::ValidationError("--mode", "must be ol or nl");
}

MetricKind parse_metric(const std::string& s) {
    for (MetricKind m : kAllMetrics)
        if (metric_name(m) == s) return m;
    throw CLI::ValidationError(
        "--metric", "must be one of content, success1, success2, profit, effectiveness");
}

ExpertnessMatrix parse_expertness_list(const std::string& csv) {
    std::vector<double> vals;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            vals.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--expertness", "not a number: " + item);
        }
    }
    if (vals.size() < 2 || vals.size() % 2 != 0)
        throw CLI::ValidationError(
            "--expertness",
            "needs 2N comma-separated values (row-major: backer 1 project 1, "
            "backer 1 project 2, ...)");
    std::vector<ExpertnessRow> rows;
    for (std::size_t i = 0; i < vals.size(); i += 2) rows.push_back({vals[i], vals[i + 1]});
    return ExpertnessMatrix(std::move(rows));
}

ExpertnessMatrix parse_expertness_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--expertness-file", "cannot open " + path);
    std::vector<ExpertnessRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double a, b;
        if (std::sscanf(line.c_str(), "%lf,%lf", &a, &b) != 2)
            throw CLI::ValidationError("--expertness-file",
                                       "expected one 'p1,p2' row per backer");
        rows.push_back({a, b});
    }
    return ExpertnessMatrix(std::move(rows));
}

std::string csv_optional(const std::optional<double>& v) {
    return v ? g17(*v) : "nan";
}

// ---------------------------------------------------------------------------

struct ExactArgs {
    std::string quality, expertness, mode = "ol", format = "json";
    int target = 0;
    double gamma = 1.0;
    std::optional<std::string> out;
};

int run_exact(const ExactArgs& a) {
    QualityState state = parse_quality(a.quality);
    LearningMode mode = parse_mode(a.mode);
    ExpertnessMatrix em = parse_expertness_list(a.expertness);
    if (a.target < 1 || a.target > em.size())
        throw CLI::ValidationError("--target", "must lie in [1, N]");
    if (!(a.gamma >= 0.0 && a.gamma <= 1.0))
        throw CLI::ValidationError("--gamma", "must lie in [0, 1]");
    FundingConfig cfg{a.target, a.gamma, em.size()};

    OutcomePMF pmf = outcome_distribution(state, em, mode);
    auto [e1, e2] = pmf.expected_pledges();

    json params{{"quality", a.quality}, {"expertness", a.expertness},
                {"target", a.target},   {"gamma", a.gamma},
                {"mode", a.mode},       {"format", a.format}};
    if (a.format == "json") {
        json doc{{"quality_state", state.label()},
                 {"mode", a.mode},
                 {"n_backers", em.size()},
                 {"target", a.target},
                 {"gamma", a.gamma},
                 {"expected_pledges", {{"n1", e1}, {"n2", e2}}},
                 {"metrics",
                  {{"content", contentedness(pmf, state)},
                   {"success1", success_probability(pmf, 1, cfg)},
                   {"success2", success_probability(pmf, 2, cfg)},
                   {"profit", platform_profit(pmf, cfg)},
                   {"effectiveness", platform_effectiveness(pmf, state, cfg)}}}};
        json mass = json::array();
        for (int n1 = 0; n1 <= em.size(); ++n1)
            for (int n2 = 0; n2 <= em.size(); ++n2)
                if (pmf.mass(n1, n2) > 0.0)
                    mass.push_back({{"n1", n1}, {"n2", n2}, {"p", pmf.mass(n1, n2)}});
        doc["pmf"] = mass;
        emit(a.out, doc.dump(2) + "\n", "exact", params);
    } else if (a.format == "csv") {
        std::ostringstream os;
        os << "field,value\n";
        os << "content," << g17(contentedness(pmf, state)) << "\n";
        os << "success1," << g17(success_probability(pmf, 1, cfg)) << "\n";
        os << "success2," << g17(success_probability(pmf, 2, cfg)) << "\n";
        os << "profit," << g17(platform_profit(pmf, cfg)) << "\n";
        os << "effectiveness," << g17(platform_effectiveness(pmf, state, cfg)) << "\n";
        os << "e_n1," << g17(e1) << "\n";
        os << "e_n2," << g17(e2) << "\n";
        for (int n1 = 0; n1 <= em.size(); ++n1)
            for (int n2 = 0; n2 <= em.size(); ++n2)
                if (pmf.mass(n1, n2) > 0.0)
                    os << "pmf_" << n1 << "_" << n2 << "," << g17(pmf.mass(n1, n2)) << "\n";
        emit(a.out, os.str(), "exact", params);
    } else {
        throw CLI::ValidationError("--format", "must be json or csv");
    }
    return kOk;
}

struct ImpactArgs {
    int target = 2;
    double step = 0.005, gamma = 1.0;
    std::optional<std::string> out;
};

int run_impact(const ImpactArgs& a) {
    if (a.target < 1 || a.target > 2)
        throw CLI::ValidationError("--target", "the impact report covers the 2-backer system");
    ImpactReport rep = impact_report(FundingConfig{a.target, a.gamma, 2}, a.step);
    std::ostringstream os;
    os << "metric,quality_state,delta_plus,delta_minus,delta_avg,improvement_fraction\n";
    for (MetricKind m : kAllMetrics)
        for (auto state : QualityState::all()) {
            const ImpactCell& c = rep.cell(m, state);
            os << metric_name(m) << "," << state.label() << ","
               << csv_optional(c.max_improvement) << "," << csv_optional(c.max_harm)
               << "," << g17(c.average_impact) << "," << g17(c.improvement_fraction)
               << "\n";
        }
    json params{{"target", a.target}, {"step", a.step}, {"gamma", a.gamma}};
    emit(a.out, os.str(), "impact", params);
    return kOk;
}

struct SweepArgs {
    std::string metric, quality;
    int target = 2;
    double step = 0.005, gamma = 1.0;
    std::optional<std::string> out;
};

int run_sweep(const SweepArgs& a) {
    MetricKind m = parse_metric(a.metric);
    QualityState state = parse_quality(a.quality);
    if (a.target < 1 || a.target > 2)
        throw CLI::ValidationError("--target", "sweeps cover the 2-backer system");
    auto points = impact_sweep(m, state, FundingConfig{a.target, a.gamma, 2}, a.step);
    std::ostringstream os;
    os << "p1,p2,delta\n";
    for (const auto& p : points)
        os << g17(p.p1) << "," << g17(p.p2) << "," << g17(p.delta) << "\n";
    json params{{"metric", a.metric}, {"quality", a.quality},
                {"target", a.target}, {"step", a.step},
                {"gamma", a.gamma}};
    emit(a.out, os.str(), "sweep", params);
    return kOk;
}

struct EquilibriumArgs {
    double cost = 0.0, step = 0.01;
    int target = 2;
    std::string mode = "ol", scheme = "backer";
    bool fractions = false;
    std::optional<std::string> out;
};

int run_equilibrium(const EquilibriumArgs& a) {
    if (a.target < 1 || a.target > 2)
        throw CLI::ValidationError("--target", "the quality game covers the 2-backer system");
    if (a.scheme != "backer" && a.scheme != "project")
        throw CLI::ValidationError("--scheme", "must be backer or project");
    FundingConfig cfg{a.target, 1.0, 2};
    json params{{"cost", a.cost},     {"target", a.target}, {"mode", a.mode},
                {"scheme", a.scheme}, {"step", a.step},     {"fractions", a.fractions}};
    if (a.fractions) {
        if (a.scheme != "backer")
            throw CLI::ValidationError("--fractions",
                                       "fraction series use the backer scheme");
        std::ostringstream os;
        os << "cost,ol_fraction,nl_fraction\n";
        for (int k = 0; k <= 10; ++k) {
            double c = static_cast<double>(k) / 10.0;
            os << g17(c) << ","
               << g17(high_quality_fraction(cfg, LearningMode::OL, c, a.step)) << ","
               << g17(high_quality_fraction(cfg, LearningMode::NL, c, a.step)) << "\n";
        }
        emit(a.out, os.str(), "equilibrium", params);
        return kOk;
    }
    LearningMode mode = parse_mode(a.mode);
    ExpertnessScheme::Kind kind = a.scheme == "backer"
                                      ? ExpertnessScheme::Kind::BackerAsymmetric
                                      : ExpertnessScheme::Kind::ProjectAsymmetric;
    auto map = equilibrium_map(kind, cfg, mode, a.cost, a.step);
    std::ostringstream os;
    os << "p1,p2,v1,v2\n";
    for (const auto& p : map)
        os << g17(p.p1) << "," << g17(p.p2) << ","
           << (p.equilibrium.v1 == Quality::High ? 1 : 0) << ","
           << (p.equilibrium.v2 == Quality::High ? 1 : 0) << "\n";
    emit(a.out, os.str(), "equilibrium", params);
    return kOk;
}

struct SimulateArgs {
    int backers = 0, target = 0;
    std::string quality, mode = "ol", expertness_file;
    double p1 = -1, p2 = -1, gamma = 1.0;
    long long replications = 50000;
    std::uint64_t seed = 12345;
    bool figure9 = false, no_crn = false;
    std::string targets;  // comma list for figure9
    std::optional<std::string> out;
};

int run_simulate(const SimulateArgs& a) {
    if (a.backers < 1) throw CLI::ValidationError("--backers", "must be positive");
    json params{{"backers", a.backers},
                {"replications", a.replications},
                {"seed", a.seed},
                {"gamma", a.gamma},
                {"common_random_numbers", !a.no_crn}};

    if (a.figure9) {
        if (a.backers % 2 != 0) {
            std::cerr << "error: the half/half protocol needs an even backer count\n";
            return kProtocol;
        }
        std::vector<int> targets;
        if (!a.targets.empty()) {
            std::stringstream ss(a.targets);
            std::string item;
            while (std::getline(ss, item, ',')) targets.push_back(std::stoi(item));
        } else {
            for (int k = 1; k <= 9; ++k) targets.push_back(k * a.backers / 10);
        }
        for (int t : targets)
            if (t < 1 || t > a.backers)
                throw CLI::ValidationError("--targets", "must lie in [1, N]");
        auto points =
            figure9_experiment(a.backers, targets, a.replications, a.seed, !a.no_crn);
        std::ostringstream os;
        os << "n_backers,target,quality_state,delta_effectiveness\n";
        for (const auto& p : points)
            os << p.n_backers << "," << p.target_count << "," << p.state.label() << ","
               << g17(p.delta_effectiveness) << "\n";
        params["figure9"] = true;
        params["targets"] = targets;
        emit(a.out, os.str(), "simulate", params);
        return kOk;
    }

    if (a.target < 1 || a.target > a.backers)
        throw CLI::ValidationError("--target", "must lie in [1, N]");
    QualityState state = parse_quality(a.quality);
    LearningMode mode = parse_mode(a.mode);

    ExpertnessMatrix em = [&] {
        if (!a.expertness_file.empty()) {
            if (a.p1 >= 0 || a.p2 >= 0)
                throw CLI::ValidationError("--expertness-file",
                                           "cannot combine with --p1/--p2");
            return parse_expertness_file(a.expertness_file);
        }
        if (a.p1 < 0 || a.p2 < 0)
            throw CLI::ValidationError("--p1",
                                       "either --p1 and --p2 or --expertness-file is required");
        return ExpertnessMatrix::half_half(a.backers, a.p1, a.p2);
    }();
    if (em.size() != a.backers)
        throw CLI::ValidationError("--expertness-file",
                                   "row count must equal --backers");

    SimConfig cfg{a.backers, a.target, state, em,      mode,
                  a.replications,      a.seed, a.gamma, !a.no_crn};
    SimEstimates est = estimate_metrics(cfg);
    json doc{{"n_backers", a.backers},
             {"target", a.target},
             {"quality_state", state.label()},
             {"mode", a.mode},
             {"replications", est.replications_used},
             {"seed", a.seed},
             {"gamma", a.gamma},
             {"estimates",
              {{"mean_n1", est.mean_n1},
               {"mean_n2", est.mean_n2},
               {"se_mean_n1", est.se_mean_n1},
               {"se_mean_n2", est.se_mean_n2},
               {"success1", est.success1_freq},
               {"success2", est.success2_freq},
               {"se_success1", est.se_success1},
               {"se_success2", est.se_success2},
               {"content", est.contentedness},
               {"se_content", est.se_contentedness},
               {"profit", est.profit},
               {"se_profit", est.se_profit},
               {"effectiveness", est.effectiveness},
               {"se_effectiveness", est.se_effectiveness}}}};
    params["target"] = a.target;
    params["quality"] = a.quality;
    params["mode"] = a.mode;
    if (!a.expertness_file.empty())
        params["expertness_file"] = a.expertness_file;
    else {
        params["p1"] = a.p1;
        params["p2"] = a.p2;
    }
    emit(a.out, doc.dump(2) + "\n", "simulate", params);
    return kOk;
}

int run_validate() {
    int failures = 0;
    auto report = [&](const std::string& name, double dev, double tol) {
        bool ok = dev <= tol;
        if (!ok) ++failures;
        std::printf("%-44s max dev %.3e  (tol %.1e)  %s\n", name.c_str(), dev, tol,
                    ok ? "PASS" : "FAIL");
    };

    auto oracle = supplement::oracle_check(supplement::default_oracle_grid());
    report("first-backer closed forms vs recursion", oracle.max_first_backer_dev, 1e-12);
    report("second-backer posterior scenarios", oracle.max_posterior_dev, 1e-10);
    report("two-backer joint path probabilities", oracle.max_path_dev, 1e-10);
    report("two-backer path normalization", oracle.max_path_sum_err, 1e-10);

    // path-probability normalization for N = 1..4, both regimes
    double sum_err = 0.0;
    for (int n = 1; n <= 4; ++n) {
        std::vector<ExpertnessRow> rows;
        for (int j = 0; j < n; ++j)
            rows.push_back({0.55 + 0.1 * j, 0.9 - 0.08 * j});
        ExpertnessMatrix em(std::move(rows));
        for (auto mode : {LearningMode::OL, LearningMode::NL})
            for (auto state : QualityState::all()) {
                auto pmf = outcome_distribution(state, em, mode);
                sum_err = std::max(sum_err, std::fabs(pmf.total() - 1.0));
            }
    }
    report("path normalization, 1-4 backers", sum_err, 1e-10);

    // project-swap symmetry at the pmf level, exact
    double swap_err = 0.0;
    for (const auto& em : {ExpertnessMatrix({{0.85, 0.6}, {0.7, 0.95}}),
                           ExpertnessMatrix({{0.6, 0.8}, {0.95, 0.55}, {0.7, 0.75}})}) {
        ExpertnessMatrix swapped = em.swapped();
        for (auto mode : {LearningMode::OL, LearningMode::NL})
            for (auto state : QualityState::all()) {
                auto pmf = outcome_distribution(state, em, mode);
                auto mirror = outcome_distribution(state.swapped(), swapped, mode);
                for (int n1 = 0; n1 <= em.size(); ++n1)
                    for (int n2 = 0; n2 <= em.size(); ++n2)
                        swap_err = std::max(
                            swap_err, std::fabs(pmf.mass(n1, n2) - mirror.mass(n2, n1)));
            }
    }
    report("project-swap symmetry (pmf, exact)", swap_err, 0.0);

    // OL equals NL at the two expertness extremes
    double extreme_err = 0.0;
    for (double p : {0.5, 1.0}) {
        ExpertnessMatrix em = ExpertnessMatrix::backer_symmetric({p, p, p});
        for (auto state : QualityState::all()) {
            auto ol = outcome_distribution(state, em, LearningMode::OL);
            auto nl = outcome_distribution(state, em, LearningMode::NL);
            for (int n1 = 0; n1 <= 3; ++n1)
                for (int n2 = 0; n2 <= 3; ++n2)
                    extreme_err = std::max(
                        extreme_err, std::fabs(ol.mass(n1, n2) - nl.mass(n1, n2)));
        }
    }
    report("OL = NL at accuracies 0.5 and 1.0", extreme_err, 1e-12);

    if (failures > 0) {
        std::printf("validation: %d check(s) failed\n", failures);
        return kValidation;
    }
    std::printf("validation: all checks passed\n");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-project crowdfunding model with Bayesian observational learning"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    ExactArgs ex;
    auto* cmd_exact = app.add_subcommand("exact", "Exact metrics for one configuration");
    cmd_exact->add_option("--quality", ex.quality, "true quality state: 11|10|01|00")
        ->required();
    cmd_exact->add_option("--expertness", ex.expertness,
                          "2N accuracies, row-major comma list")
        ->required();
    cmd_exact->add_option("--target", ex.target, "pledges needed to fund")->required();
    cmd_exact->add_option("--gamma", ex.gamma, "service fee rate")->capture_default_str();
    cmd_exact->add_option("--mode", ex.mode, "ol|nl")->capture_default_str();
    cmd_exact->add_option("--format", ex.format, "json|csv")->capture_default_str();
    cmd_exact->add_option("--out", ex.out, "output path (stdout when absent)");

    ImpactArgs im;
    auto* cmd_impact =
        app.add_subcommand("impact", "Improvement/harm potentials over the accuracy grid");
    cmd_impact->add_option("--target", im.target, "1 (relaxed) or 2 (tight)")->required();
    cmd_impact->add_option("--step", im.step, "grid step")->capture_default_str();
    cmd_impact->add_option("--gamma", im.gamma, "service fee rate")->capture_default_str();
    cmd_impact->add_option("--out", im.out, "output path");

    SweepArgs sw;
    auto* cmd_sweep = app.add_subcommand("sweep", "Per-point OL-minus-NL deltas");
    cmd_sweep->add_option("--metric", sw.metric,
                          "content|success1|success2|profit|effectiveness")
        ->required();
    cmd_sweep->add_option("--quality", sw.quality, "11|10|01|00")->required();
    cmd_sweep->add_option("--target", sw.target, "1 or 2")->required();
    cmd_sweep->add_option("--step", sw.step, "grid step")->capture_default_str();
    cmd_sweep->add_option("--gamma", sw.gamma, "service fee rate")->capture_default_str();
    cmd_sweep->add_option("--out", sw.out, "output path");

    EquilibriumArgs eq;
    auto* cmd_eq = app.add_subcommand("equilibrium", "Creators' quality-choice game");
    cmd_eq->add_option("--cost", eq.cost, "development cost in [0,1]")->capture_default_str();
    cmd_eq->add_option("--target", eq.target, "1 or 2")->required();
    cmd_eq->add_option("--mode", eq.mode, "ol|nl")->capture_default_str();
    cmd_eq->add_option("--scheme", eq.scheme, "backer|project")->capture_default_str();
    cmd_eq->add_option("--step", eq.step, "grid step")->capture_default_str();
    cmd_eq->add_flag("--fractions", eq.fractions,
                     "emit high-quality fractions over costs 0, 0.1, ..., 1");
    cmd_eq->add_option("--out", eq.out, "output path");

    SimulateArgs si;
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo estimates for large systems");
    cmd_sim->add_option("--backers", si.backers, "number of backers")->required();
    cmd_sim->add_option("--target", si.target, "pledges needed to fund");
    cmd_sim->add_option("--quality", si.quality, "11|10|01|00");
    cmd_sim->add_option("--p1", si.p1, "accuracy of the first half of the backers");
    cmd_sim->add_option("--p2", si.p2, "accuracy of the second half");
    cmd_sim->add_option("--expertness-file", si.expertness_file,
                        "one 'p1,p2' row per backer");
    cmd_sim->add_option("--mode", si.mode, "ol|nl")->capture_default_str();
    cmd_sim->add_option("--replications", si.replications, "simulated campaigns")->capture_default_str();
    cmd_sim->add_option("--seed", si.seed, "base RNG seed")->capture_default_str();
    cmd_sim->add_option("--gamma", si.gamma, "service fee rate")->capture_default_str();
    cmd_sim->add_flag("--figure9", si.figure9,
                      "full protocol: 25 half/half systems, 3 states, target list");
    cmd_sim->add_option("--targets", si.targets, "comma list of targets (--figure9)");
    cmd_sim->add_flag("--no-crn", si.no_crn,
                      "draw NL signals from streams independent of OL");
    cmd_sim->add_option("--out", si.out, "output path");

    auto* cmd_val =
        app.add_subcommand("validate", "Closed-form and invariant cross-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (cmd_exact->parsed()) return run_exact(ex);
        if (cmd_impact->parsed()) return run_impact(im);
        if (cmd_sweep->parsed()) return run_sweep(sw);
        if (cmd_eq->parsed()) return run_equilibrium(eq);
        if (cmd_sim->parsed()) return run_simulate(si);
        if (cmd_val->parsed()) return run_validate();
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    } catch (const EnumerationLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSizeGuard;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (std::string(e.what()).find("even backer count") != std::string::npos)
            return kProtocol;
        return kUsage;
    }
    return kUsage;
}
