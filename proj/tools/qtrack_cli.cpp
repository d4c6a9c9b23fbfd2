// qtrack: cardinality-constrained index-tracking portfolios via QUBO
// compilation and simulated annealing.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qtrack/market_data.hpp"
#include "qtrack/metrics.hpp"
#include "qtrack/objectives.hpp"
#include "qtrack/report_io.hpp"
#include "qtrack/solver.hpp"

namespace {

using namespace qtrack;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoFeasible = 2;
constexpr int kExitDataError = 3;

struct Options {
    std::string data;
    std::string index_col = "INDEX";
    std::string out = ".";
    int resolution = 63;
    int cardinality = 25;
    double max_holding = 0.20;
    double gamma = 1.0;
    double lambda = 0.0;
    std::vector<double> lambda_grid;
    std::vector<int> cardinality_grid;
    std::vector<int> resolution_grid;
    int samples = 0;  // 0 = per-command default (20 track, 10 enhance)
    int sweeps = 5000;
    std::uint64_t seed = 0;
    double penalty_budget = 1.0;
    double penalty_card = 1.0;
    double penalty_indicator = 1.0;
    bool auto_scale = false;
    int window = 90;
    std::string weights_file;  // report command
};

struct LoadedData {
    ReturnsPanel panel;
    CovarianceSet covset;
    int window = 0;
};

LoadedData load_data(const Options& opt, bool need_index) {
    LoadedData data;
    data.panel = to_returns(load_prices(opt.data, opt.index_col));
    if (need_index && !data.panel.has_index)
        throw ValidationError("no '" + opt.index_col + "' column in " + opt.data +
                              " (set --index-col)");
    const auto t_periods = static_cast<int>(data.panel.n_periods());
    // Short fixtures get the largest window that fits.
    data.window = std::min(opt.window, t_periods);
    if (data.window < 2)
        throw InsufficientDataError("need at least 2 return periods, got " +
                                    std::to_string(t_periods));
    if (data.window != opt.window)
        std::cerr << "note: window clamped to " << data.window << " periods\n";
    data.covset = covariances(data.panel, data.window);
    return data;
}

ObjectiveConfig objective_config(const Options& opt, ObjectiveMode mode, double lambda = 0.0) {
    ObjectiveConfig cfg;
    cfg.mode = mode;
    cfg.gamma = opt.gamma;
    cfg.lambda = lambda;
    cfg.budget_weight = opt.penalty_budget;
    cfg.cardinality_weight = opt.penalty_card;
    cfg.indicator_weight = opt.penalty_indicator;
    cfg.auto_scale_penalties = opt.auto_scale;
    return cfg;
}

AnnealConfig anneal_config(const Options& opt, int default_samples) {
    AnnealConfig cfg;
    cfg.n_samples = opt.samples > 0 ? opt.samples : default_samples;
    cfg.sweeps = opt.sweeps;
    cfg.seed = opt.seed;
    return cfg;
}

std::string weights_csv(const Solution& solution, const std::vector<std::string>& asset_ids) {
    std::ostringstream out;
    out << "asset,weight,selected\n";
    for (Eigen::Index i = 0; i < solution.weights.size(); ++i)
        out << asset_ids[static_cast<std::size_t>(i)] << ','
            << format_sig(solution.weights(i)) << ',' << solution.selected(i) << '\n';
    return out.str();
}

std::string cumrets_csv(const Solution& solution, const ReturnsPanel& panel) {
    std::ostringstream out;
    out << "date,index_cumlog,portfolio_cumlog\n";
    const Eigen::VectorXd port = panel.portfolio_returns(solution.weights);
    double cum_index = 0.0, cum_port = 0.0;
    for (Eigen::Index t = 0; t < panel.n_periods(); ++t) {
        cum_index += std::log1p(panel.index_returns(t));
        cum_port += std::log1p(port(t));
        out << panel.dates[static_cast<std::size_t>(t)] << ','
            << format_sig(cum_index) << ',' << format_sig(cum_port) << '\n';
    }
    return out.str();
}

ordered_json run_metadata(const Options& opt, const EncodingScheme& scheme,
                          const AnnealConfig& anneal) {
    ordered_json meta;
    meta["K"] = scheme.resolution;
    meta["C"] = scheme.cardinality;
    meta["max_holding"] = scheme.max_holding_fraction;
    meta["K_max"] = scheme.k_max;
    meta["D"] = scheme.depth();
    meta["total_variables"] = registry_for(scheme).num_vars();
    meta["gamma"] = opt.gamma;
    meta["seed"] = anneal.seed;
    meta["samples"] = anneal.n_samples;
    meta["sweeps"] = anneal.sweeps;
    meta["auto_scale_penalties"] = opt.auto_scale;
    return meta;
}

struct TrackRun {
    EncodingScheme scheme;
    RankedSolutions ranked;
    std::vector<TrackingReport> feasible_reports;  // parallel to ranked.feasible
};

TrackRun solve_tracking(const Options& opt, const LoadedData& data, double lambda,
                        bool enhanced, int default_samples) {
    TrackRun run;
    run.scheme = build_scheme(opt.resolution, opt.cardinality, opt.max_holding,
                              static_cast<int>(data.panel.n_assets()));
    const ObjectiveConfig cfg = objective_config(
        opt, enhanced ? ObjectiveMode::enhanced : ObjectiveMode::tracking, lambda);
    const QuboModel model =
        enhanced ? build_enhanced(data.panel, run.scheme, data.covset, cfg)
                 : build_tracking(data.panel, run.scheme, cfg);
    const AnnealConfig anneal = anneal_config(opt, default_samples);
    run.ranked = filter_rank(solve_sa(model, anneal), run.scheme);
    for (const Solution& sol : run.ranked.feasible) {
        TrackingReport report = make_report(sol.weights, data.panel, data.covset);
        report.success_rate = run.ranked.success_rate;
        run.feasible_reports.push_back(std::move(report));
    }
    return run;
}

void diagnose_infeasible(const RankedSolutions& ranked) {
    std::map<std::string, int> counts;
    for (const Solution& sol : ranked.infeasible)
        for (const std::string& v : sol.verdict.violations)
            ++counts[v.substr(0, v.find(':'))];
    std::cerr << "no feasible solution in " << ranked.infeasible.size() << " samples;"
              << " violation counts:";
    for (const auto& [tag, count] : counts) std::cerr << ' ' << tag << '=' << count;
    std::cerr << '\n';
}

int cmd_track(const Options& opt) {
    const LoadedData data = load_data(opt, true);
    const TrackRun run = solve_tracking(opt, data, 0.0, false, 20);
    const AnnealConfig anneal = anneal_config(opt, 20);

    fs::create_directories(opt.out);
    ordered_json doc;
    doc["metadata"] = run_metadata(opt, run.scheme, anneal);
    doc["success_rate"] = run.ranked.success_rate;
    ordered_json solutions = ordered_json::array();
    for (std::size_t i = 0; i < run.ranked.feasible.size(); ++i)
        solutions.push_back(solution_to_json(run.ranked.feasible[i], data.panel.asset_ids,
                                             &run.feasible_reports[i]));
    for (const Solution& sol : run.ranked.infeasible)
        solutions.push_back(solution_to_json(sol, data.panel.asset_ids, nullptr));
    doc["solutions"] = solutions;

    {
        std::ostringstream success;
        success << "C=" << run.scheme.cardinality << " K=" << run.scheme.resolution
                << " success_rate=" << format_percent(run.ranked.success_rate) << " ("
                << run.ranked.feasible.size() << '/'
                << run.ranked.feasible.size() + run.ranked.infeasible.size() << ")\n";
        atomic_write(fs::path(opt.out) / "success.txt", success.str());
    }

    if (run.ranked.feasible.empty()) {
        doc["best_by_energy_sample"] = nullptr;
        doc["best_by_cte_sample"] = nullptr;
        atomic_write(fs::path(opt.out) / "solutions.json", doc.dump(2) + "\n");
        diagnose_infeasible(run.ranked);
        return kExitNoFeasible;
    }

    // Feasible list is energy-sorted; also surface the lowest-CTE sample.
    std::size_t best_cte = 0;
    for (std::size_t i = 1; i < run.feasible_reports.size(); ++i)
        if (run.feasible_reports[i].cte < run.feasible_reports[best_cte].cte) best_cte = i;
    doc["best_by_energy_sample"] = run.ranked.feasible.front().sample_index;
    doc["best_by_cte_sample"] = run.ranked.feasible[best_cte].sample_index;
    atomic_write(fs::path(opt.out) / "solutions.json", doc.dump(2) + "\n");

    atomic_write(fs::path(opt.out) / "report.csv",
                 tracking_report_csv(
                     {{run.scheme.cardinality, run.scheme.resolution, run.feasible_reports[0]},
                      {run.scheme.cardinality, run.scheme.resolution,
                       run.feasible_reports[best_cte]}}));
    atomic_write(fs::path(opt.out) / "cumrets.csv",
                 cumrets_csv(run.ranked.feasible.front(), data.panel));
    atomic_write(fs::path(opt.out) / "weights.csv",
                 weights_csv(run.ranked.feasible.front(), data.panel.asset_ids));
    return kExitOk;
}

int cmd_enhance(const Options& opt) {
    std::vector<double> grid = opt.lambda_grid;
    if (grid.empty()) grid.push_back(opt.lambda);
    for (double lambda : grid)
        if (lambda < 0.0 || lambda > 1.0)
            throw ValidationError("lambda " + std::to_string(lambda) + " outside [0, 1]");

    const LoadedData data = load_data(opt, true);
    fs::create_directories(opt.out);

    std::ostringstream table, scatter;
    table << "lambda,e_cte,vol_error,mdrse,correlation,score\n";
    scatter << "lambda,sample_index,e_cte,mdrse,feasible\n";
    bool any_missing = false;
    for (double lambda : grid) {
        const TrackRun run = solve_tracking(opt, data, lambda, true, 10);
        for (std::size_t i = 0; i < run.ranked.feasible.size(); ++i)
            scatter << format_sig(lambda) << ',' << run.ranked.feasible[i].sample_index << ','
                    << format_sig(run.feasible_reports[i].cte) << ','
                    << format_sig(run.feasible_reports[i].mdrse) << ",1\n";
        for (const Solution& sol : run.ranked.infeasible)
            scatter << format_sig(lambda) << ',' << sol.sample_index << ",,,0\n";
        if (run.feasible_reports.empty()) {
            std::cerr << "lambda=" << lambda << ": ";
            diagnose_infeasible(run.ranked);
            any_missing = true;
            continue;
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < run.feasible_reports.size(); ++i)
            if (run.feasible_reports[i].enhancement_score >
                run.feasible_reports[best].enhancement_score)
                best = i;
        const TrackingReport& r = run.feasible_reports[best];
        table << format_sig(lambda) << ',' << format_cte(r.cte) << ','
              << format_sig(r.vol_error) << ',' << format_sig(r.mdrse) << ','
              << format_sig(r.correlation) << ',' << format_sig(r.enhancement_score) << '\n';
    }
    atomic_write(fs::path(opt.out) / "enhanced.csv", table.str());
    atomic_write(fs::path(opt.out) / "sharpe_vs_tracking.csv", scatter.str());
    return any_missing ? kExitNoFeasible : kExitOk;
}

int cmd_sweep(const Options& opt) {
    if (opt.cardinality_grid.empty() || opt.resolution_grid.empty())
        throw ValidationError("sweep needs --cardinality-grid and --resolution-grid");
    const LoadedData data = load_data(opt, true);
    fs::create_directories(opt.out);

    std::ostringstream boxplot;
    boxplot << "C,K,sample_index,e_cte,feasible\n";
    std::vector<std::tuple<int, int, TrackingReport>> summary_rows;
    for (int c : opt.cardinality_grid) {
        for (int k : opt.resolution_grid) {
            Options pair_opt = opt;
            pair_opt.cardinality = c;
            pair_opt.resolution = k;
            EncodingScheme probe;
            try {
                probe = build_scheme(k, c, opt.max_holding,
                                     static_cast<int>(data.panel.n_assets()));
            } catch (const Error& e) {
                std::cerr << "skipping C=" << c << " K=" << k << ": " << e.what() << '\n';
                continue;
            }
            std::cerr << "C=" << c << " K=" << k << " D=" << probe.depth()
                      << " vars=" << registry_for(probe).num_vars() << '\n';
            const TrackRun run = solve_tracking(pair_opt, data, 0.0, false, 20);
            for (std::size_t i = 0; i < run.ranked.feasible.size(); ++i)
                boxplot << c << ',' << k << ',' << run.ranked.feasible[i].sample_index << ','
                        << format_sig(run.feasible_reports[i].cte) << ",1\n";
            for (const Solution& sol : run.ranked.infeasible)
                boxplot << c << ',' << k << ',' << sol.sample_index << ",,0\n";
            if (!run.feasible_reports.empty())
                summary_rows.emplace_back(c, k, run.feasible_reports.front());
        }
    }
    atomic_write(fs::path(opt.out) / "boxplot.csv", boxplot.str());
    atomic_write(fs::path(opt.out) / "summary.csv", tracking_report_csv(summary_rows));
    return summary_rows.empty() ? kExitNoFeasible : kExitOk;
}

int cmd_markowitz(const Options& opt) {
    const LoadedData data = load_data(opt, false);
    const auto scheme = build_scheme(opt.resolution, opt.cardinality, opt.max_holding,
                                     static_cast<int>(data.panel.n_assets()));
    const QuboModel model =
        build_markowitz(data.panel, scheme, objective_config(opt, ObjectiveMode::markowitz));
    const AnnealConfig anneal = anneal_config(opt, 20);
    const std::vector<Sample> samples = solve_sa(model, anneal);

    fs::create_directories(opt.out);
    ordered_json doc;
    doc["metadata"] = run_metadata(opt, scheme, anneal);
    ordered_json solutions = ordered_json::array();
    const Sample* best = nullptr;
    Eigen::VectorXd best_weights;
    Eigen::VectorXi best_selected;
    for (const Sample& s : samples) {
        const DecodedPortfolio p = decode(s.assignment, scheme);
        // Markowitz has no cardinality term: only the budget must bind.
        long units = 0;
        for (int u : p.units) units += u;
        const bool budget_ok = units == scheme.resolution;
        ordered_json j;
        j["sample_index"] = s.sample_index;
        j["energy"] = s.energy;
        j["budget_satisfied"] = budget_ok;
        ordered_json w = ordered_json::object();
        for (Eigen::Index i = 0; i < p.weights.size(); ++i)
            if (p.weights(i) != 0.0)
                w[data.panel.asset_ids[static_cast<std::size_t>(i)]] = p.weights(i);
        j["weights"] = w;
        solutions.push_back(j);
        if (budget_ok && best == nullptr) {
            best = &s;
            best_weights = p.weights;
            best_selected = (p.weights.array() > 0.0).cast<int>();
        }
    }
    doc["solutions"] = solutions;
    atomic_write(fs::path(opt.out) / "solutions.json", doc.dump(2) + "\n");
    if (best == nullptr) {
        std::cerr << "no sample satisfied the unit budget\n";
        return kExitNoFeasible;
    }
    Solution sol;
    sol.weights = best_weights;
    sol.selected = best_selected;
    atomic_write(fs::path(opt.out) / "weights.csv", weights_csv(sol, data.panel.asset_ids));
    return kExitOk;
}

Eigen::VectorXd read_weights_csv(const std::string& path,
                                 const std::vector<std::string>& asset_ids) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open weights file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("asset,weight", 0) != 0)
        throw ParseError(path + ": expected 'asset,weight,selected' header");
    Eigen::VectorXd weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(asset_ids.size()));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string asset, weight_str;
        std::getline(row, asset, ',');
        std::getline(row, weight_str, ',');
        const auto it = std::find(asset_ids.begin(), asset_ids.end(), asset);
        if (it == asset_ids.end())
            throw ValidationError(path + ": unknown asset '" + asset + "'");
        weights(static_cast<Eigen::Index>(it - asset_ids.begin())) = std::stod(weight_str);
    }
    return weights;
}

int cmd_report(const Options& opt) {
    const LoadedData data = load_data(opt, true);
    const Eigen::VectorXd weights = read_weights_csv(opt.weights_file, data.panel.asset_ids);
    const TrackingReport report = make_report(weights, data.panel, data.covset);
    fs::create_directories(opt.out);
    atomic_write(fs::path(opt.out) / "report.json", report_to_json(report).dump(2) + "\n");
    std::cout << report_to_json(report).dump(2) << '\n';
    return kExitOk;
}

void add_common_options(CLI::App* cmd, Options& opt, bool solver_opts = true) {
    cmd->add_option("--data", opt.data, "wide price CSV (date,tickers...,INDEX)")
        ->required();
    cmd->add_option("--index-col", opt.index_col, "index column name");
    cmd->add_option("--out", opt.out, "output directory");
    cmd->add_option("--resolution", opt.resolution, "units of investment K");
    cmd->add_option("--cardinality", opt.cardinality, "portfolio cardinality C");
    cmd->add_option("--max-holding", opt.max_holding, "max per-asset weight fraction");
    cmd->add_option("--gamma", opt.gamma, "risk aversion");
    cmd->add_option("--window", opt.window, "rolling covariance window (periods)");
    if (solver_opts) {
        cmd->add_option("--samples", opt.samples, "annealer samples");
        cmd->add_option("--sweeps", opt.sweeps, "annealer sweeps per sample");
        cmd->add_option("--seed", opt.seed, "RNG seed");
        cmd->add_option("--penalty-budget", opt.penalty_budget, "budget penalty weight");
        cmd->add_option("--penalty-card", opt.penalty_card, "cardinality penalty weight");
        cmd->add_option("--penalty-indicator", opt.penalty_indicator,
                        "indicator coupling weight");
        cmd->add_flag("--auto-scale-penalties", opt.auto_scale,
                      "scale penalties to the objective coefficients");
    }
    cmd->set_config("--config", "", "key=value config file; flags override");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"index-tracking portfolio construction via QUBO annealing"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* track = app.add_subcommand("track", "cardinality-constrained index tracking");
    add_common_options(track, opt);
    CLI::App* enhance = app.add_subcommand("enhance", "lambda-blended enhanced tracking");
    add_common_options(enhance, opt);
    enhance->add_option("--lambda", opt.lambda, "risk ratio in [0,1]");
    enhance->add_option("--lambda-grid", opt.lambda_grid, "risk-ratio grid")
        ->delimiter(',');
    CLI::App* sweep = app.add_subcommand("sweep", "grid over (C, K) pairs");
    add_common_options(sweep, opt);
    sweep->add_option("--cardinality-grid", opt.cardinality_grid, "C grid")->delimiter(',');
    sweep->add_option("--resolution-grid", opt.resolution_grid, "K grid")->delimiter(',');
    CLI::App* markowitz = app.add_subcommand("markowitz", "mean-variance portfolio");
    add_common_options(markowitz, opt);
    CLI::App* report = app.add_subcommand("report", "re-score a weights file");
    add_common_options(report, opt, false);
    report->add_option("--weights", opt.weights_file, "weights.csv to score")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (track->parsed()) return cmd_track(opt);
        if (enhance->parsed()) return cmd_enhance(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        if (markowitz->parsed()) return cmd_markowitz(opt);
        if (report->parsed()) return cmd_report(opt);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const InsufficientDataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
