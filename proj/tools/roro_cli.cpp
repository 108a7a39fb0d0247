// roro: command-line runner for the risk-on/risk-off experiment matrix.
//
//   roro run      --config cfg.json --data-dir data --out results [--universe U]... [--strategy S]...
//   roro signals  --config cfg.json --data-dir data --out results
//   roro table    --in results --out-format csv|md [--universe U]...
//   roro fixtures --out data [--seed N] [--days N]
//
// Exit codes: 0 success, 2 validation failure, 3 computation error.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "roro/roro.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitComputation = 3;

roro::ExperimentConfig build_config(const std::string& config_path, const std::string& data_dir,
                                    const std::string& out_dir,
                                    const std::vector<std::string>& universes,
                                    const std::vector<std::string>& strategies) {
    roro::ExperimentConfig cfg = config_path.empty() ? roro::ExperimentConfig{}
                                                     : roro::load_config(config_path);
    if (!data_dir.empty()) cfg.data_dir = data_dir;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!universes.empty()) {
        cfg.universes.clear();
        for (const auto& u : universes) {
            auto id = roro::parse_universe(u);
            if (!id) throw roro::ValidationError("unknown universe '" + u + "'");
            cfg.universes.push_back(*id);
        }
    }
    if (!strategies.empty()) {
        cfg.strategies.clear();
        for (const auto& s : strategies) {
            auto id = roro::parse_strategy(s);
            if (!id) throw roro::ValidationError("unknown strategy '" + s + "'");
            cfg.strategies.push_back(*id);
        }
    }
    cfg.validate();
    return cfg;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Risk-on/risk-off backtesting with news sentiment and a stress index"};
    app.require_subcommand(1);

    std::string config_path, data_dir, out_dir, in_dir, out_format = "md";
    std::vector<std::string> universes, strategies;
    std::uint64_t seed = roro::FixtureParams{}.seed;
    std::size_t days = roro::FixtureParams{}.n_days;

    auto* run = app.add_subcommand("run", "Run the universe x strategy matrix");
    run->add_option("--config", config_path, "JSON config (every field optional)");
    run->add_option("--universe", universes, "SP500, NASDAQ or WORLD6; repeatable");
    run->add_option("--strategy", strategies, "LongOnly, VIX, SI, News, SINews, DynamicSINews; repeatable");
    run->add_option("--data-dir", data_dir, "Directory holding the input CSV files");
    run->add_option("--out", out_dir, "Output directory");

    auto* signals = app.add_subcommand("signals", "Export the raw signals as date,value CSV");
    signals->add_option("--config", config_path, "JSON config");
    signals->add_option("--data-dir", data_dir, "Directory holding the input CSV files");
    signals->add_option("--out", out_dir, "Output directory");

    auto* table = app.add_subcommand("table", "Print the performance tables of a finished run");
    table->add_option("--in", in_dir, "Output directory of a previous run")->required();
    table->add_option("--out-format", out_format, "csv or md")
        ->check(CLI::IsMember({"csv", "md"}));
    table->add_option("--universe", universes, "Restrict to these universes");

    auto* fixtures = app.add_subcommand("fixtures", "Write the synthetic input fixtures");
    fixtures->add_option("--out", out_dir, "Directory for prices.csv, risk.csv, sentiment.csv")->required();
    fixtures->add_option("--seed", seed, "Generator seed");
    fixtures->add_option("--days", days, "Number of weekdays");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    try {
        roro::LexiconScorer scorer;
        if (*run) {
            auto cfg = build_config(config_path, data_dir, out_dir, universes, strategies);
            auto result = roro::run_matrix(cfg, scorer, cfg.output_dir);
            print_warnings(result.warnings);
            std::cout << "wrote " << result.files.size() << " files to " << cfg.output_dir << '\n';
        } else if (*signals) {
            auto cfg = build_config(config_path, data_dir, out_dir, {}, {});
            auto files = roro::plan_signals(cfg, scorer);
            roro::write_outputs(files, cfg.output_dir);
            std::cout << "wrote " << files.size() << " signal files to " << cfg.output_dir << '\n';
        } else if (*table) {
            std::vector<roro::Universe> which;
            for (const auto& u : universes) {
                auto id = roro::parse_universe(u);
                if (!id) throw roro::ValidationError("unknown universe '" + u + "'");
                which.push_back(*id);
            }
            if (which.empty()) which.assign(roro::kAllUniverses.begin(), roro::kAllUniverses.end());
            bool any = false;
            for (auto u : which) {
                std::string name(roro::to_string(u));
                std::string path = roro::join_path(roro::join_path(in_dir, name), "perf_table.csv");
                if (!std::filesystem::exists(path)) continue;
                auto rows = roro::parse_perf_csv(roro::csv::read_file(path));
                if (any) std::cout << '\n';
                any = true;
                if (out_format == "csv") {
                    std::cout << "# " << name << '\n';
                    roro::write_perf_csv(rows, std::cout);
                } else {
                    roro::write_perf_markdown(rows, std::cout, "Comparative analysis of strategies: " + name);
                }
            }
            if (!any) throw roro::ValidationError("no perf_table.csv found under '" + in_dir + "'");
        } else if (*fixtures) {
            roro::FixtureParams p;
            p.seed = seed;
            p.n_days = days;
            roro::write_fixtures(out_dir, p);
            std::cout << "wrote fixtures to " << out_dir << '\n';
        }
    } catch (const roro::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "computation error: " << e.what() << '\n';
        return kExitComputation;
    }
    return 0;
}
