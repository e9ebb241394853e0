#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rmtcorr/error.hpp"
#include "rmtcorr/io.hpp"
#include "rmtcorr/sectors.hpp"
#include "rmtcorr/simulator.hpp"

namespace rmtcorr::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string(), path.string());
    return out;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string(), path.string());
    return in;
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
    auto out = open_output(path);
    fn(out);
    if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string(), path.string());
}

void write_text(const fs::path& path, const std::string& text) {
    write_file(path, [&](std::ostream& out) { out << text << '\n'; });
}

fs::path resolve_out_dir(const std::string& flag) {
    fs::path dir = flag;
    if (dir.empty()) {
        const char* env = std::getenv(kOutDirEnv);
        dir = env && *env ? fs::path(env) : fs::path(".");
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string(), dir.string());
    return dir;
}

std::optional<double> optional_ratio(std::optional<WishartBounds> b, double value) {
    if (!b) return std::nullopt;
    return value / b->lambda_max;
}

ordered_json to_json(std::optional<double> v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::vector<double> parse_grid(const std::string& text) {
    // lo:hi:step, inclusive of hi up to rounding
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
    if (parts.size() != 3 || !(parts[2] > 0.0) || !(parts[1] >= parts[0]) || !(parts[0] > 0.0) ||
        parts[1] > 1.0) {
        throw CLI::ValidationError("--threshold-grid", "expected lo:hi:step with 0 < lo <= hi <= 1");
    }
    std::vector<double> grid;
    const auto steps = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (std::size_t k = 0; k <= steps; ++k) {
        grid.push_back(parts[0] + static_cast<double>(k) * parts[2]);
    }
    return grid;
}

struct IngestFlags {
    std::string leading_gap = "backfill";
    std::string zero_variance = "drop";
    int interval = 1;
};

void add_ingest_flags(CLI::App* cmd, IngestFlags& f) {
    cmd->add_option("--leading-gap", f.leading_gap,
                    "Cells before a ticker's first price: backfill or reject")
        ->check(CLI::IsMember({"backfill", "reject"}))
        ->capture_default_str();
    cmd->add_option("--zero-variance", f.zero_variance,
                    "Constant-price tickers: drop (with warning) or abort")
        ->check(CLI::IsMember({"drop", "abort"}))
        ->capture_default_str();
    cmd->add_option("--interval", f.interval, "Return interval in trading days")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void add_analysis_flags(CLI::App* cmd, AnalysisOptions& o, std::string& grid) {
    cmd->add_option("--thresholds", o.thresholds, "Component thresholds u_c")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--modes", o.modes, "Eigenmodes for the composition tables (0 = largest)")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--threshold-grid", grid, "Threshold scan lo:hi:step written to scan.csv");
    cmd->add_option("--bin-width", o.bin_width, "Bin width of the C_ij histogram")
        ->check(CLI::Range(0.0, 2.0))
        ->capture_default_str();
    cmd->add_option("--eig-bin-width", o.eig_bin_width, "Bin width of the eigenvalue histogram")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--margin", o.margin, "Relative margin above lambda_max for deviating modes")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--surrogates", o.surrogates, "Shuffle-surrogate replicates")
        ->capture_default_str();
    cmd->add_option("--band", o.band, "Padding of the Wishart band for surrogate compliance")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

struct LoadedReturns {
    ReturnMatrix returns;
    DatasetInfo info;
    PriceTable table;
};

LoadedReturns load_returns(const std::string& prices_path, const IngestFlags& flags,
                           std::ostream& err) {
    LoadOptions lo;
    lo.leading_gap = flags.leading_gap == "reject" ? LeadingGapPolicy::Reject
                                                   : LeadingGapPolicy::Backfill;
    auto in = open_input(prices_path);
    LoadedReturns loaded;
    loaded.table = load_prices(in, lo);

    auto raw = log_returns(loaded.table, flags.interval);
    if (flags.zero_variance == "drop") {
        auto screen = drop_zero_variance(std::move(raw));
        for (const auto& t : screen.dropped) {
            err << "warning: dropping ticker " << t << " (zero return variance)\n";
        }
        if (screen.kept.tickers.size() < 2) {
            throw Error(ErrorCode::TooSmall, "fewer than 2 tickers left after dropping constant series");
        }
        loaded.info.dropped = std::move(screen.dropped);
        raw = std::move(screen.kept);
    }
    loaded.returns = normalize(std::move(raw));
    loaded.info.source = "prices";
    loaded.info.period_start = loaded.table.dates.front();
    loaded.info.period_end = loaded.table.dates.back();
    loaded.info.filled_cells = loaded.table.filled_count();
    return loaded;
}

void print_error(std::ostream& err, const Error& e) {
    ordered_json j{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (!e.subject().empty()) j["subject"] = e.subject();
    err << j.dump() << '\n';
}

}  // namespace

ordered_json analyze_returns(const ReturnMatrix& returns, const SectorMap& map,
                             const AnalysisOptions& options, const DatasetInfo& info,
                             const fs::path& out_dir) {
    const auto corr = correlation(returns);
    const auto stats = element_stats(corr, options.bin_width);
    const auto spectrum = eigensolve(corr, kJacobiTolerance, options.margin);

    std::vector<std::size_t> modes;
    for (auto m : options.modes) {
        if (m < spectrum.order()) modes.push_back(m);
    }
    if (modes.empty()) {
        throw Error(ErrorCode::ModeOutOfRange, "none of the requested modes exist for N = " +
                                                   std::to_string(spectrum.order()));
    }
    const auto composition = composition_report(spectrum, map, modes, options.thresholds);
    const auto surrogates = shuffle_surrogate(returns, options.seed, options.surrogates);

    write_file(out_dir / "corr.csv", [&](std::ostream& o) { write_corr_csv(o, corr); });
    write_file(out_dir / "spectrum.csv", [&](std::ostream& o) { write_spectrum_csv(o, spectrum); });
    write_text(out_dir / "spectrum.json", spectrum_json(spectrum));
    write_file(out_dir / "eigvecs.csv", [&](std::ostream& o) { write_eigvecs_csv(o, spectrum); });
    write_file(out_dir / "hist_elements.csv",
               [&](std::ostream& o) { write_histogram_csv(o, stats.histogram); });
    write_file(out_dir / "hist_eigs.csv", [&](std::ostream& o) {
        write_histogram_csv(o, eigenvalue_histogram(spectrum, options.eig_bin_width));
    });
    write_text(out_dir / "element_stats.json", element_stats_json(stats));
    write_file(out_dir / "composition.csv",
               [&](std::ostream& o) { write_composition_csv(o, composition); });
    write_text(out_dir / "composition.json", composition_json(composition));
    write_file(out_dir / "components.csv",
               [&](std::ostream& o) { write_components_csv(o, spectrum, map, modes); });
    if (spectrum.bounds) {
        write_file(out_dir / "mp_density.csv",
                   [&](std::ostream& o) { write_mp_curve_csv(o, *spectrum.bounds, 201); });
    }
    if (options.threshold_grid) {
        write_file(out_dir / "scan.csv", [&](std::ostream& o) {
            o << "mode,u_c,category,share,members\n";
            for (auto m : modes) {
                for (double u : *options.threshold_grid) {
                    const auto set = dominant_components(spectrum, m, u, map);
                    for (auto c : {Category::ST, Category::BlueChip, Category::General}) {
                        const auto share = set.share(c);
                        o << m << ',' << format_short(u) << ',' << to_string(c) << ','
                          << (share ? format_double(*share) : std::string("—")) << ','
                          << set.size() << '\n';
                    }
                }
            }
        });
    }

    ordered_json report;
    report["schema_version"] = kReportSchemaVersion;
    report["tool"] = {{"name", "rmtcorr"}, {"version", kToolVersion}};

    ordered_json dataset;
    dataset["source"] = info.source;
    dataset["N"] = spectrum.order();
    dataset["T"] = returns.length();
    dataset["Q"] = spectrum.bounds ? ordered_json(spectrum.bounds->q) : ordered_json(nullptr);
    if (info.period_start && info.period_end) {
        dataset["period"] = {{"start", *info.period_start}, {"end", *info.period_end}};
    } else {
        dataset["period"] = nullptr;
    }
    dataset["interval"] = returns.interval;
    dataset["dropped_tickers"] = info.dropped;
    dataset["filled_cells"] = info.filled_cells;
    report["dataset"] = std::move(dataset);

    report["element_stats"] = {{"count", stats.count},
                               {"mean", stats.mean},
                               {"min", stats.min},
                               {"max", stats.max},
                               {"count_negative", stats.count_negative},
                               {"bin_width", options.bin_width}};

    const double lambda0 = spectrum.order() ? spectrum.eigenvalues(0) : 0.0;
    const double lambda_last =
        spectrum.order() ? spectrum.eigenvalues(spectrum.eigenvalues.size() - 1) : 0.0;
    report["spectrum"] = {
        {"lambda_0", lambda0},
        {"lambda_min", lambda_last},
        {"bounds", spectrum.bounds ? ordered_json::parse(bounds_json(*spectrum.bounds))
                                   : ordered_json(nullptr)},
        {"lambda_0_over_lambda_max_ran", to_json(optional_ratio(spectrum.bounds, lambda0))},
        {"margin", options.margin},
        {"deviating_count", spectrum.deviating.size()},
        {"deviating", spectrum.deviating},
        {"residual_max", spectrum.residual_max},
        {"sweeps", spectrum.sweeps}};

    ordered_json surrogate;
    surrogate["seed"] = options.seed;
    surrogate["replicates"] = options.surrogates;
    if (spectrum.bounds) {
        const auto bc = band_compliance(surrogates, *spectrum.bounds, options.band);
        surrogate["band"] = {bc.band_lo, bc.band_hi};
        surrogate["compliance"] = to_json(bc.fraction());
        surrogate["replicates_inside"] = bc.replicates_inside;
    } else {
        surrogate["band"] = nullptr;
        surrogate["compliance"] = nullptr;
        surrogate["replicates_inside"] = nullptr;
    }
    std::optional<double> surrogate_max;
    for (const auto& s : surrogates) {
        if (s.order() == 0) continue;
        surrogate_max = std::max(surrogate_max.value_or(-INFINITY), s.eigenvalues(0));
    }
    surrogate["max_eigenvalue"] = to_json(surrogate_max);
    report["surrogate"] = std::move(surrogate);

    report["composition"] = ordered_json::parse(composition_json(composition));
    report["seeds"] = {{"surrogate", options.seed},
                       {"simulation", info.simulation_seed ? ordered_json(*info.simulation_seed)
                                                           : ordered_json(nullptr)}};

    write_text(out_dir / "report.json", report.dump(2));
    return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cross-correlation spectra of return series against Wishart predictions"};
    app.name("rmtcorr");
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Full spectral analysis of a price file");
    std::string prices_path;
    std::string sectors_path;
    std::string out_flag;
    std::string dump_table;
    std::string grid_flag;
    IngestFlags ingest_flags;
    AnalysisOptions analysis;
    analyze->add_option("--prices", prices_path, "Long-format CSV date,ticker,close")->required();
    analyze->add_option("--sectors", sectors_path, "CSV ticker,business_sector,category");
    analyze->add_option("--out", out_flag, "Output directory (default $RMTCORR_OUT_DIR or .)");
    analyze->add_option("--dump-table", dump_table, "Write the aligned wide price table here");
    analyze->add_option("--seed", analysis.seed, "Seed of the shuffle surrogates")
        ->capture_default_str();
    add_ingest_flags(analyze, ingest_flags);
    add_analysis_flags(analyze, analysis, grid_flag);

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic factor-model market");
    std::string config_path;
    std::optional<std::uint64_t> sim_seed;
    bool chain_analyze = false;
    bool shared_profit = false;
    std::string sim_out;
    std::string sim_grid;
    AnalysisOptions sim_analysis;
    simulate_cmd->add_option("--config", config_path,
                             "JSON config; omitted fields use the default calibration");
    simulate_cmd->add_option("--seed", sim_seed, "Overrides the config seed");
    simulate_cmd->add_option("--out", sim_out, "Output directory (default $RMTCORR_OUT_DIR or .)");
    simulate_cmd->add_flag("--analyze", chain_analyze, "Run the analysis on the simulated market");
    simulate_cmd->add_flag("--shared-profit-factor", shared_profit,
                           "Use one profit process for every category");
    simulate_cmd->add_option("--surrogate-seed", sim_analysis.seed,
                             "Seed of the shuffle surrogates used by --analyze")
        ->capture_default_str();
    add_analysis_flags(simulate_cmd, sim_analysis, sim_grid);

    // mp-bounds
    auto* bounds_cmd = app.add_subcommand("mp-bounds", "Print the Wishart eigenvalue bounds");
    long long n_stocks = 0;
    long long n_samples = 0;
    bounds_cmd->add_option("N", n_stocks, "Number of stocks")->required();
    bounds_cmd->add_option("T", n_samples, "Number of returns per stock")->required();

    // surrogate
    auto* surrogate_cmd = app.add_subcommand("surrogate", "Shuffle-surrogate spectra");
    std::string sur_prices;
    std::string sur_out;
    std::uint64_t sur_seed = 0;
    std::size_t replicates = 10;
    double sur_band = kSurrogateBandPad;
    IngestFlags sur_ingest;
    surrogate_cmd->add_option("--prices", sur_prices, "Long-format CSV date,ticker,close")
        ->required();
    surrogate_cmd->add_option("--seed", sur_seed, "Shuffle seed")->capture_default_str();
    surrogate_cmd->add_option("--replicates", replicates, "Number of shuffles")
        ->capture_default_str();
    surrogate_cmd->add_option("--band", sur_band, "Padding of the Wishart band")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    surrogate_cmd->add_option("--out", sur_out, "Output directory (default $RMTCORR_OUT_DIR or .)");
    add_ingest_flags(surrogate_cmd, sur_ingest);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        if (!grid_flag.empty()) analysis.threshold_grid = parse_grid(grid_flag);
        if (!sim_grid.empty()) sim_analysis.threshold_grid = parse_grid(sim_grid);
        if (n_stocks < 0 || n_samples < 0) {
            throw CLI::ValidationError("mp-bounds", "N and T must be non-negative");
        }
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*analyze) {
            auto loaded = load_returns(prices_path, ingest_flags, err);
            SectorMap map;
            if (!sectors_path.empty()) {
                auto in = open_input(sectors_path);
                map = load_sectors(in);
            }
            const auto dir = resolve_out_dir(out_flag);
            if (!dump_table.empty()) {
                write_file(dump_table,
                           [&](std::ostream& o) { write_prices_wide(o, loaded.table); });
            }
            const auto report = analyze_returns(loaded.returns, map, analysis, loaded.info, dir);
            if (!loaded.info.dropped.empty()) {
                err << "warning: N reduced to " << loaded.returns.stock_count() << " after dropping "
                    << loaded.info.dropped.size() << " ticker(s)\n";
            }
            out << "N=" << report["dataset"]["N"] << " T=" << report["dataset"]["T"]
                << " lambda_0=" << std::fixed << std::setprecision(2)
                << report["spectrum"]["lambda_0"].get<double>()
                << " deviating=" << report["spectrum"]["deviating_count"] << '\n';
            return kExitOk;
        }

        if (*simulate_cmd) {
            FactorModelConfig config;
            if (!config_path.empty()) {
                auto in = open_input(config_path);
                std::stringstream buf;
                buf << in.rdbuf();
                config = parse_config_json(buf.str());
            }
            if (sim_seed) config.seed = *sim_seed;
            if (shared_profit) config.shared_profit_factor = true;
            const auto market = simulate(config);
            const auto dir = resolve_out_dir(sim_out);
            write_file(dir / "returns.csv",
                       [&](std::ostream& o) { write_returns_wide(o, market.returns); });
            write_text(dir / "truth.json", truth_json(config, market));
            if (chain_analyze) {
                DatasetInfo info;
                info.source = "simulation";
                info.simulation_seed = config.seed;
                const auto report =
                    analyze_returns(market.returns, market.sector_map(), sim_analysis, info, dir);
                out << "N=" << report["dataset"]["N"] << " T=" << report["dataset"]["T"]
                    << " lambda_0=" << std::fixed << std::setprecision(2)
                    << report["spectrum"]["lambda_0"].get<double>()
                    << " deviating=" << report["spectrum"]["deviating_count"] << '\n';
            }
            return kExitOk;
        }

        if (*bounds_cmd) {
            const auto b = mp_bounds(static_cast<std::size_t>(n_stocks),
                                     static_cast<std::size_t>(n_samples));
            ordered_json j{{"N", n_stocks},
                           {"T", n_samples},
                           {"Q", b.q},
                           {"lambda_min_ran", b.lambda_min},
                           {"lambda_max_ran", b.lambda_max}};
            out << j.dump() << '\n';
            return kExitOk;
        }

        if (*surrogate_cmd) {
            auto loaded = load_returns(sur_prices, sur_ingest, err);
            const auto dir = resolve_out_dir(sur_out);
            const auto spectra = shuffle_surrogate(loaded.returns, sur_seed, replicates);
            write_file(dir / "surrogate_spectra.csv", [&](std::ostream& o) {
                o << "replicate,rank,eigenvalue\n";
                for (std::size_t r = 0; r < spectra.size(); ++r) {
                    for (std::size_t k = 0; k < spectra[r].order(); ++k) {
                        o << r << ',' << k << ','
                          << format_double(spectra[r].eigenvalues(static_cast<Eigen::Index>(k)))
                          << '\n';
                    }
                }
            });
            ordered_json summary;
            summary["seed"] = sur_seed;
            summary["replicates"] = replicates;
            summary["N"] = loaded.returns.stock_count();
            summary["T"] = loaded.returns.length();
            const auto n = loaded.returns.stock_count();
            const auto t = loaded.returns.length();
            if (t >= n) {
                const auto b = mp_bounds(n, t);
                const auto bc = band_compliance(spectra, b, sur_band);
                summary["bounds"] = ordered_json::parse(bounds_json(b));
                summary["band"] = {bc.band_lo, bc.band_hi};
                summary["eigenvalues_total"] = bc.total;
                summary["eigenvalues_inside"] = bc.inside;
                summary["compliance"] = to_json(bc.fraction());
                summary["replicates_inside"] = bc.replicates_inside;
            } else {
                summary["bounds"] = nullptr;
                summary["band"] = nullptr;
                summary["compliance"] = nullptr;
            }
            write_text(dir / "surrogate_summary.json", summary.dump(2));
            out << summary.dump() << '\n';
            return kExitOk;
        }
    } catch (const Error& e) {
        print_error(err, e);
        return kExitDataError;
    } catch (const std::exception& e) {
        print_error(err, Error(ErrorCode::InvalidArgument, e.what()));
        return kExitDataError;
    }
    return kExitUsage;
}

}  // namespace rmtcorr::cli
