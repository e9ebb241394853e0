#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rmtcorr/ingest.hpp"
#include "rmtcorr/spectrum.hpp"
#include "rmtcorr/transform.hpp"

namespace rmtcorr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kOutDirEnv = "RMTCORR_OUT_DIR";

struct AnalysisOptions {
    std::vector<double> thresholds{0.08, 0.12};
    std::vector<std::size_t> modes{0, 1, 2, 3};
    std::optional<std::vector<double>> threshold_grid;
    double bin_width = 0.02;
    double eig_bin_width = 0.05;
    double margin = kDeviationMargin;
    double band = kSurrogateBandPad;
    std::size_t surrogates = 1;
    std::uint64_t seed = 0;
};

struct DatasetInfo {
    std::string source;  // "prices" or "simulation"
    std::optional<std::string> period_start;
    std::optional<std::string> period_end;
    std::vector<std::string> dropped;
    std::size_t filled_cells = 0;
    std::optional<std::uint64_t> simulation_seed;
};

/// ingest -> transform -> spectrum -> sectors on an already normalized
/// return matrix; writes every artifact into `out_dir` and returns the
/// report document (also written as report.json).
nlohmann::ordered_json analyze_returns(const ReturnMatrix& returns, const SectorMap& map,
                                       const AnalysisOptions& options, const DatasetInfo& info,
                                       const std::filesystem::path& out_dir);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmtcorr::cli
