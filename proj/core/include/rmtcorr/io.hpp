#pragma once

// Serialization of analysis artifacts. JSON documents are returned as text so
// that consumers are free to pick their own JSON library.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rmtcorr/ingest.hpp"
#include "rmtcorr/sectors.hpp"
#include "rmtcorr/simulator.hpp"
#include "rmtcorr/spectrum.hpp"
#include "rmtcorr/transform.hpp"

namespace rmtcorr {

/// 17 significant digits, shortest exponent form ("%.17g").
std::string format_double(double value);

/// Shortest representation that round-trips (used for user-supplied knobs
/// such as thresholds).
std::string format_short(double value);

/// Square matrix with a `ticker` header row and ticker first column.
void write_corr_csv(std::ostream& out, const CorrMatrix& corr);

/// `rank,eigenvalue,deviating`
void write_spectrum_csv(std::ostream& out, const SpectrumResult& spectrum);

/// Rows are stocks, columns are modes: `ticker,u_0,...,u_{N-1}`.
void write_eigvecs_csv(std::ostream& out, const SpectrumResult& spectrum);

/// `bin_left,bin_right,count,density`
void write_histogram_csv(std::ostream& out, const Histogram& histogram);

/// `lambda,density` sampled on `points` evenly spaced abscissae over the
/// Wishart support.
void write_mp_curve_csv(std::ostream& out, const WishartBounds& bounds, std::size_t points);

/// Per-stock components of the selected modes ordered by business sector then
/// ticker; `boundary` is 1 on the first stock of each sector.
void write_components_csv(std::ostream& out, const SpectrumResult& spectrum,
                          const SectorMap& map, const std::vector<std::size_t>& modes);

/// `mode,u_c,label,percent,count,total`
void write_composition_csv(std::ostream& out, const CompositionReport& report);

/// `t,<ticker...>` normalized returns, one row per time step.
void write_returns_wide(std::ostream& out, const ReturnMatrix& returns);

std::string spectrum_json(const SpectrumResult& spectrum);
std::string element_stats_json(const ElementStats& stats);
std::string composition_json(const CompositionReport& report);
std::string bounds_json(const WishartBounds& bounds);

/// Per-stock coefficients and labels of a simulated market.
std::string truth_json(const FactorModelConfig& config, const SimulatedMarket& market);

/// Parses a config document. Absent fields keep the defaults of
/// FactorModelConfig; unknown fields are rejected with InvalidArgument.
FactorModelConfig parse_config_json(std::string_view text);
std::string config_json(const FactorModelConfig& config);

}  // namespace rmtcorr
