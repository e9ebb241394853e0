#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rmtcorr/ingest.hpp"
#include "rmtcorr/transform.hpp"
#include "rmtcorr/types.hpp"

namespace rmtcorr {

/// Parameters of the four-term return model
///
///   r_i(t) = beta_i r_m(t) + gamma_i r_g^k(t) + gammap_i r_p^c(t) + sigma_i eta_i(t)
///
/// with beta_i^2 + gamma_i^2 + gammap_i^2 + sigma_i^2 = 1. Defaults are the
/// emerging-market calibration: 250 stocks, 2500 steps, five sectors of 50,
/// 40 ST and 40 Blue-chip stocks.
struct FactorModelConfig {
    std::size_t stocks = 250;
    std::size_t length = 2500;
    std::vector<std::size_t> sector_sizes{50, 50, 50, 50, 50};
    std::size_t n_st = 40;
    std::size_t n_bc = 40;
    double gamma_sector = 0.2;
    double gamma_profit_st = 0.55;
    double gamma_profit_bc = 0.40;
    double gamma_profit_general = 0.0;
    double sigma = 0.3;
    /// Total width of the uniform jitter around each coupling mean. A mean of
    /// exactly zero is never jittered.
    double delta = 0.05;
    std::uint64_t seed = 0;
    /// One profit process shared by every category instead of one per
    /// category.
    bool shared_profit_factor = false;

    /// Throws InfeasibleConfig (subject = offending field) or
    /// OrderingUnsatisfiable.
    void validate() const;

    double profit_mean(Category category) const noexcept;
};

struct StockCoefficients {
    std::size_t index = 0;
    std::size_t sector = 0;
    Category category = Category::General;
    double beta = 0.0;
    double gamma_sector = 0.0;
    double gamma_profit = 0.0;
    double sigma = 0.0;
};

inline constexpr int kOrderingRetries = 1000;

/// Assigns categories (uniformly without replacement, independent of sector)
/// and draws gamma, gammap, sigma from Uniform(mean - delta/2, mean + delta/2);
/// beta closes the unit-variance identity. Resamples until every ST profit
/// coupling exceeds every Blue-chip one.
std::vector<StockCoefficients> sample_coefficients(const FactorModelConfig& config);

struct FactorPaths {
    Vector market;
    RowMatrix sector;  // K x T
    RowMatrix profit;  // 3 x T (ST, BLUE_CHIP, GENERAL) or 1 x T when shared
};

struct SimulatedMarket {
    ReturnMatrix returns;
    std::vector<StockCoefficients> truth;
    std::vector<std::string> sector_labels;
    FactorPaths factors;

    SectorMap sector_map() const;
};

/// Generates and normalizes a synthetic market. Bit-identical for equal
/// configs.
SimulatedMarket simulate(const FactorModelConfig& config);

std::string simulated_ticker(std::size_t index, std::size_t stocks);
std::string sector_label(std::size_t sector, std::size_t sectors);

/// Population correlation implied by the config's mean couplings for two
/// stocks with the given labels. Exact when delta = 0.
double expected_correlation(const FactorModelConfig& config, const StockCoefficients& a,
                            const StockCoefficients& b);

/// Population correlation implied by the sampled coefficients.
double implied_correlation(const StockCoefficients& a, const StockCoefficients& b,
                           bool shared_profit_factor = false);

}  // namespace rmtcorr
