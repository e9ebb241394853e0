#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rmtcorr/simulator.hpp"

namespace rmtcorr::support {

inline std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("rmtcorr_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

/// Long-format price CSV whose log returns are the rows of `market`:
/// P(0) = 100, P(t+1) = P(t) exp(scale * r(t)).
inline std::string prices_from_returns(const ReturnMatrix& rm, double scale = 0.01) {
    std::ostringstream out;
    out.precision(17);
    out << "date,ticker,close\n";
    const auto n = rm.stock_count();
    const auto length = rm.length();
    std::vector<double> price(n, 100.0);
    for (std::size_t t = 0; t <= length; ++t) {
        // Consecutive calendar days starting 2000-01-01; day-of-year arithmetic
        // is avoided by encoding t in month/day of successive years.
        const int year = 2000 + static_cast<int>(t / 336);
        const int month = 1 + static_cast<int>((t % 336) / 28);
        const int day = 1 + static_cast<int>(t % 28);
        char date[32];
        std::snprintf(date, sizeof date, "%04d-%02d-%02d", year, month, day);
        for (std::size_t i = 0; i < n; ++i) {
            out << date << ',' << rm.tickers[i] << ',' << price[i] << '\n';
            if (t < length) {
                price[i] *= std::exp(scale * rm.returns(static_cast<Eigen::Index>(i),
                                                        static_cast<Eigen::Index>(t)));
            }
        }
    }
    return out.str();
}

inline std::string sectors_from_market(const SimulatedMarket& market) {
    std::ostringstream out;
    out << "ticker,business_sector,category\n";
    for (const auto& c : market.truth) {
        out << market.returns.tickers[c.index] << ',' << market.sector_labels[c.sector] << ','
            << to_string(c.category) << '\n';
    }
    return out.str();
}

/// Small paper-shaped config: same couplings, fewer stocks.
inline FactorModelConfig small_config(std::size_t per_sector, std::size_t length,
                                      std::uint64_t seed) {
    FactorModelConfig c;
    c.stocks = 5 * per_sector;
    c.length = length;
    c.sector_sizes.assign(5, per_sector);
    c.n_st = c.stocks * 4 / 25;
    c.n_bc = c.stocks * 4 / 25;
    c.seed = seed;
    return c;
}

}  // namespace rmtcorr::support
