#include "rmtcorr/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rmtcorr/error.hpp"
#include "rmtcorr/rng.hpp"

namespace rmtcorr {

namespace {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

Range jitter_range(double mean, double delta) {
    if (mean == 0.0) return {0.0, 0.0};
    return {mean - delta / 2.0, mean + delta / 2.0};
}

double draw(std::mt19937_64& gen, double mean, double delta) {
    if (mean == 0.0 || delta == 0.0) return mean;
    return std::uniform_real_distribution<double>(mean - delta / 2.0, mean + delta / 2.0)(gen);
}

double max_square(Range r) { return std::max(r.lo * r.lo, r.hi * r.hi); }

const char* profit_field(Category c) {
    switch (c) {
        case Category::ST: return "gamma_profit_st";
        case Category::BlueChip: return "gamma_profit_bc";
        case Category::General: return "gamma_profit_general";
    }
    return "gamma_profit_general";
}

std::size_t profit_row(Category c, bool shared) {
    if (shared) return 0;
    switch (c) {
        case Category::ST: return 0;
        case Category::BlueChip: return 1;
        case Category::General: return 2;
    }
    return 2;
}

void fill_normal(double* out, std::size_t n, std::mt19937_64 gen) {
    std::normal_distribution<double> normal;
    for (std::size_t t = 0; t < n; ++t) out[t] = normal(gen);
}

}  // namespace

double FactorModelConfig::profit_mean(Category category) const noexcept {
    switch (category) {
        case Category::ST: return gamma_profit_st;
        case Category::BlueChip: return gamma_profit_bc;
        case Category::General: return gamma_profit_general;
    }
    return gamma_profit_general;
}

void FactorModelConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw Error(ErrorCode::InfeasibleConfig, field + ": " + why, field);
    };
    if (stocks < 2) fail("N", "need at least 2 stocks");
    if (length < 2) fail("T", "need at least 2 time steps");
    if (sector_sizes.empty()) fail("sector_sizes", "need at least one sector");
    if (std::any_of(sector_sizes.begin(), sector_sizes.end(), [](auto n) { return n == 0; })) {
        fail("sector_sizes", "sector sizes must be positive");
    }
    const auto total = std::accumulate(sector_sizes.begin(), sector_sizes.end(), std::size_t{0});
    if (total != stocks) {
        fail("sector_sizes", "sector sizes sum to " + std::to_string(total) + ", expected N = " +
                                 std::to_string(stocks));
    }
    if (n_st + n_bc > stocks) fail("n_st", "n_st + n_bc exceeds N");

    const std::pair<const char*, double> couplings[] = {
        {"gamma_sector", gamma_sector},
        {"gamma_profit_st", gamma_profit_st},
        {"gamma_profit_bc", gamma_profit_bc},
        {"gamma_profit_general", gamma_profit_general},
        {"sigma", sigma},
        {"delta", delta},
    };
    for (const auto& [field, value] : couplings) {
        if (!std::isfinite(value) || value < 0.0) fail(field, "must be finite and >= 0");
    }

    const std::pair<Category, std::size_t> populations[] = {
        {Category::ST, n_st},
        {Category::BlueChip, n_bc},
        {Category::General, stocks - n_st - n_bc},
    };
    for (const auto& [category, count] : populations) {
        if (count == 0) continue;
        const double worst = max_square(jitter_range(gamma_sector, delta)) +
                             max_square(jitter_range(profit_mean(category), delta)) +
                             max_square(jitter_range(sigma, delta));
        if (!(worst < 1.0)) {
            fail(profit_field(category),
                 "gamma_sector^2 + gamma_profit^2 + sigma^2 can reach " + std::to_string(worst) +
                     " >= 1, leaving no room for the market coupling");
        }
    }

    if (n_st > 0 && n_bc > 0) {
        const auto st = jitter_range(gamma_profit_st, delta);
        const auto bc = jitter_range(gamma_profit_bc, delta);
        if (!(st.hi > bc.lo)) {
            throw Error(ErrorCode::OrderingUnsatisfiable,
                        "ST profit couplings can never exceed Blue-chip ones",
                        "gamma_profit_st");
        }
    }
}

std::vector<StockCoefficients> sample_coefficients(const FactorModelConfig& config) {
    config.validate();
    const auto n = config.stocks;

    std::vector<std::size_t> sector_of(n);
    for (std::size_t k = 0, i = 0; k < config.sector_sizes.size(); ++k) {
        for (std::size_t j = 0; j < config.sector_sizes[k]; ++j) sector_of[i++] = k;
    }

    std::vector<Category> category_of(n, Category::General);
    {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto gen = substream(config.seed, StreamRole::CategoryAssignment);
        std::shuffle(order.begin(), order.end(), gen);
        for (std::size_t j = 0; j < config.n_st; ++j) category_of[order[j]] = Category::ST;
        for (std::size_t j = config.n_st; j < config.n_st + config.n_bc; ++j) {
            category_of[order[j]] = Category::BlueChip;
        }
    }

    std::vector<StockCoefficients> table(n);
    for (int attempt = 0; attempt < kOrderingRetries; ++attempt) {
        double st_min = INFINITY;
        double bc_max = -INFINITY;
        for (std::size_t i = 0; i < n; ++i) {
            auto gen = substream(config.seed, StreamRole::Coefficients, i,
                                 static_cast<std::uint64_t>(attempt));
            auto& c = table[i];
            c.index = i;
            c.sector = sector_of[i];
            c.category = category_of[i];
            c.gamma_sector = draw(gen, config.gamma_sector, config.delta);
            c.gamma_profit = draw(gen, config.profit_mean(c.category), config.delta);
            c.sigma = draw(gen, config.sigma, config.delta);
            const double radicand = 1.0 - c.gamma_sector * c.gamma_sector -
                                    c.gamma_profit * c.gamma_profit - c.sigma * c.sigma;
            if (!(radicand > 0.0)) {
                throw Error(ErrorCode::InfeasibleConfig, "sampled couplings leave beta^2 <= 0",
                            profit_field(c.category));
            }
            c.beta = std::sqrt(radicand);
            if (c.category == Category::ST) st_min = std::min(st_min, c.gamma_profit);
            if (c.category == Category::BlueChip) bc_max = std::max(bc_max, c.gamma_profit);
        }
        if (config.n_st == 0 || config.n_bc == 0 || st_min > bc_max) return table;
    }
    throw Error(ErrorCode::OrderingUnsatisfiable,
                "could not separate ST and Blue-chip profit couplings in " +
                    std::to_string(kOrderingRetries) + " attempts",
                "gamma_profit_st");
}

SectorMap SimulatedMarket::sector_map() const {
    SectorMap map;
    for (const auto& c : truth) {
        map.set(returns.tickers[c.index], {sector_labels[c.sector], c.category});
    }
    return map;
}

std::string simulated_ticker(std::size_t index, std::size_t stocks) {
    const auto width = std::max<std::size_t>(3, std::to_string(stocks > 0 ? stocks - 1 : 0).size());
    auto digits = std::to_string(index);
    return "S" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

std::string sector_label(std::size_t sector, std::size_t sectors) {
    if (sectors <= 26) return std::string(1, static_cast<char>('A' + sector));
    return "G" + std::to_string(sector + 1);
}

SimulatedMarket simulate(const FactorModelConfig& config) {
    SimulatedMarket market;
    market.truth = sample_coefficients(config);

    const auto n = static_cast<Eigen::Index>(config.stocks);
    const auto len = static_cast<Eigen::Index>(config.length);
    const auto k = static_cast<Eigen::Index>(config.sector_sizes.size());
    const auto uz = static_cast<std::size_t>(len);

    auto& f = market.factors;
    f.market.resize(len);
    fill_normal(f.market.data(), uz, substream(config.seed, StreamRole::MarketFactor));
    f.sector.resize(k, len);
    for (Eigen::Index s = 0; s < k; ++s) {
        fill_normal(f.sector.row(s).data(), uz,
                    substream(config.seed, StreamRole::SectorFactor,
                              static_cast<std::uint64_t>(s)));
    }
    const Eigen::Index profit_rows = config.shared_profit_factor ? 1 : 3;
    f.profit.resize(profit_rows, len);
    for (Eigen::Index c = 0; c < profit_rows; ++c) {
        fill_normal(f.profit.row(c).data(), uz,
                    substream(config.seed, StreamRole::ProfitFactor,
                              static_cast<std::uint64_t>(c)));
    }

    RawReturns raw;
    raw.values.resize(n, len);
    raw.tickers.reserve(config.stocks);
    std::vector<double> noise(uz);
    for (const auto& c : market.truth) {
        const auto i = static_cast<Eigen::Index>(c.index);
        raw.tickers.push_back(simulated_ticker(c.index, config.stocks));
        fill_normal(noise.data(), uz,
                    substream(config.seed, StreamRole::Idiosyncratic, c.index));
        const double* m = f.market.data();
        const double* g = f.sector.row(static_cast<Eigen::Index>(c.sector)).data();
        const double* p = f.profit.row(static_cast<Eigen::Index>(
                                           profit_row(c.category, config.shared_profit_factor)))
                              .data();
        double* out = raw.values.row(i).data();
        for (std::size_t t = 0; t < uz; ++t) {
            out[t] = c.beta * m[t] + c.gamma_sector * g[t] + c.gamma_profit * p[t] +
                     c.sigma * noise[t];
        }
    }

    for (std::size_t s = 0; s < config.sector_sizes.size(); ++s) {
        market.sector_labels.push_back(sector_label(s, config.sector_sizes.size()));
    }
    market.returns = normalize(std::move(raw));
    return market;
}

double expected_correlation(const FactorModelConfig& config, const StockCoefficients& a,
                            const StockCoefficients& b) {
    if (a.index == b.index) return 1.0;
    auto mean_coefficients = [&](const StockCoefficients& s) {
        StockCoefficients m = s;
        m.gamma_sector = config.gamma_sector;
        m.gamma_profit = config.profit_mean(s.category);
        m.sigma = config.sigma;
        m.beta = std::sqrt(1.0 - m.gamma_sector * m.gamma_sector -
                           m.gamma_profit * m.gamma_profit - m.sigma * m.sigma);
        return m;
    };
    return implied_correlation(mean_coefficients(a), mean_coefficients(b),
                               config.shared_profit_factor);
}

double implied_correlation(const StockCoefficients& a, const StockCoefficients& b,
                           bool shared_profit_factor) {
    if (a.index == b.index) return 1.0;
    double c = a.beta * b.beta;
    if (a.sector == b.sector) c += a.gamma_sector * b.gamma_sector;
    if (shared_profit_factor || a.category == b.category) c += a.gamma_profit * b.gamma_profit;
    return c;
}

}  // namespace rmtcorr
