#include "rmtcorr/io.hpp"

#include <array>
#include <charconv>
#include <map>
#include <ostream>
#include <set>

#include "json.hpp"
#include "rmtcorr/error.hpp"

namespace rmtcorr {

using nlohmann::ordered_json;

namespace {

ordered_json number_or_null(std::optional<double> v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json bounds_object(const WishartBounds& b) {
    return {{"Q", b.q}, {"lambda_min_ran", b.lambda_min}, {"lambda_max_ran", b.lambda_max}};
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

std::string format_short(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

void write_corr_csv(std::ostream& out, const CorrMatrix& corr) {
    out << "ticker";
    for (const auto& t : corr.tickers) out << ',' << t;
    out << '\n';
    for (Eigen::Index i = 0; i < corr.values.rows(); ++i) {
        out << corr.tickers[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < corr.values.cols(); ++j) {
            out << ',' << format_double(corr.values(i, j));
        }
        out << '\n';
    }
}

void write_spectrum_csv(std::ostream& out, const SpectrumResult& spectrum) {
    std::set<std::size_t> deviating(spectrum.deviating.begin(), spectrum.deviating.end());
    out << "rank,eigenvalue,deviating\n";
    for (std::size_t k = 0; k < spectrum.order(); ++k) {
        out << k << ',' << format_double(spectrum.eigenvalues(static_cast<Eigen::Index>(k)))
            << ',' << (deviating.contains(k) ? 1 : 0) << '\n';
    }
}

void write_eigvecs_csv(std::ostream& out, const SpectrumResult& spectrum) {
    out << "ticker";
    for (std::size_t k = 0; k < spectrum.order(); ++k) out << ",u_" << k;
    out << '\n';
    for (Eigen::Index i = 0; i < spectrum.eigenvectors.rows(); ++i) {
        out << spectrum.tickers[static_cast<std::size_t>(i)];
        for (Eigen::Index k = 0; k < spectrum.eigenvectors.cols(); ++k) {
            out << ',' << format_double(spectrum.eigenvectors(i, k));
        }
        out << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const Histogram& histogram) {
    out << "bin_left,bin_right,count,density\n";
    for (std::size_t k = 0; k < histogram.bin_count(); ++k) {
        out << format_double(histogram.edges[k]) << ',' << format_double(histogram.edges[k + 1])
            << ',' << histogram.counts[k] << ',' << format_double(histogram.density(k)) << '\n';
    }
}

void write_mp_curve_csv(std::ostream& out, const WishartBounds& bounds, std::size_t points) {
    out << "lambda,density\n";
    if (points < 2) points = 2;
    const double span = bounds.lambda_max - bounds.lambda_min;
    for (std::size_t k = 0; k < points; ++k) {
        const double l = bounds.lambda_min +
                         span * static_cast<double>(k) / static_cast<double>(points - 1);
        out << format_double(l) << ',' << format_double(mp_density(l, bounds.q)) << '\n';
    }
}

void write_components_csv(std::ostream& out, const SpectrumResult& spectrum,
                          const SectorMap& map, const std::vector<std::size_t>& modes) {
    for (auto m : modes) {
        if (m >= spectrum.order()) {
            throw Error(ErrorCode::ModeOutOfRange, "mode " + std::to_string(m) + " out of range");
        }
    }
    std::vector<std::size_t> order(spectrum.order());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto sa = map.lookup(spectrum.tickers[a]).business_sector;
        const auto sb = map.lookup(spectrum.tickers[b]).business_sector;
        if (sa != sb) return sa < sb;
        return spectrum.tickers[a] < spectrum.tickers[b];
    });

    out << "position,ticker,sector,category,boundary";
    for (auto m : modes) out << ",u_" << m;
    out << '\n';
    std::string previous;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto i = order[pos];
        const auto info = map.lookup(spectrum.tickers[i]);
        const bool boundary = pos == 0 || info.business_sector != previous;
        previous = info.business_sector;
        out << pos << ',' << spectrum.tickers[i] << ',' << info.business_sector << ','
            << to_string(info.category) << ',' << (boundary ? 1 : 0);
        for (auto m : modes) {
            out << ','
                << format_double(spectrum.eigenvectors(static_cast<Eigen::Index>(i),
                                                       static_cast<Eigen::Index>(m)));
        }
        out << '\n';
    }
}

void write_composition_csv(std::ostream& out, const CompositionReport& report) {
    out << "mode,u_c,label,percent,count,total\n";
    for (const auto& c : report.cells) {
        out << c.mode << ',' << format_short(c.threshold) << ',' << c.qualified_label() << ','
            << format_percent(c.count, c.total) << ',' << c.count << ',' << c.total << '\n';
    }
}

void write_returns_wide(std::ostream& out, const ReturnMatrix& returns) {
    out << 't';
    for (const auto& t : returns.tickers) out << ',' << t;
    out << '\n';
    for (Eigen::Index t = 0; t < returns.returns.cols(); ++t) {
        out << t;
        for (Eigen::Index i = 0; i < returns.returns.rows(); ++i) {
            out << ',' << format_double(returns.returns(i, t));
        }
        out << '\n';
    }
}

std::string bounds_json(const WishartBounds& bounds) { return bounds_object(bounds).dump(2); }

std::string spectrum_json(const SpectrumResult& spectrum) {
    ordered_json j;
    j["N"] = spectrum.order();
    j["T"] = spectrum.samples;
    j["eigenvalues"] = std::vector<double>(spectrum.eigenvalues.data(),
                                           spectrum.eigenvalues.data() +
                                               spectrum.eigenvalues.size());
    j["bounds"] = spectrum.bounds ? bounds_object(*spectrum.bounds) : ordered_json(nullptr);
    j["deviating"] = spectrum.deviating;
    j["residual_max"] = spectrum.residual_max;
    j["sweeps"] = spectrum.sweeps;
    return j.dump(2);
}

std::string element_stats_json(const ElementStats& stats) {
    ordered_json j;
    j["count"] = stats.count;
    j["mean"] = stats.mean;
    j["min"] = stats.min;
    j["max"] = stats.max;
    j["count_negative"] = stats.count_negative;
    j["histogram"] = {{"edges", stats.histogram.edges}, {"counts", stats.histogram.counts}};
    return j.dump(2);
}

std::string composition_json(const CompositionReport& report) {
    ordered_json rows = ordered_json::array();
    for (const auto& c : report.cells) {
        rows.push_back({{"mode", c.mode},
                        {"u_c", c.threshold},
                        {"axis", c.axis == LabelAxis::Category ? "category" : "sector"},
                        {"label", c.label},
                        {"count", c.count},
                        {"total", c.total},
                        {"percent", number_or_null(c.percent())},
                        {"formatted", format_percent(c.count, c.total)}});
    }
    return rows.dump(2);
}

std::string config_json(const FactorModelConfig& c) {
    ordered_json j;
    j["N"] = c.stocks;
    j["T"] = c.length;
    j["sector_sizes"] = c.sector_sizes;
    j["n_st"] = c.n_st;
    j["n_bc"] = c.n_bc;
    j["gamma_sector"] = c.gamma_sector;
    j["gamma_profit_st"] = c.gamma_profit_st;
    j["gamma_profit_bc"] = c.gamma_profit_bc;
    j["gamma_profit_general"] = c.gamma_profit_general;
    j["sigma"] = c.sigma;
    j["delta"] = c.delta;
    j["seed"] = c.seed;
    j["shared_profit_factor"] = c.shared_profit_factor;
    return j.dump(2);
}

FactorModelConfig parse_config_json(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");

    FactorModelConfig c;
    const std::set<std::string> known{"N",
                                      "T",
                                      "sector_sizes",
                                      "n_st",
                                      "n_bc",
                                      "gamma_sector",
                                      "gamma_profit_st",
                                      "gamma_profit_bc",
                                      "gamma_profit_general",
                                      "sigma",
                                      "delta",
                                      "seed",
                                      "shared_profit_factor"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw Error(ErrorCode::InvalidArgument, "unknown config field '" + key + "'", key);
        }
    }

    auto read = [&](const char* key, auto& target) {
        if (!j.contains(key)) return;
        try {
            const auto& v = j.at(key);
            using T = std::decay_t<decltype(target)>;
            if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
                if (!v.is_number_unsigned()) throw std::invalid_argument("expected unsigned integer");
            } else if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) throw std::invalid_argument("expected number");
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw std::invalid_argument("expected boolean");
            } else {
                if (!v.is_array()) throw std::invalid_argument("expected array");
                for (const auto& e : v) {
                    if (!e.is_number_unsigned()) {
                        throw std::invalid_argument("expected unsigned integers");
                    }
                }
            }
            target = v.template get<T>();
        } catch (const std::exception& e) {
            throw Error(ErrorCode::InfeasibleConfig, std::string(key) + ": " + e.what(), key);
        }
    };
    read("N", c.stocks);
    read("T", c.length);
    read("sector_sizes", c.sector_sizes);
    read("n_st", c.n_st);
    read("n_bc", c.n_bc);
    read("gamma_sector", c.gamma_sector);
    read("gamma_profit_st", c.gamma_profit_st);
    read("gamma_profit_bc", c.gamma_profit_bc);
    read("gamma_profit_general", c.gamma_profit_general);
    read("sigma", c.sigma);
    read("delta", c.delta);
    read("seed", c.seed);
    read("shared_profit_factor", c.shared_profit_factor);
    return c;
}

std::string truth_json(const FactorModelConfig& config, const SimulatedMarket& market) {
    ordered_json stocks = ordered_json::array();
    for (const auto& c : market.truth) {
        stocks.push_back({{"ticker", market.returns.tickers[c.index]},
                          {"sector", market.sector_labels[c.sector]},
                          {"category", std::string(to_string(c.category))},
                          {"beta", c.beta},
                          {"gamma_sector", c.gamma_sector},
                          {"gamma_profit", c.gamma_profit},
                          {"sigma", c.sigma}});
    }
    ordered_json j;
    j["config"] = ordered_json::parse(config_json(config));
    j["sectors"] = market.sector_labels;
    j["stocks"] = std::move(stocks);
    return j.dump(2);
}

}  // namespace rmtcorr
