#include "rmtcorr/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>
#include <utility>

#include "csv.hpp"
#include "rmtcorr/error.hpp"
#include "rmtcorr/io.hpp"

namespace rmtcorr {

namespace {

std::string row_context(std::size_t line) { return "line " + std::to_string(line); }

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

void expect_header(std::string_view line, std::string_view expected, std::size_t number) {
    auto fields = detail::split_fields(line);
    auto want = detail::split_fields(expected);
    bool ok = fields.size() == want.size();
    for (std::size_t i = 0; ok && i < fields.size(); ++i) {
        ok = upper(fields[i]) == upper(want[i]);
    }
    if (!ok) {
        throw Error(ErrorCode::MalformedRow,
                    row_context(number) + ": expected header '" + std::string(expected) + "'");
    }
}

}  // namespace

std::string_view to_string(Category category) noexcept {
    switch (category) {
        case Category::ST: return "ST";
        case Category::BlueChip: return "BLUE_CHIP";
        case Category::General: return "GENERAL";
    }
    return "GENERAL";
}

std::optional<Category> parse_category(std::string_view label) {
    auto u = upper(detail::trim(label));
    if (u.empty() || u == "GENERAL") return Category::General;
    if (u == "ST") return Category::ST;
    if (u == "BLUE_CHIP") return Category::BlueChip;
    return std::nullopt;
}

std::size_t PriceTable::filled_count() const noexcept {
    return static_cast<std::size_t>(filled.count());
}

bool operator==(const PriceTable& a, const PriceTable& b) {
    return a.tickers == b.tickers && a.dates == b.dates && a.prices.rows() == b.prices.rows() &&
           a.prices.cols() == b.prices.cols() && (a.prices.array() == b.prices.array()).all() &&
           (a.filled == b.filled).all();
}

bool is_iso_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
        if (text[i] < '0' || text[i] > '9') return false;
    }
    auto num = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) v = v * 10 + (text[i] - '0');
        return v;
    };
    using namespace std::chrono;
    year_month_day ymd{year{num(0, 4)}, month{static_cast<unsigned>(num(5, 2))},
                       day{static_cast<unsigned>(num(8, 2))}};
    return ymd.ok();
}

std::vector<PriceRecord> parse_price_records(std::istream& in) {
    std::vector<PriceRecord> records;
    bool header_seen = false;
    detail::for_each_line(in, [&](std::size_t number, std::string_view line) {
        if (!header_seen) {
            expect_header(line, "date,ticker,close", number);
            header_seen = true;
            return;
        }
        auto fields = detail::split_fields(line);
        if (fields.size() != 3) {
            throw Error(ErrorCode::MalformedRow,
                        row_context(number) + ": expected 3 fields, got " +
                            std::to_string(fields.size()));
        }
        if (!is_iso_date(fields[0])) {
            throw Error(ErrorCode::MalformedRow,
                        row_context(number) + ": invalid date '" + std::string(fields[0]) + "'");
        }
        if (fields[1].empty()) {
            throw Error(ErrorCode::MalformedRow, row_context(number) + ": empty ticker");
        }
        auto close = detail::parse_double(fields[2]);
        if (!close || !std::isfinite(*close)) {
            throw Error(ErrorCode::MalformedRow,
                        row_context(number) + ": invalid price '" + std::string(fields[2]) + "'",
                        std::string(fields[1]));
        }
        if (*close <= 0.0) {
            throw Error(ErrorCode::NonPositivePrice,
                        row_context(number) + ": price must be positive",
                        std::string(fields[1]));
        }
        records.push_back({std::string(fields[0]), std::string(fields[1]), *close});
    });
    if (!header_seen) {
        throw Error(ErrorCode::MalformedRow, "missing header 'date,ticker,close'");
    }
    return records;
}

PartialGrid align_records(const std::vector<PriceRecord>& records) {
    std::set<std::string> tickers;
    std::set<std::string> dates;
    for (const auto& r : records) {
        tickers.insert(r.ticker);
        dates.insert(r.date);
    }

    PartialGrid grid;
    grid.tickers.assign(tickers.begin(), tickers.end());
    grid.dates.assign(dates.begin(), dates.end());
    grid.cells.assign(grid.tickers.size() * grid.dates.size(), std::nullopt);

    std::unordered_map<std::string, std::size_t> ticker_index;
    std::unordered_map<std::string, std::size_t> date_index;
    for (std::size_t i = 0; i < grid.tickers.size(); ++i) ticker_index[grid.tickers[i]] = i;
    for (std::size_t t = 0; t < grid.dates.size(); ++t) date_index[grid.dates[t]] = t;

    for (const auto& r : records) {
        auto& cell = grid.at(ticker_index.at(r.ticker), date_index.at(r.date));
        if (cell) {
            throw Error(ErrorCode::DuplicateCell,
                        "duplicate price for " + r.ticker + " on " + r.date, r.ticker);
        }
        cell = r.close;
    }
    return grid;
}

PriceTable forward_fill(const PartialGrid& grid, LeadingGapPolicy policy) {
    const auto n = grid.tickers.size();
    const auto d = grid.dates.size();

    PriceTable table;
    table.tickers = grid.tickers;
    table.dates = grid.dates;
    table.prices.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    table.filled = FlagGrid::Constant(static_cast<Eigen::Index>(n),
                                      static_cast<Eigen::Index>(d), false);

    for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        std::size_t first = d;
        for (std::size_t t = 0; t < d; ++t) {
            if (grid.at(i, t)) {
                first = t;
                break;
            }
        }
        if (first == d) {
            throw Error(ErrorCode::EmptyTicker, "ticker " + grid.tickers[i] + " has no prices",
                        grid.tickers[i]);
        }
        if (first > 0 && policy == LeadingGapPolicy::Reject) {
            throw Error(ErrorCode::LeadingGapUnfillable,
                        "ticker " + grid.tickers[i] + " has no price on or before " +
                            grid.dates.front(),
                        grid.tickers[i]);
        }

        double last = *grid.at(i, first);
        for (std::size_t t = 0; t < d; ++t) {
            const auto col = static_cast<Eigen::Index>(t);
            if (const auto& cell = grid.at(i, t)) {
                last = *cell;
                table.prices(row, col) = last;
            } else {
                table.prices(row, col) = last;
                table.filled(row, col) = true;
            }
        }
    }
    return table;
}

PriceTable load_prices(std::istream& in, const LoadOptions& options) {
    auto grid = align_records(parse_price_records(in));
    if (grid.tickers.size() < 2 || grid.dates.size() < 3) {
        throw Error(ErrorCode::TooSmall,
                    "need at least 2 tickers and 3 dates, got " +
                        std::to_string(grid.tickers.size()) + " tickers and " +
                        std::to_string(grid.dates.size()) + " dates");
    }
    return forward_fill(grid, options.leading_gap);
}

void write_prices_long(std::ostream& out, const PriceTable& table) {
    out << "date,ticker,close\n";
    for (std::size_t t = 0; t < table.date_count(); ++t) {
        for (std::size_t i = 0; i < table.stock_count(); ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            const auto col = static_cast<Eigen::Index>(t);
            if (table.filled(row, col)) continue;
            out << table.dates[t] << ',' << table.tickers[i] << ','
                << format_double(table.prices(row, col)) << '\n';
        }
    }
}

void write_prices_wide(std::ostream& out, const PriceTable& table) {
    out << "date";
    for (const auto& ticker : table.tickers) out << ',' << ticker;
    out << '\n';
    for (std::size_t t = 0; t < table.date_count(); ++t) {
        out << table.dates[t];
        for (std::size_t i = 0; i < table.stock_count(); ++i) {
            out << ','
                << format_double(table.prices(static_cast<Eigen::Index>(i),
                                              static_cast<Eigen::Index>(t)));
        }
        out << '\n';
    }
}

void SectorMap::set(std::string ticker, SectorInfo info) {
    entries_[std::move(ticker)] = std::move(info);
}

SectorInfo SectorMap::lookup(const std::string& ticker) const {
    auto it = entries_.find(ticker);
    return it == entries_.end() ? SectorInfo{} : it->second;
}

bool SectorMap::contains(const std::string& ticker) const { return entries_.contains(ticker); }

SectorMap load_sectors(std::istream& in) {
    SectorMap map;
    bool header_seen = false;
    detail::for_each_line(in, [&](std::size_t number, std::string_view line) {
        if (!header_seen) {
            expect_header(line, "ticker,business_sector,category", number);
            header_seen = true;
            return;
        }
        auto fields = detail::split_fields(line);
        if (fields.size() != 3 || fields[0].empty()) {
            throw Error(ErrorCode::MalformedRow,
                        row_context(number) + ": expected 'ticker,business_sector,category'");
        }
        std::string ticker(fields[0]);
        if (map.contains(ticker)) {
            throw Error(ErrorCode::MalformedRow, row_context(number) + ": duplicate ticker",
                        ticker);
        }
        auto category = parse_category(fields[2]);
        if (!category) {
            throw Error(ErrorCode::UnknownCategoryLabel,
                        row_context(number) + ": unknown category '" + std::string(fields[2]) +
                            "'",
                        ticker);
        }
        SectorInfo info;
        if (!fields[1].empty()) info.business_sector = std::string(fields[1]);
        info.category = *category;
        map.set(std::move(ticker), std::move(info));
    });
    if (!header_seen) {
        throw Error(ErrorCode::MalformedRow, "missing header 'ticker,business_sector,category'");
    }
    return map;
}

}  // namespace rmtcorr
