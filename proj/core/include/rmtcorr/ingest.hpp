#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmtcorr/types.hpp"

namespace rmtcorr {

enum class Category { ST, BlueChip, General };

/// Canonical label: "ST", "BLUE_CHIP" or "GENERAL".
std::string_view to_string(Category category) noexcept;

/// Case-insensitive; empty input maps to General. Unknown labels yield nullopt.
std::optional<Category> parse_category(std::string_view label);

struct PriceRecord {
    std::string date;  // YYYY-MM-DD
    std::string ticker;
    double close = 0.0;
};

/// Aligned (ticker x date) close-price grid. Row i holds ticker i; column t
/// holds dates[t]. `filled` marks cells imputed by forward_fill.
struct PriceTable {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;
    RowMatrix prices;
    FlagGrid filled;

    std::size_t stock_count() const noexcept { return tickers.size(); }
    std::size_t date_count() const noexcept { return dates.size(); }
    std::size_t filled_count() const noexcept;

    friend bool operator==(const PriceTable& a, const PriceTable& b);
};

/// Observed prices before alignment; `cells` is row-major (ticker, date) with
/// nullopt for dates on which the ticker did not trade.
struct PartialGrid {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;
    std::vector<std::optional<double>> cells;

    std::optional<double>& at(std::size_t ticker, std::size_t date) {
        return cells[ticker * dates.size() + date];
    }
    const std::optional<double>& at(std::size_t ticker, std::size_t date) const {
        return cells[ticker * dates.size() + date];
    }
};

/// How to treat cells before a ticker's first observation.
enum class LeadingGapPolicy {
    Backfill,  // copy the first observed price backwards, flagged as filled
    Reject,    // raise LeadingGapUnfillable
};

struct LoadOptions {
    LeadingGapPolicy leading_gap = LeadingGapPolicy::Backfill;
};

/// Strict YYYY-MM-DD with a valid calendar day.
bool is_iso_date(std::string_view text);

/// Parses long-format `date,ticker,close` CSV rows without aligning them.
std::vector<PriceRecord> parse_price_records(std::istream& in);

/// Builds the partial grid on the union of all dates; tickers sorted
/// lexicographically.
PartialGrid align_records(const std::vector<PriceRecord>& records);

/// Carries the last observed price forward. Leading gaps follow `policy`.
PriceTable forward_fill(const PartialGrid& grid,
                        LeadingGapPolicy policy = LeadingGapPolicy::Backfill);

/// parse + align + fill. Requires at least 2 tickers and 3 dates (2 returns).
PriceTable load_prices(std::istream& in, const LoadOptions& options = {});

/// Long CSV of observed (non-filled) cells; reloading reproduces the table.
void write_prices_long(std::ostream& out, const PriceTable& table);

/// Wide audit dump: `date,<ticker...>` with one row per date.
void write_prices_wide(std::ostream& out, const PriceTable& table);

struct SectorInfo {
    std::string business_sector = "UNKNOWN";
    Category category = Category::General;
};

/// Static ticker -> (business sector, category) labels. Lookups of unlabeled
/// tickers return sector "UNKNOWN", category General.
class SectorMap {
public:
    void set(std::string ticker, SectorInfo info);
    SectorInfo lookup(const std::string& ticker) const;
    bool contains(const std::string& ticker) const;
    std::size_t size() const noexcept { return entries_.size(); }
    const std::map<std::string, SectorInfo>& entries() const noexcept { return entries_; }

private:
    std::map<std::string, SectorInfo> entries_;
};

/// Parses `ticker,business_sector,category` CSV with a mandatory header row.
SectorMap load_sectors(std::istream& in);

}  // namespace rmtcorr
