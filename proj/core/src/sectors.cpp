#include "rmtcorr/sectors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rmtcorr/error.hpp"

namespace rmtcorr {

namespace {

void check_mode(const SpectrumResult& spectrum, std::size_t mode) {
    if (mode >= spectrum.order()) {
        throw Error(ErrorCode::ModeOutOfRange, "mode " + std::to_string(mode) +
                                                   " out of range for N = " +
                                                   std::to_string(spectrum.order()));
    }
}

constexpr Category kCategories[] = {Category::ST, Category::BlueChip, Category::General};

}  // namespace

std::optional<double> DominantSet::share(Category category) const {
    if (members.empty()) return std::nullopt;
    auto it = by_category.find(category);
    const std::size_t n = it == by_category.end() ? 0 : it->second;
    return static_cast<double>(n) / static_cast<double>(members.size());
}

DominantSet dominant_components(const SpectrumResult& spectrum, std::size_t mode, double u_c,
                                const SectorMap& map) {
    check_mode(spectrum, mode);
    if (!(u_c > 0.0 && u_c <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "threshold u_c must lie in (0, 1]");
    }
    DominantSet set;
    set.mode = mode;
    set.threshold = u_c;
    const auto col = spectrum.eigenvectors.col(static_cast<Eigen::Index>(mode));
    for (Eigen::Index i = 0; i < col.size(); ++i) {
        if (std::abs(col(i)) >= u_c) {
            const auto stock = static_cast<std::size_t>(i);
            set.members.push_back({stock, spectrum.tickers[stock], col(i)});
        }
    }
    std::stable_sort(set.members.begin(), set.members.end(),
                     [](const DominantMember& a, const DominantMember& b) {
                         return std::abs(a.component) > std::abs(b.component);
                     });
    for (const auto& m : set.members) {
        const auto info = map.lookup(m.ticker);
        ++set.by_sector[info.business_sector];
        ++set.by_category[info.category];
    }
    return set;
}

double rank_cutoff(const SpectrumResult& spectrum, std::size_t mode, std::size_t count) {
    check_mode(spectrum, mode);
    if (count == 0 || count > spectrum.order()) {
        throw Error(ErrorCode::InvalidArgument, "rank cutoff needs 1 <= count <= N");
    }
    const auto col = spectrum.eigenvectors.col(static_cast<Eigen::Index>(mode));
    std::vector<double> mags(static_cast<std::size_t>(col.size()));
    for (Eigen::Index i = 0; i < col.size(); ++i) {
        mags[static_cast<std::size_t>(i)] = std::abs(col(i));
    }
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(count - 1),
                     mags.end(), std::greater<>());
    return mags[count - 1];
}

DominantSet top_components(const SpectrumResult& spectrum, std::size_t mode, std::size_t count,
                           const SectorMap& map) {
    return dominant_components(spectrum, mode, rank_cutoff(spectrum, mode, count), map);
}

std::optional<double> CompositionCell::percent() const {
    if (total == 0) return std::nullopt;
    return 100.0 * static_cast<double>(count) / static_cast<double>(total);
}

std::string CompositionCell::qualified_label() const {
    return (axis == LabelAxis::Category ? "category:" : "sector:") + label;
}

CompositionReport composition_report(const SpectrumResult& spectrum, const SectorMap& map,
                                     const std::vector<std::size_t>& modes,
                                     const std::vector<double>& thresholds) {
    if (modes.empty() || thresholds.empty()) {
        throw Error(ErrorCode::InvalidArgument, "composition report needs modes and thresholds");
    }
    std::set<std::string> sectors;
    for (const auto& t : spectrum.tickers) sectors.insert(map.lookup(t).business_sector);

    CompositionReport report;
    for (auto mode : modes) {
        for (auto u_c : thresholds) {
            const auto set = dominant_components(spectrum, mode, u_c, map);
            for (auto category : kCategories) {
                auto it = set.by_category.find(category);
                report.cells.push_back({mode, u_c, LabelAxis::Category,
                                        std::string(to_string(category)),
                                        it == set.by_category.end() ? 0 : it->second, set.size()});
            }
            for (const auto& sector : sectors) {
                auto it = set.by_sector.find(sector);
                report.cells.push_back({mode, u_c, LabelAxis::Sector, sector,
                                        it == set.by_sector.end() ? 0 : it->second, set.size()});
            }
        }
    }
    return report;
}

std::vector<std::optional<double>> monotonicity_scan(const SpectrumResult& spectrum,
                                                     const SectorMap& map, std::size_t mode,
                                                     Category label,
                                                     const std::vector<double>& u_grid) {
    if (!std::is_sorted(u_grid.begin(), u_grid.end())) {
        throw Error(ErrorCode::InvalidArgument, "threshold grid must be ascending");
    }
    std::vector<std::optional<double>> out;
    out.reserve(u_grid.size());
    for (double u_c : u_grid) {
        out.push_back(dominant_components(spectrum, mode, u_c, map).share(label));
    }
    return out;
}

std::string format_percent(std::size_t count, std::size_t total) {
    if (total == 0) return "—";
    // Hundredths of a percent, rounded half-up in integer arithmetic.
    const unsigned long long scaled =
        (2ULL * 10000ULL * count + total) / (2ULL * total);
    const auto whole = scaled / 100;
    const auto frac = scaled % 100;
    return std::to_string(whole) + "." + (frac < 10 ? "0" : "") + std::to_string(frac);
}

}  // namespace rmtcorr
