#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rmtcorr/ingest.hpp"
#include "rmtcorr/spectrum.hpp"

namespace rmtcorr {

struct DominantMember {
    std::size_t stock = 0;
    std::string ticker;
    double component = 0.0;
};

/// Stocks whose eigenvector component satisfies |u_i| >= threshold, sorted by
/// |u_i| descending (stock index breaks ties).
struct DominantSet {
    std::size_t mode = 0;
    double threshold = 0.0;
    std::vector<DominantMember> members;
    std::map<std::string, std::size_t> by_sector;
    std::map<Category, std::size_t> by_category;

    std::size_t size() const noexcept { return members.size(); }
    /// Fraction of members labeled `category`; nullopt for an empty set.
    std::optional<double> share(Category category) const;
};

/// Throws ModeOutOfRange when mode >= N and InvalidArgument unless
/// u_c is in (0, 1].
DominantSet dominant_components(const SpectrumResult& spectrum, std::size_t mode, double u_c,
                                const SectorMap& map);

/// |u| of the count-th largest component of `mode`: using it as u_c selects
/// the top `count` stocks (plus exact ties).
double rank_cutoff(const SpectrumResult& spectrum, std::size_t mode, std::size_t count);

DominantSet top_components(const SpectrumResult& spectrum, std::size_t mode, std::size_t count,
                           const SectorMap& map);

enum class LabelAxis { Category, Sector };

struct CompositionCell {
    std::size_t mode = 0;
    double threshold = 0.0;
    LabelAxis axis = LabelAxis::Category;
    std::string label;
    std::size_t count = 0;
    std::size_t total = 0;

    std::optional<double> percent() const;
    /// "category:ST" or "sector:Finance".
    std::string qualified_label() const;
};

struct CompositionReport {
    std::vector<CompositionCell> cells;
};

/// One cell per (mode, threshold, label) for every category and every
/// business sector present among the spectrum's tickers.
CompositionReport composition_report(const SpectrumResult& spectrum, const SectorMap& map,
                                     const std::vector<std::size_t>& modes,
                                     const std::vector<double>& thresholds);

/// Share of `label` among the dominant components at each threshold of an
/// ascending grid; nullopt where the set is empty.
std::vector<std::optional<double>> monotonicity_scan(const SpectrumResult& spectrum,
                                                     const SectorMap& map, std::size_t mode,
                                                     Category label,
                                                     const std::vector<double>& u_grid);

/// count/total as a percentage rounded half-up to two decimals ("83.33");
/// an em dash when total is zero.
std::string format_percent(std::size_t count, std::size_t total);

}  // namespace rmtcorr
