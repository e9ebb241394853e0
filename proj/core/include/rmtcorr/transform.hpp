#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rmtcorr/ingest.hpp"
#include "rmtcorr/types.hpp"

namespace rmtcorr {

/// Log returns before normalization, N x T.
struct RawReturns {
    std::vector<std::string> tickers;
    RowMatrix values;
    int interval = 1;
};

/// Normalized returns: every row has zero mean and unit population variance.
struct ReturnMatrix {
    std::vector<std::string> tickers;
    RowMatrix returns;
    Vector raw_mean;
    Vector raw_sigma;
    int interval = 1;

    std::size_t stock_count() const noexcept { return static_cast<std::size_t>(returns.rows()); }
    std::size_t length() const noexcept { return static_cast<std::size_t>(returns.cols()); }
};

/// Equal-time correlation matrix. `samples` is the series length T it was
/// estimated from; the Wishart ratio needs it.
struct CorrMatrix {
    std::vector<std::string> tickers;
    Matrix values;
    std::size_t samples = 0;

    std::size_t order() const noexcept { return static_cast<std::size_t>(values.rows()); }
};

/// Fixed-width bins over [edges.front(), edges.back()]. Bins are left-closed,
/// right-open except the last, which is closed.
struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;

    std::size_t bin_count() const noexcept { return counts.size(); }
    std::size_t total() const noexcept;
    /// count / (total * bin width); zero when the histogram is empty.
    double density(std::size_t bin) const;
};

Histogram make_histogram(std::span<const double> values, double lo, double hi, double bin_width);

struct ElementStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count_negative = 0;
    std::size_t count = 0;
    Histogram histogram;
};

/// R(t) = ln P(t + interval) - ln P(t) over calendar-index steps; filled
/// cells are used as-is. Overlapping windows when interval > 1.
RawReturns log_returns(const PriceTable& table, int interval = 1);

/// (R - <R>) / sigma with population sigma. Throws ZeroVariance naming the
/// first constant row.
ReturnMatrix normalize(RawReturns raw);

struct VarianceScreen {
    RawReturns kept;
    std::vector<std::string> dropped;
};

/// Removes rows that normalize() would reject.
VarianceScreen drop_zero_variance(RawReturns raw);

/// C_ij = (1/T) sum_t r_i(t) r_j(t), upper triangle computed once and
/// mirrored, diagonal set to 1, entries clamped to [-1, 1].
CorrMatrix correlation(const ReturnMatrix& rm);

/// Statistics of the N(N-1)/2 upper off-diagonal entries.
ElementStats element_stats(const CorrMatrix& corr, double bin_width = 0.02);

}  // namespace rmtcorr
