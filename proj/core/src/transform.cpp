#include "rmtcorr/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rmtcorr/error.hpp"

namespace rmtcorr {

namespace {

struct RowMoments {
    double mean = 0.0;
    double sigma = 0.0;
    bool degenerate = false;
};

RowMoments row_moments(const double* row, Eigen::Index length) {
    double sum = 0.0;
    double max_abs = 0.0;
    for (Eigen::Index t = 0; t < length; ++t) {
        sum += row[t];
        max_abs = std::max(max_abs, std::abs(row[t]));
    }
    RowMoments m;
    m.mean = sum / static_cast<double>(length);
    double ss = 0.0;
    for (Eigen::Index t = 0; t < length; ++t) {
        const double d = row[t] - m.mean;
        ss += d * d;
    }
    m.sigma = std::sqrt(ss / static_cast<double>(length));
    // A constant row leaves only rounding noise in sigma.
    m.degenerate = !(m.sigma > 1e-13 * max_abs) || !std::isfinite(m.sigma);
    return m;
}

}  // namespace

std::size_t Histogram::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

double Histogram::density(std::size_t bin) const {
    const auto n = total();
    if (n == 0) return 0.0;
    const double width = edges[bin + 1] - edges[bin];
    return static_cast<double>(counts[bin]) / (static_cast<double>(n) * width);
}

Histogram make_histogram(std::span<const double> values, double lo, double hi,
                         double bin_width) {
    if (!(bin_width > 0.0) || !(hi > lo)) {
        throw Error(ErrorCode::InvalidArgument, "histogram needs bin_width > 0 and hi > lo");
    }
    const auto bins = static_cast<std::size_t>(
        std::max(1.0, std::ceil((hi - lo) / bin_width - 1e-9)));

    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t k = 0; k < bins; ++k) h.edges[k] = lo + static_cast<double>(k) * bin_width;
    h.edges[bins] = hi;
    h.counts.assign(bins, 0);

    for (double v : values) {
        if (v < lo || v > hi) continue;
        auto k = static_cast<std::size_t>(std::floor((v - lo) / bin_width));
        k = std::min(k, bins - 1);
        // Guard the floor() against edges that are not exact multiples.
        while (k > 0 && v < h.edges[k]) --k;
        while (k + 1 < bins && v >= h.edges[k + 1]) ++k;
        ++h.counts[k];
    }
    return h;
}

RawReturns log_returns(const PriceTable& table, int interval) {
    if (interval < 1) {
        throw Error(ErrorCode::InvalidArgument, "return interval must be a positive integer");
    }
    const auto dates = static_cast<Eigen::Index>(table.date_count());
    if (dates < interval + 1) {
        throw Error(ErrorCode::IntervalTooLarge,
                    "interval " + std::to_string(interval) + " needs at least " +
                        std::to_string(interval + 1) + " dates, table has " +
                        std::to_string(dates));
    }
    const Eigen::Index n = table.prices.rows();
    const Eigen::Index length = dates - interval;

    RawReturns raw;
    raw.tickers = table.tickers;
    raw.interval = interval;
    raw.values.resize(n, length);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index t = 0; t < length; ++t) {
            raw.values(i, t) = std::log(table.prices(i, t + interval)) - std::log(table.prices(i, t));
        }
    }
    return raw;
}

ReturnMatrix normalize(RawReturns raw) {
    const Eigen::Index n = raw.values.rows();
    const Eigen::Index length = raw.values.cols();
    if (length < 1) throw Error(ErrorCode::TooSmall, "return series is empty");

    ReturnMatrix rm;
    rm.tickers = std::move(raw.tickers);
    rm.interval = raw.interval;
    rm.raw_mean.resize(n);
    rm.raw_sigma.resize(n);
    rm.returns = std::move(raw.values);

    for (Eigen::Index i = 0; i < n; ++i) {
        double* row = rm.returns.row(i).data();
        const auto m = row_moments(row, length);
        if (m.degenerate) {
            const auto& ticker = rm.tickers[static_cast<std::size_t>(i)];
            throw Error(ErrorCode::ZeroVariance, "ticker " + ticker + " has zero return variance",
                        ticker);
        }
        rm.raw_mean(i) = m.mean;
        rm.raw_sigma(i) = m.sigma;
        for (Eigen::Index t = 0; t < length; ++t) row[t] = (row[t] - m.mean) / m.sigma;
    }
    return rm;
}

VarianceScreen drop_zero_variance(RawReturns raw) {
    const Eigen::Index n = raw.values.rows();
    const Eigen::Index length = raw.values.cols();
    std::vector<Eigen::Index> keep;
    VarianceScreen screen;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (length > 0 && row_moments(raw.values.row(i).data(), length).degenerate) {
            screen.dropped.push_back(raw.tickers[static_cast<std::size_t>(i)]);
        } else {
            keep.push_back(i);
        }
    }
    screen.kept.interval = raw.interval;
    screen.kept.values.resize(static_cast<Eigen::Index>(keep.size()), length);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        screen.kept.values.row(static_cast<Eigen::Index>(k)) = raw.values.row(keep[k]);
        screen.kept.tickers.push_back(raw.tickers[static_cast<std::size_t>(keep[k])]);
    }
    return screen;
}

CorrMatrix correlation(const ReturnMatrix& rm) {
    const Eigen::Index n = rm.returns.rows();
    const Eigen::Index length = rm.returns.cols();
    const double inv_t = 1.0 / static_cast<double>(length);

    CorrMatrix corr;
    corr.tickers = rm.tickers;
    corr.samples = static_cast<std::size_t>(length);
    corr.values.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double* ri = rm.returns.row(i).data();
        corr.values(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double* rj = rm.returns.row(j).data();
            double dot = 0.0;
            for (Eigen::Index t = 0; t < length; ++t) dot += ri[t] * rj[t];
            const double c = std::clamp(dot * inv_t, -1.0, 1.0);
            corr.values(i, j) = c;
            corr.values(j, i) = c;
        }
    }
    return corr;
}

ElementStats element_stats(const CorrMatrix& corr, double bin_width) {
    if (!(bin_width > 0.0 && bin_width <= 2.0)) {
        throw Error(ErrorCode::InvalidArgument, "bin width must lie in (0, 2]");
    }
    const Eigen::Index n = corr.values.rows();
    std::vector<double> upper;
    upper.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) upper.push_back(corr.values(i, j));
    }

    ElementStats stats;
    stats.count = upper.size();
    if (!upper.empty()) {
        stats.mean = std::accumulate(upper.begin(), upper.end(), 0.0) /
                     static_cast<double>(upper.size());
        auto [lo, hi] = std::minmax_element(upper.begin(), upper.end());
        stats.min = *lo;
        stats.max = *hi;
        stats.count_negative = static_cast<std::size_t>(
            std::count_if(upper.begin(), upper.end(), [](double v) { return v < 0.0; }));
    }
    stats.histogram = make_histogram(upper, -1.0, 1.0, bin_width);
    return stats;
}

}  // namespace rmtcorr
