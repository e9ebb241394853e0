#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmtcorr/transform.hpp"
#include "rmtcorr/types.hpp"

namespace rmtcorr {

inline constexpr double kJacobiTolerance = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kDeviationMargin = 0.05;
inline constexpr double kSurrogateBandPad = 0.1;

/// Support of the Wishart (Marchenko-Pastur) eigenvalue density for
/// Q = T / N.
struct WishartBounds {
    double q = 1.0;
    double lambda_min = 0.0;
    double lambda_max = 4.0;
};

/// Q = samples / stocks; throws QBelowOne when samples < stocks.
WishartBounds mp_bounds(std::size_t stocks, std::size_t samples);
WishartBounds mp_bounds_for_ratio(double q);

/// Q/(2 pi) * sqrt((lambda_max - l)(l - lambda_min)) / l inside the support,
/// 0 elsewhere.
double mp_density(double lambda, double q);

/// Raw output of the symmetric eigensolver. Columns of `vectors` pair with
/// `values`; ordering and orientation follow the conventions documented on
/// SpectrumResult.
struct EigenDecomposition {
    Vector values;
    Matrix vectors;
    double residual_max = 0.0;
    int sweeps = 0;
};

/// Cyclic Jacobi with a fixed row-by-row sweep order. Stops when every
/// off-diagonal magnitude is below tol * ||A||_F; throws NoConvergence after
/// kJacobiMaxSweeps sweeps and NotSymmetric unless A == A^T bit for bit.
EigenDecomposition jacobi_eigensolve(const Matrix& symmetric, double tol = kJacobiTolerance);

/// Eigen-decomposition of a correlation matrix.
///
/// - eigenvalues sorted descending; exact ties ordered by the first
///   differing eigenvector component, larger first
/// - each eigenvector flipped so its largest-magnitude component is positive
///   (lowest index wins a magnitude tie)
/// - `bounds` present whenever samples >= stocks
struct SpectrumResult {
    std::vector<std::string> tickers;
    std::size_t samples = 0;
    Vector eigenvalues;
    Matrix eigenvectors;
    double residual_max = 0.0;
    int sweeps = 0;
    std::optional<WishartBounds> bounds;
    std::vector<std::size_t> deviating;

    std::size_t order() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
};

SpectrumResult eigensolve(const CorrMatrix& corr, double tol = kJacobiTolerance,
                          double margin = kDeviationMargin);

/// Indices k with lambda_k > lambda_max * (1 + margin). Empty without bounds.
std::vector<std::size_t> deviating_eigenvalues(const SpectrumResult& spectrum,
                                               double margin = kDeviationMargin);

/// Independently permutes each stock's series in time (stream keyed by
/// seed, replicate, stock), then recomputes normalization, correlation and
/// spectrum per replicate.
std::vector<SpectrumResult> shuffle_surrogate(const ReturnMatrix& rm, std::uint64_t seed,
                                              std::size_t n_shuffles);

struct BandCompliance {
    double band_lo = 0.0;
    double band_hi = 0.0;
    std::size_t inside = 0;
    std::size_t total = 0;
    std::size_t replicates = 0;
    std::size_t replicates_inside = 0;  // every eigenvalue within the band

    /// Fraction of eigenvalues in the band; nullopt when there are none.
    std::optional<double> fraction() const;
};

/// Checks eigenvalues against [lambda_min - pad, lambda_max + pad].
BandCompliance band_compliance(std::span<const SpectrumResult> replicates,
                               const WishartBounds& bounds, double pad = kSurrogateBandPad);

/// P(lambda) histogram starting at min(0, smallest eigenvalue).
Histogram eigenvalue_histogram(const SpectrumResult& spectrum, double bin_width);

}  // namespace rmtcorr
