#include "rmtcorr/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rmtcorr/error.hpp"
#include "rmtcorr/rng.hpp"

namespace rmtcorr {

namespace {

void orient(Matrix& vectors) {
    for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
        Eigen::Index lead = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            const double m = std::abs(vectors(i, k));
            if (m > best) {
                best = m;
                lead = i;
            }
        }
        if (vectors(lead, k) < 0.0) vectors.col(k) = -vectors.col(k);
    }
}

void sort_descending(Vector& values, Matrix& vectors) {
    const auto n = values.size();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (values(a) != values(b)) return values(a) > values(b);
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            if (vectors(i, a) != vectors(i, b)) return vectors(i, a) > vectors(i, b);
        }
        return false;
    });
    Vector sorted_values(n);
    Matrix sorted_vectors(vectors.rows(), n);
    for (Eigen::Index k = 0; k < n; ++k) {
        sorted_values(k) = values(idx[static_cast<std::size_t>(k)]);
        sorted_vectors.col(k) = vectors.col(idx[static_cast<std::size_t>(k)]);
    }
    values = std::move(sorted_values);
    vectors = std::move(sorted_vectors);
}

}  // namespace

WishartBounds mp_bounds_for_ratio(double q) {
    if (!(q >= 1.0) || !std::isfinite(q)) {
        throw Error(ErrorCode::QBelowOne, "Wishart bounds need Q = T/N >= 1");
    }
    const double r = 1.0 / std::sqrt(q);
    return {q, (1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r)};
}

WishartBounds mp_bounds(std::size_t stocks, std::size_t samples) {
    if (stocks == 0) throw Error(ErrorCode::InvalidArgument, "N must be positive");
    if (samples < stocks) {
        throw Error(ErrorCode::QBelowOne, "Q = T/N = " + std::to_string(samples) + "/" +
                                              std::to_string(stocks) + " is below 1");
    }
    return mp_bounds_for_ratio(static_cast<double>(samples) / static_cast<double>(stocks));
}

double mp_density(double lambda, double q) {
    const auto b = mp_bounds_for_ratio(q);
    if (!(lambda > b.lambda_min && lambda < b.lambda_max)) return 0.0;
    return q / (2.0 * std::numbers::pi) *
           std::sqrt((b.lambda_max - lambda) * (lambda - b.lambda_min)) / lambda;
}

EigenDecomposition jacobi_eigensolve(const Matrix& input, double tol) {
    const Eigen::Index n = input.rows();
    if (input.cols() != n) throw Error(ErrorCode::NotSymmetric, "matrix is not square");
    if (!input.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j + 1; i < n; ++i) {
            if (input(i, j) != input(j, i)) {
                throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric at (" +
                                                         std::to_string(i) + ", " +
                                                         std::to_string(j) + ")");
            }
        }
    }

    Matrix a = input;
    Matrix v = Matrix::Identity(n, n);
    const double threshold = tol * a.norm();
    int sweeps = 0;

    for (;;) {
        double off = 0.0;
        for (Eigen::Index q = 1; q < n; ++q) {
            for (Eigen::Index p = 0; p < q; ++p) off = std::max(off, std::abs(a(p, q)));
        }
        if (off <= threshold) break;
        if (sweeps == kJacobiMaxSweeps) {
            throw Error(ErrorCode::NoConvergence,
                        "Jacobi did not converge in " + std::to_string(kJacobiMaxSweeps) +
                            " sweeps");
        }
        ++sweeps;

        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= threshold) continue;

                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = (theta >= 0.0 ? 1.0 : -1.0) /
                        (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                double* col_p = a.col(p).data();
                double* col_q = a.col(q).data();
                for (Eigen::Index k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = col_p[k];
                    const double akq = col_q[k];
                    const double new_kp = c * akp - s * akq;
                    const double new_kq = s * akp + c * akq;
                    col_p[k] = new_kp;
                    col_q[k] = new_kq;
                    a(p, k) = new_kp;
                    a(q, k) = new_kq;
                }
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                double* vp = v.col(p).data();
                double* vq = v.col(q).data();
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = vp[k];
                    const double vkq = vq[k];
                    vp[k] = c * vkp - s * vkq;
                    vq[k] = s * vkp + c * vkq;
                }
            }
        }
    }

    EigenDecomposition out;
    out.values = a.diagonal();
    out.vectors = std::move(v);
    out.sweeps = sweeps;
    orient(out.vectors);
    sort_descending(out.values, out.vectors);

    const Matrix residual =
        input * out.vectors - out.vectors * out.values.asDiagonal();
    out.residual_max = n == 0 ? 0.0 : residual.cwiseAbs().maxCoeff();
    return out;
}

SpectrumResult eigensolve(const CorrMatrix& corr, double tol, double margin) {
    auto dec = jacobi_eigensolve(corr.values, tol);

    SpectrumResult s;
    s.tickers = corr.tickers;
    s.samples = corr.samples;
    s.eigenvalues = std::move(dec.values);
    s.eigenvectors = std::move(dec.vectors);
    s.residual_max = dec.residual_max;
    s.sweeps = dec.sweeps;
    if (corr.order() > 0 && corr.samples >= corr.order()) {
        s.bounds = mp_bounds(corr.order(), corr.samples);
    }
    s.deviating = deviating_eigenvalues(s, margin);
    return s;
}

std::vector<std::size_t> deviating_eigenvalues(const SpectrumResult& spectrum, double margin) {
    if (!(margin >= 0.0)) throw Error(ErrorCode::InvalidArgument, "margin must be >= 0");
    std::vector<std::size_t> out;
    if (!spectrum.bounds) return out;
    const double cut = spectrum.bounds->lambda_max * (1.0 + margin);
    for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k) {
        if (spectrum.eigenvalues(k) > cut) out.push_back(static_cast<std::size_t>(k));
    }
    return out;
}

std::vector<SpectrumResult> shuffle_surrogate(const ReturnMatrix& rm, std::uint64_t seed,
                                              std::size_t n_shuffles) {
    std::vector<SpectrumResult> out;
    out.reserve(n_shuffles);
    const Eigen::Index n = rm.returns.rows();
    const Eigen::Index length = rm.returns.cols();
    for (std::size_t r = 0; r < n_shuffles; ++r) {
        RawReturns shuffled;
        shuffled.tickers = rm.tickers;
        shuffled.interval = rm.interval;
        shuffled.values = rm.returns;
        for (Eigen::Index i = 0; i < n; ++i) {
            auto gen = substream(seed, StreamRole::Shuffle, r, static_cast<std::uint64_t>(i));
            double* row = shuffled.values.row(i).data();
            std::shuffle(row, row + length, gen);
        }
        out.push_back(eigensolve(correlation(normalize(std::move(shuffled)))));
    }
    return out;
}

std::optional<double> BandCompliance::fraction() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(inside) / static_cast<double>(total);
}

BandCompliance band_compliance(std::span<const SpectrumResult> replicates,
                               const WishartBounds& bounds, double pad) {
    BandCompliance bc;
    bc.band_lo = bounds.lambda_min - pad;
    bc.band_hi = bounds.lambda_max + pad;
    bc.replicates = replicates.size();
    for (const auto& s : replicates) {
        std::size_t inside = 0;
        for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
            const double l = s.eigenvalues(k);
            if (l >= bc.band_lo && l <= bc.band_hi) ++inside;
        }
        bc.inside += inside;
        bc.total += s.order();
        if (inside == s.order()) ++bc.replicates_inside;
    }
    return bc;
}

Histogram eigenvalue_histogram(const SpectrumResult& spectrum, double bin_width) {
    if (!(bin_width > 0.0)) throw Error(ErrorCode::InvalidArgument, "bin width must be positive");
    std::vector<double> values(spectrum.eigenvalues.data(),
                               spectrum.eigenvalues.data() + spectrum.eigenvalues.size());
    double lo = 0.0;
    double hi = bin_width;
    if (!values.empty()) {
        const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        lo = std::min(0.0, std::floor(*mn / bin_width) * bin_width);
        hi = std::max(lo + bin_width, std::ceil(*mx / bin_width) * bin_width);
        if (hi < *mx) hi += bin_width;
    }
    return make_histogram(values, lo, hi, bin_width);
}

}  // namespace rmtcorr
