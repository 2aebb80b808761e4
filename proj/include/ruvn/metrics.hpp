#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "ruvn/errors.hpp"
#include "ruvn/flags.hpp"
#include "ruvn/matrix.hpp"

namespace ruvn {

/// ||C_true - C_hat||_F / ||C_true||_F with flagged entries removed from both
/// numerator and denominator.
inline double rel_frobenius_error(const Matrix& c_true, const Matrix& c_hat,
                                  const FlagMask& flagged = FlagMask()) {
    if (c_true.rows() != c_hat.rows() || c_true.cols() != c_hat.cols())
        throw std::invalid_argument("rel_frobenius_error: shape mismatch");
    double num = 0.0, den = 0.0;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < c_true.rows(); ++i) {
        for (std::size_t j = 0; j < c_true.cols(); ++j) {
            if (flagged.dim() && flagged.test(i, j)) continue;
            const double diff = c_true(i, j) - c_hat(i, j);
            num += diff * diff;
            den += c_true(i, j) * c_true(i, j);
            ++kept;
        }
    }
    if (kept == 0) throw AllFlaggedError();
    return std::sqrt(num) / std::sqrt(den);
}

/// Signed relative trace error Tr(C_true - C_hat) / Tr(C_true); flagged
/// diagonal entries are dropped from both traces.
inline double rel_trace_error(const Matrix& c_true, const Matrix& c_hat,
                              const FlagMask& flagged = FlagMask()) {
    if (c_true.rows() != c_hat.rows() || !c_true.is_square() || !c_hat.is_square())
        throw std::invalid_argument("rel_trace_error: shape mismatch");
    double tr_true = 0.0, tr_hat = 0.0;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < c_true.rows(); ++i) {
        if (flagged.dim() && flagged.test(i, i)) continue;
        tr_true += c_true(i, i);
        tr_hat += c_hat(i, i);
        ++kept;
    }
    if (kept == 0) throw AllFlaggedError();
    if (tr_true == 0.0) throw ZeroTraceError();
    return (tr_true - tr_hat) / tr_true;
}

/// Largest entrywise |C_true - C_hat| over non-flagged entries.
inline double max_abs_error(const Matrix& c_true, const Matrix& c_hat,
                            const FlagMask& flagged = FlagMask()) {
    double m = 0.0;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < c_true.rows(); ++i)
        for (std::size_t j = 0; j < c_true.cols(); ++j) {
            if (flagged.dim() && flagged.test(i, j)) continue;
            m = std::max(m, std::abs(c_true(i, j) - c_hat(i, j)));
            ++kept;
        }
    if (kept == 0) throw AllFlaggedError();
    return m;
}

namespace detail {

/// Rank of each position under descending value, ties broken by lower index.
inline std::vector<std::size_t> descending_ranks(const std::vector<double>& x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
    std::vector<std::size_t> rank(x.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = pos;
    return rank;
}

} // namespace detail

/// Number of positions whose descending rank agrees between the two vectors.
inline std::size_t ranking_agreement(const std::vector<double>& x_true,
                                     const std::vector<double>& x_est) {
    if (x_true.size() != x_est.size())
        throw std::invalid_argument("ranking_agreement: length mismatch");
    const auto rank_true = detail::descending_ranks(x_true);
    const auto rank_est = detail::descending_ranks(x_est);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < rank_true.size(); ++i)
        if (rank_true[i] == rank_est[i]) ++agree;
    return agree;
}

struct SlopeFit {
    double slope = 0.0;
    double r_squared = 0.0;
};

/// Least-squares line through the points, optionally in log-log coordinates.
inline SlopeFit slope_fit(const std::vector<std::pair<double, double>>& points,
                          bool log_log = false) {
    if (points.size() < 3) throw std::invalid_argument("slope_fit: need at least 3 points");
    std::vector<double> xs, ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const auto& [x, y] : points) {
        if (log_log && (x <= 0.0 || y <= 0.0))
            throw std::invalid_argument("slope_fit: log-log fit needs positive coordinates");
        xs.push_back(log_log ? std::log(x) : x);
        ys.push_back(log_log ? std::log(y) : y);
    }
    const double n = static_cast<double>(xs.size());
    const double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double dx = xs[k] - mean_x;
        const double dy = ys[k] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw DegenerateFitError("all x-values coincide");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

} // namespace ruvn
