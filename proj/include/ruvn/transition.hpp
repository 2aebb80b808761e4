#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "ruvn/errors.hpp"
#include "ruvn/linalg.hpp"
#include "ruvn/matrix.hpp"

namespace ruvn {

/// Row-stochastic transition matrix with per-row cumulative tables for
/// single-draw inverse-CDF sampling. Immutable after construction.
class TransitionKernel {
public:
    explicit TransitionKernel(Matrix probs) : probs_(std::move(probs)) {
        if (!probs_.is_square()) throw std::invalid_argument("kernel must be square");
        const std::size_t d = probs_.rows();
        cumsum_ = Matrix(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double p = probs_(i, j);
                if (p < 0.0 || p > 1.0) throw std::invalid_argument("probability out of [0,1]");
                acc += p;
                cumsum_(i, j) = acc;
            }
            if (std::abs(acc - 1.0) > 1e-12)
                throw std::invalid_argument("row " + std::to_string(i) + " sums to " +
                                            std::to_string(acc));
            // Forced exact 1 so any u in [0,1) lands inside the table.
            cumsum_(i, d - 1) = 1.0;
        }
    }

    std::size_t dim() const { return probs_.rows(); }
    const Matrix& probs() const { return probs_; }
    double operator()(std::size_t i, std::size_t j) const { return probs_(i, j); }

    /// Inverse-CDF draw from row i using one uniform u in [0,1).
    /// States with probability zero are never returned.
    std::size_t sample(std::size_t i, double u) const {
        const double* row = cumsum_.row_ptr(i);
        const double* pos = std::upper_bound(row, row + dim(), u);
        return static_cast<std::size_t>(pos - row);
    }

    /// True when P_ij > 0 wherever A_ij != 0 (weights absolutely continuous).
    bool supports(const Matrix& a) const {
        if (a.rows() != dim() || a.cols() != dim()) return false;
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j)
                if (a(i, j) != 0.0 && probs_(i, j) <= 0.0) return false;
        return true;
    }

private:
    Matrix probs_;
    Matrix cumsum_;
};

/// P_ij = |A_ij| / sum_k |A_ik|. Throws ZeroRowError when a row of A vanishes.
inline TransitionKernel build_row_normalized(const Matrix& a) {
    if (!a.is_square()) throw std::invalid_argument("build_row_normalized: non-square matrix");
    const std::size_t d = a.rows();
    Matrix p(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < d; ++j) sum += std::abs(a(i, j));
        if (sum == 0.0) throw ZeroRowError(i);
        for (std::size_t j = 0; j < d; ++j) p(i, j) = std::abs(a(i, j)) / sum;
    }
    return TransitionKernel(std::move(p));
}

/// Blend of the row-normalized kernel with the uniform kernel:
/// P = (1-eps) Q + eps/d, zero rows of A mapped to uniform rows of Q.
/// The result is irreducible and aperiodic for any eps in (0,1).
inline TransitionKernel build_support_extended(const Matrix& a, double eps = 0.01) {
    if (!a.is_square()) throw std::invalid_argument("build_support_extended: non-square matrix");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("build_support_extended: eps must lie in (0,1)");
    const std::size_t d = a.rows();
    const double uniform = 1.0 / static_cast<double>(d);
    Matrix p(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < d; ++j) sum += std::abs(a(i, j));
        for (std::size_t j = 0; j < d; ++j) {
            const double q = sum == 0.0 ? uniform : std::abs(a(i, j)) / sum;
            p(i, j) = (1.0 - eps) * q + eps * uniform;
        }
    }
    return TransitionKernel(std::move(p));
}

/// Convergence verdict for the weighted-walk estimators: the walk converges
/// iff the entrywise second-moment matrix H_ij = A_ij^2 / P_ij has spectral
/// radius below one. `indeterminate` is set when the radius estimate itself
/// failed to converge; callers treat that as failure.
struct ConvergenceReport {
    double rho_hat = 0.0;
    bool converges = false;
    bool indeterminate = false;
    Matrix hhat;
};

inline Matrix second_moment_matrix(const Matrix& a, const TransitionKernel& p) {
    const std::size_t d = a.rows();
    Matrix h(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            h(i, j) = p(i, j) != 0.0 ? a(i, j) * a(i, j) / p(i, j) : 0.0;
    return h;
}

inline ConvergenceReport check_convergence(const Matrix& a, const TransitionKernel& p) {
    if (a.rows() != p.dim() || !a.is_square())
        throw std::invalid_argument("check_convergence: shape mismatch");
    if (!p.supports(a))
        throw std::invalid_argument("check_convergence: kernel does not support A");
    ConvergenceReport report;
    report.hhat = second_moment_matrix(a, p);
    const PowerResult rho = spectral_radius(report.hhat);
    report.rho_hat = rho.value;
    report.indeterminate = !rho.converged;
    report.converges = rho.value < 1.0;
    return report;
}

} // namespace ruvn
