#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "ruvn/errors.hpp"
#include "ruvn/matrix.hpp"
#include "ruvn/rng.hpp"

namespace ruvn {

/// Outcome of a power-iteration estimate. `value` is always the best estimate
/// so far; `converged` is false when max_iters ran out first.
struct PowerResult {
    double value = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

namespace detail {

inline double norm2(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

inline void normalize(std::vector<double>& v) {
    const double n = norm2(v);
    if (n > 0.0)
        for (double& x : v) x /= n;
}

inline std::vector<double> seeded_unit_vector(std::size_t n, std::uint64_t seed) {
    Xoshiro256 rng(seed, 0);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform01() + 0.5; // strictly positive, full support
    normalize(v);
    return v;
}

} // namespace detail

/// Inverse by LU factorization with partial pivoting. A pivot of magnitude
/// at or below `pivot_tol` declares the matrix singular.
inline Matrix exact_inverse(const Matrix& m, double pivot_tol = 1e-12) {
    if (!m.is_square()) throw std::invalid_argument("exact_inverse: non-square matrix");
    const std::size_t n = m.rows();

    Matrix lu = m;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot_row = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double cand = std::abs(lu(i, k));
            if (cand > best) {
                best = cand;
                pivot_row = i;
            }
        }
        if (best <= pivot_tol)
            throw SingularMatrixError("pivot " + std::to_string(best) + " at column " +
                                      std::to_string(k));
        if (pivot_row != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot_row, j));
            std::swap(perm[k], perm[pivot_row]);
        }
        const double pivot = lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = lu(i, k) / pivot;
            lu(i, k) = factor;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= factor * lu(k, j);
        }
    }

    // Solve LU x = P e_i column by column.
    Matrix inv(n, n);
    std::vector<double> col(n);
    for (std::size_t rhs = 0; rhs < n; ++rhs) {
        for (std::size_t i = 0; i < n; ++i) col[i] = perm[i] == rhs ? 1.0 : 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            double acc = col[i];
            for (std::size_t j = 0; j < i; ++j) acc -= lu(i, j) * col[j];
            col[i] = acc;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double acc = col[ii];
            for (std::size_t j = ii + 1; j < n; ++j) acc -= lu(ii, j) * col[j];
            col[ii] = acc / lu(ii, ii);
        }
        for (std::size_t i = 0; i < n; ++i) inv(i, rhs) = col[i];
    }
    return inv;
}

/// Partial sum I + A + ... + A^k by repeated multiply-accumulate.
inline Matrix neumann_partial_sum(const Matrix& a, std::size_t k) {
    if (!a.is_square()) throw std::invalid_argument("neumann_partial_sum: non-square matrix");
    Matrix sum = Matrix::identity(a.rows());
    Matrix power = Matrix::identity(a.rows());
    for (std::size_t n = 1; n <= k; ++n) {
        power = power * a;
        sum += power;
    }
    return sum;
}

/// Spectral radius by power iteration. Starts from the normalized all-ones
/// vector and falls back to a seeded random vector when the orbit dies or
/// stagnates. The estimate is the two-step geometric mean of growth factors,
/// which also settles for sign-alternating dominant pairs; complex dominant
/// pairs simply fail to converge and come back flagged.
inline PowerResult spectral_radius(const Matrix& m, double tol = 1e-10,
                                   std::size_t max_iters = 20000) {
    if (!m.is_square()) throw std::invalid_argument("spectral_radius: non-square matrix");
    const std::size_t n = m.rows();

    std::vector<double> v(n, 1.0);
    detail::normalize(v);
    bool restarted = false;

    double prev_ratio = -1.0;
    double estimate = 0.0;
    double prev_estimate = -1.0;
    std::size_t stable = 0;
    const std::size_t restart_every = 512;
    std::size_t since_restart = 0;

    for (std::size_t iter = 1; iter <= max_iters; ++iter, ++since_restart) {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = m.row_ptr(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += row[j] * v[j];
            w[i] = acc;
        }
        const double ratio = detail::norm2(w); // v is unit length
        if (ratio == 0.0) {
            if (!restarted) {
                v = detail::seeded_unit_vector(n, 0xA5EEDULL);
                restarted = true;
                prev_ratio = -1.0;
                stable = 0;
                continue;
            }
            return {0.0, true, iter};
        }

        if (prev_ratio >= 0.0) {
            estimate = std::sqrt(ratio * prev_ratio);
            if (prev_estimate >= 0.0 &&
                std::abs(estimate - prev_estimate) <= tol * std::max(1.0, estimate)) {
                if (++stable >= 3) return {estimate, true, iter};
            } else {
                stable = 0;
            }
            prev_estimate = estimate;
        }
        prev_ratio = ratio;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / ratio;

        if (since_restart >= restart_every && stable == 0) {
            v = detail::seeded_unit_vector(n, 0xA5EEDULL + iter);
            prev_ratio = -1.0;
            prev_estimate = -1.0;
            since_restart = 0;
        }
    }
    return {estimate > 0.0 ? estimate : std::max(prev_ratio, 0.0), false, max_iters};
}

/// Largest singular value: power iteration on M^T M, Rayleigh-quotient
/// estimate, relative tolerance `tol`.
inline PowerResult spectral_norm(const Matrix& m, double tol = 1e-10,
                                 std::size_t max_iters = 20000) {
    if (!m.is_square()) throw std::invalid_argument("spectral_norm: non-square matrix");
    const std::size_t n = m.rows();
    const Matrix gram = m.transpose() * m;

    std::vector<double> v(n, 1.0);
    detail::normalize(v);
    bool restarted = false;
    double prev = -1.0;
    std::size_t stable = 0;

    for (std::size_t iter = 1; iter <= max_iters; ++iter) {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = gram.row_ptr(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += row[j] * v[j];
            w[i] = acc;
        }
        double rayleigh = 0.0;
        for (std::size_t i = 0; i < n; ++i) rayleigh += v[i] * w[i];
        rayleigh = std::max(rayleigh, 0.0);
        const double sigma = std::sqrt(rayleigh);

        const double wn = detail::norm2(w);
        if (wn == 0.0) {
            if (!restarted) {
                v = detail::seeded_unit_vector(n, 0xB5EEDULL);
                restarted = true;
                prev = -1.0;
                stable = 0;
                continue;
            }
            return {0.0, true, iter};
        }
        if (prev >= 0.0 && std::abs(sigma - prev) <= tol * std::max(1.0, sigma)) {
            if (++stable >= 3) return {sigma, true, iter};
        } else {
            stable = 0;
        }
        prev = sigma;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
    }
    return {prev, false, max_iters};
}

} // namespace ruvn
