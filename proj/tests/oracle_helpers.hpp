#pragma once

// Test-only reference computations, kept independent of the library's
// estimator code paths.

#include <cmath>
#include <cstdint>
#include <vector>

#include "ruvn/matrix.hpp"
#include "ruvn/rng.hpp"
#include "ruvn/transition.hpp"

namespace oracle {

/// Expected first-passage cycle weight E[alpha^{ij}] by literal path
/// enumeration: walk every path i -> j over the nonzero pattern of A that does
/// not visit j in between, summing the product of A entries along the path
/// (the sampling probabilities cancel against the weight ratios under a
/// matching-support kernel). Branches are cut once the running |product|
/// falls below `prune`, which is sound while every |A entry| <= 1.
inline double first_passage_weight_enum(const ruvn::Matrix& a, std::size_t i, std::size_t j,
                                        std::size_t max_len, double prune = 1e-14) {
    struct Dfs {
        const ruvn::Matrix& a;
        std::size_t j;
        std::size_t max_len;
        double prune;
        double total = 0.0;

        void walk(std::size_t state, double product, std::size_t len) {
            if (len >= max_len) return;
            for (std::size_t next = 0; next < a.cols(); ++next) {
                const double edge = a(state, next);
                if (edge == 0.0) continue;
                const double extended = product * edge;
                if (next == j) {
                    total += extended;
                    continue; // first passage: paths may not continue through j
                }
                if (std::abs(extended) < prune) continue;
                walk(next, extended, len + 1);
            }
        }
    };
    Dfs dfs{a, j, max_len, prune};
    dfs.walk(i, 1.0, 0);
    return dfs.total;
}

/// Same sum evaluated level by level (no pruning): v_k carries the signed
/// mass of all length-k prefixes that have not yet touched j.
inline double first_passage_weight_dp(const ruvn::Matrix& a, std::size_t i, std::size_t j,
                                      std::size_t max_len) {
    const std::size_t d = a.rows();
    std::vector<double> v(d, 0.0);
    v[i] = 1.0;
    double total = 0.0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<double> next(d, 0.0);
        for (std::size_t m = 0; m < d; ++m) {
            if (v[m] == 0.0) continue;
            for (std::size_t n = 0; n < d; ++n) {
                const double edge = a(m, n);
                if (edge == 0.0) continue;
                if (n == j)
                    total += v[m] * edge;
                else
                    next[n] += v[m] * edge;
            }
        }
        v.swap(next);
    }
    return total;
}

/// Moments of the truncated fixed-point recursion Z_t = 1 + alpha Z_{t-1}
/// with alpha independent of Z_{t-1} and Z_0 = 1.
inline double sfpe_second_moment_recursion(double mean_alpha, double mean_alpha_sq,
                                           std::size_t depth) {
    double m1 = 1.0, m2 = 1.0;
    for (std::size_t t = 0; t < depth; ++t) {
        const double next_m2 = 1.0 + 2.0 * mean_alpha * m1 + mean_alpha_sq * m2;
        m1 = 1.0 + mean_alpha * m1;
        m2 = next_m2;
    }
    return m2;
}

/// E[Z^2] for the Bernoulli(1/2) alpha in {0,1}: enumerate the truncated
/// distribution P(Z = k+1) = 2^{-(k+1)} directly.
inline double sfpe_second_moment_bernoulli_enum(std::size_t depth) {
    double total = 0.0;
    double prob = 0.5;
    for (std::size_t k = 0; k < depth; ++k) {
        const double z = static_cast<double>(k + 1);
        total += z * z * prob;
        prob *= 0.5;
    }
    return total;
}

/// Seeded dense matrix with entries uniform in [lo, hi].
inline ruvn::Matrix random_matrix(std::size_t d, std::uint64_t seed, double lo = -1.0,
                                  double hi = 1.0) {
    ruvn::Xoshiro256 rng(seed, 0);
    ruvn::Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = lo + (hi - lo) * rng.uniform01();
    return m;
}

/// Random matrix rescaled so the row-normalized-kernel second-moment matrix
/// has spectral radius `rho_target`. Normalization is scale free, so the
/// radius scales with c^2 and the rescaling is exact.
inline ruvn::Matrix scaled_random_matrix(std::size_t d, std::uint64_t seed, double rho_target,
                                         bool strictly_positive = false) {
    ruvn::Matrix m = strictly_positive ? random_matrix(d, seed, 0.05, 1.0)
                                       : random_matrix(d, seed);
    const auto kernel = ruvn::build_row_normalized(m);
    const auto rho = ruvn::spectral_radius(ruvn::second_moment_matrix(m, kernel));
    const double c = std::sqrt(rho_target / rho.value);
    return m * c;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var = xs.size() > 1 ? var / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

} // namespace oracle
