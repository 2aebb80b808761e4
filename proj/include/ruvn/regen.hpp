#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "ruvn/counts.hpp"
#include "ruvn/engine.hpp"
#include "ruvn/flags.hpp"
#include "ruvn/matrix.hpp"

namespace ruvn {

/// State of the regenerative estimator. `lambda` holds the running weight of
/// every open cycle, `sigma` the cumulative closed-cycle weights, `gamma` the
/// closed-cycle counts. Cycle (i,j) runs from a visit to i until the next
/// visit to j; closing it zeroes lambda column j, reopening happens lazily on
/// the next visit to i.
struct RegenState {
    Matrix lambda;
    Matrix sigma;
    CountMatrix gamma;
    ChainState chain;
    std::uint64_t accesses = 0;
    bool cap_reached = false;
    std::uint64_t seed = 0;
    std::uint64_t n = 0;

    explicit RegenState(std::size_t d) : lambda(d, d), sigma(d, d), gamma(d) {}
};

/// One transition of the estimator, with the uniform draw supplied by the
/// caller (the regular entry point below takes it from the chain's stream).
/// Sub-steps, in order: reopen row i of lambda; sample j; scale the whole
/// lambda matrix by A_ij/P_ij; bump gamma column j where lambda is nonzero;
/// accumulate lambda column j into sigma; zero lambda column j.
/// A weight of exactly zero therefore kills every open cycle before any of
/// them is counted.
inline std::size_t regen_step_with_draw(RegenState& st, const CountedMatrixOracle& oracle,
                                        const TransitionKernel& p, double u) {
    const std::size_t d = p.dim();
    const std::size_t i = st.chain.current;

    double* lambda_row = st.lambda.row_ptr(i);
    for (std::size_t k = 0; k < d; ++k)
        if (lambda_row[k] == 0.0) lambda_row[k] = 1.0;

    const std::size_t j = p.sample(i, u);
    st.chain.current = j;
    ++st.chain.steps;

    const double w = weight_ratio(oracle, p, i, j);
    ++st.accesses;
    st.lambda *= w; // full-matrix scale: the documented hot loop

    double* lam = st.lambda.data();
    for (std::size_t k = 0; k < d; ++k) {
        const double value = lam[k * d + j];
        if (value != 0.0) {
            ++st.gamma(k, j);
            st.sigma(k, j) += value;
            lam[k * d + j] = 0.0;
        }
    }
    return j;
}

inline std::size_t regen_step(RegenState& st, const CountedMatrixOracle& oracle,
                              const TransitionKernel& p) {
    return regen_step_with_draw(st, oracle, p, st.chain.rng.uniform01());
}

constexpr std::uint64_t kDefaultStepCap = 1'000'000'000ULL;

/// Run the estimator until every cycle count reaches `n`, or `cap` transitions
/// were taken (then `cap_reached` is set and the partial state returned).
/// The initial state is drawn uniformly from the stream; the termination scan
/// runs every d steps to amortize the O(d^2) min over gamma.
inline RegenState regen_run(const CountedMatrixOracle& oracle, const TransitionKernel& p,
                            std::uint64_t n, std::uint64_t cap, std::uint64_t seed,
                            std::uint64_t stream = 0) {
    const std::size_t d = p.dim();
    RegenState st(d);
    st.seed = seed;
    st.n = n;

    Xoshiro256 rng = Xoshiro256::split(seed, stream);
    st.chain = ChainState(static_cast<std::size_t>(rng.below(d)), rng);

    const std::uint64_t scan_stride = d;
    while (true) {
        if (st.chain.steps % scan_stride == 0 && st.gamma.min() >= n) break;
        if (st.chain.steps >= cap) {
            st.cap_reached = true;
            break;
        }
        regen_step(st, oracle, p);
    }
    return st;
}

/// Assembled estimate plus diagnostics. Flagged entries hold NaN and are
/// excluded from error metrics by the callers.
struct EstimateReport {
    Matrix c_hat;
    CountMatrix gamma;
    std::uint64_t steps = 0;    // K, total transitions
    std::uint64_t accesses = 0; // A-entry reads
    FlagMask flagged;
    bool cap_reached = false;
    std::uint64_t seed = 0;
    std::uint64_t n = 0;
};

/// Entry (i,j) of the estimate is the mean closed-cycle weight sigma/gamma
/// times the diagonal factor 1/(1 - sigma_jj/gamma_jj); the diagonal itself is
/// just that factor. An entry is flagged when its count is zero or when the
/// diagonal mean weight is so close to one that the geometric-series identity
/// behind the factor breaks down.
inline EstimateReport assemble_estimate(const RegenState& st) {
    const std::size_t d = st.lambda.rows();
    constexpr double kCollapseTol = 1e-9;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    EstimateReport report{Matrix(d, d), st.gamma, st.chain.steps, st.accesses,
                          FlagMask(d),  st.cap_reached, st.seed, st.n};

    for (std::size_t j = 0; j < d; ++j) {
        bool column_ok = st.gamma(j, j) > 0;
        double diag_factor = nan;
        if (column_ok) {
            const double ratio = st.sigma(j, j) / static_cast<double>(st.gamma(j, j));
            if (ratio >= 1.0 - kCollapseTol) {
                column_ok = false;
            } else {
                diag_factor = 1.0 / (1.0 - ratio);
            }
        }
        for (std::size_t i = 0; i < d; ++i) {
            if (!column_ok || st.gamma(i, j) == 0) {
                report.c_hat(i, j) = nan;
                report.flagged.set(i, j);
            } else if (i == j) {
                report.c_hat(j, j) = diag_factor;
            } else {
                report.c_hat(i, j) =
                    st.sigma(i, j) / static_cast<double>(st.gamma(i, j)) * diag_factor;
            }
        }
    }
    return report;
}

/// Second moment of the diagonal cycle-sum variable Z solving Z = 1 + alpha Z:
/// E[Z^2] = (1 + E[alpha]) / ((1 - E[alpha]) (1 - E[alpha^2])).
inline double second_moment_diag(double mean_alpha, double mean_alpha_sq) {
    if (!(mean_alpha < 1.0) || !(mean_alpha_sq < 1.0))
        throw std::domain_error("second_moment_diag: both means must lie below 1");
    return (1.0 + mean_alpha) / ((1.0 - mean_alpha) * (1.0 - mean_alpha_sq));
}

} // namespace ruvn
