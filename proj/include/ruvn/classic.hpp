#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ruvn/engine.hpp"
#include "ruvn/flags.hpp"
#include "ruvn/matrix.hpp"

namespace ruvn {

/// Truncated weighted-walk baseline: R independent replications of fixed
/// length r_k per starting row. Biased by construction (the truncation is the
/// point of the baseline).
struct ClassicConfig {
    std::uint64_t replications = 1; // R
    std::uint64_t truncation = 0;   // r_k, transitions per replication
    std::uint64_t seed = 0;
};

struct ClassicRowEstimate {
    std::vector<double> values;
    bool overflow = false;
};

/// Row i of the estimate: mean over R replications of
/// sum_{k=0..r_k} W_k 1[X(k)=j], each replication started at i with W_0 = 1.
/// Consumes exactly R * r_k transitions and R * r_k entry accesses.
/// Replication r of row i owns RNG stream i*R + r.
inline ClassicRowEstimate classic_estimate_row(const CountedMatrixOracle& oracle,
                                               const TransitionKernel& p, std::size_t i,
                                               const ClassicConfig& cfg) {
    const std::size_t d = p.dim();
    ClassicRowEstimate out;
    out.values.assign(d, 0.0);

    for (std::uint64_t r = 0; r < cfg.replications; ++r) {
        const std::uint64_t stream = static_cast<std::uint64_t>(i) * cfg.replications + r;
        ChainState chain(i, Xoshiro256::split(cfg.seed, stream));
        double weight = 1.0;
        out.values[i] += 1.0; // k = 0 term: W_0 * 1[X(0)=i]
        bool dead = false;
        for (std::uint64_t k = 0; k < cfg.truncation; ++k) {
            const std::size_t prev = chain.current;
            const std::size_t next = step(chain, p);
            weight *= weight_ratio(oracle, p, prev, next);
            if (!dead && !std::isfinite(weight)) {
                out.overflow = true;
                dead = true; // keep stepping so the access count stays exact
            }
            if (!dead) out.values[next] += weight;
        }
    }
    const double inv_r = 1.0 / static_cast<double>(cfg.replications);
    for (double& v : out.values) v *= inv_r;
    return out;
}

struct ClassicReport {
    Matrix c_hat;
    FlagMask flagged; // whole rows whose weight overflowed
    std::uint64_t accesses = 0;
};

/// Full-matrix estimate: one batch of replications per starting row.
/// Total accesses = d * R * r_k exactly.
inline ClassicReport classic_estimate_matrix(const CountedMatrixOracle& oracle,
                                             const TransitionKernel& p,
                                             const ClassicConfig& cfg) {
    const std::size_t d = p.dim();
    ClassicReport report{Matrix(d, d), FlagMask(d), 0};
    const std::uint64_t before = oracle.accesses();
    for (std::size_t i = 0; i < d; ++i) {
        ClassicRowEstimate row = classic_estimate_row(oracle, p, i, cfg);
        for (std::size_t j = 0; j < d; ++j) report.c_hat(i, j) = row.values[j];
        if (row.overflow)
            for (std::size_t j = 0; j < d; ++j) report.flagged.set(i, j);
    }
    report.accesses = oracle.accesses() - before;
    return report;
}

} // namespace ruvn
