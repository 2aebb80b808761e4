#pragma once

#include <cstddef>
#include <cstdint>

#include "ruvn/errors.hpp"
#include "ruvn/matrix.hpp"
#include "ruvn/rng.hpp"
#include "ruvn/transition.hpp"

namespace ruvn {

/// Walker state: current row index, transition count, and the owning RNG
/// stream. Exactly one uniform draw is consumed per transition (inverse CDF,
/// never rejection), so two runs sharing a stream stay in lockstep.
struct ChainState {
    std::size_t current = 0;
    std::uint64_t steps = 0;
    Xoshiro256 rng;

    ChainState() = default;
    ChainState(std::size_t start, Xoshiro256 generator) : current(start), rng(generator) {}
};

inline std::size_t step(ChainState& s, const TransitionKernel& p) {
    s.current = p.sample(s.current, s.rng.uniform01());
    ++s.steps;
    return s.current;
}

/// Wraps the source matrix behind an access counter so experiments can report
/// error per entry read. The count is exact: one increment per entry().
class CountedMatrixOracle {
public:
    explicit CountedMatrixOracle(const Matrix& source) : source_(&source) {}

    double entry(std::size_t i, std::size_t j) const {
        ++accesses_;
        return (*source_)(i, j);
    }

    std::uint64_t accesses() const { return accesses_; }
    void reset() { accesses_ = 0; }
    std::size_t dim() const { return source_->rows(); }
    const Matrix& source() const { return *source_; }

private:
    const Matrix* source_;
    mutable std::uint64_t accesses_ = 0;
};

/// Single-step weight factor A_ij / P_ij. Counts one A access.
inline double weight_ratio(const CountedMatrixOracle& oracle, const TransitionKernel& p,
                           std::size_t i, std::size_t j) {
    const double prob = p(i, j);
    if (prob == 0.0)
        throw ZeroProbabilityError("transition " + std::to_string(i) + " -> " +
                                   std::to_string(j) + " has probability zero");
    return oracle.entry(i, j) / prob;
}

} // namespace ruvn
