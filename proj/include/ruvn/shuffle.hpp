#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ruvn/counts.hpp"
#include "ruvn/rng.hpp"
#include "ruvn/transition.hpp"

namespace ruvn {

/// d x d 0/1 matrix. After the warm-up phase of the gamma-only runner it is a
/// recency-dominance matrix: diagonal all ones and exactly one of (i,j),(j,i)
/// set for every pair.
class BinaryMatrix {
public:
    BinaryMatrix() = default;
    explicit BinaryMatrix(std::size_t d) : d_(d), bits_(d * d, 0) {}

    std::size_t dim() const { return d_; }
    std::uint8_t operator()(std::size_t i, std::size_t j) const { return bits_[i * d_ + j]; }
    std::uint8_t& operator()(std::size_t i, std::size_t j) { return bits_[i * d_ + j]; }

    bool postwarmup_invariants_hold() const {
        for (std::size_t i = 0; i < d_; ++i) {
            if ((*this)(i, i) != 1) return false;
            for (std::size_t j = i + 1; j < d_; ++j)
                if ((*this)(i, j) + (*this)(j, i) != 1) return false;
        }
        return true;
    }

    friend bool operator==(const BinaryMatrix& a, const BinaryMatrix& b) {
        return a.d_ == b.d_ && a.bits_ == b.bits_;
    }
    friend bool operator<(const BinaryMatrix& a, const BinaryMatrix& b) {
        return a.bits_ < b.bits_;
    }

    /// Lower-triangular all-ones matrix, the image of the identity recency order.
    static BinaryMatrix lower_triangular_ones(std::size_t d) {
        BinaryMatrix m(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j <= i; ++j) m(i, j) = 1;
        return m;
    }

private:
    std::size_t d_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// The single-visit update: row j becomes all ones, column j is cleared off
/// the diagonal, everything else is untouched. Idempotent in j.
inline BinaryMatrix mark_most_recent(BinaryMatrix pi, std::size_t j) {
    const std::size_t d = pi.dim();
    if (j >= d) throw std::out_of_range("mark_most_recent: index out of range");
    for (std::size_t v = 0; v < d; ++v) pi(j, v) = 1;
    for (std::size_t u = 0; u < d; ++u)
        if (u != j) pi(u, j) = 0;
    return pi;
}

/// Recency order over [0..d): order()[0] is the most recently visited state.
/// Stepping the chain is move-to-front on this order.
class Permutation {
public:
    explicit Permutation(std::vector<std::size_t> most_recent_first)
        : order_(std::move(most_recent_first)) {
        std::vector<std::size_t> sorted = order_;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 0; k < sorted.size(); ++k)
            if (sorted[k] != k) throw std::invalid_argument("not a permutation of [0..d)");
    }

    static Permutation identity(std::size_t d) {
        std::vector<std::size_t> order(d);
        std::iota(order.begin(), order.end(), std::size_t{0});
        return Permutation(std::move(order));
    }

    std::size_t size() const { return order_.size(); }
    const std::vector<std::size_t>& order() const { return order_; }

    friend bool operator==(const Permutation& a, const Permutation& b) {
        return a.order_ == b.order_;
    }

private:
    std::vector<std::size_t> order_;
};

inline Permutation move_to_front(const Permutation& sigma, std::size_t j) {
    if (j >= sigma.size()) throw std::out_of_range("move_to_front: index out of range");
    std::vector<std::size_t> order;
    order.reserve(sigma.size());
    order.push_back(j);
    for (std::size_t s : sigma.order())
        if (s != j) order.push_back(s);
    return Permutation(std::move(order));
}

/// The bijection between recency orders and post-warm-up matrices:
/// entry (u,v) is set iff u == v or u is more recent than v.
inline BinaryMatrix dominance_matrix(const Permutation& sigma) {
    const std::size_t d = sigma.size();
    std::vector<std::size_t> pos(d);
    for (std::size_t k = 0; k < d; ++k) pos[sigma.order()[k]] = k;
    BinaryMatrix pi(d);
    for (std::size_t u = 0; u < d; ++u)
        for (std::size_t v = 0; v < d; ++v) pi(u, v) = (u == v || pos[u] < pos[v]) ? 1 : 0;
    return pi;
}

/// True once every state has driven an update at least once.
inline bool warmup_complete(const std::vector<bool>& visited) {
    return std::all_of(visited.begin(), visited.end(), [](bool b) { return b; });
}

struct GammaRun {
    CountMatrix gamma;
    std::uint64_t steps = 0;
    bool cap_reached = false;
};

/// Cycle-count-only runner. Tracks the 0/1 open-cycle pattern instead of
/// weights; per step: set row i, sample j, add column j of the pattern into
/// gamma, clear column j. Stream consumption (one init draw, one uniform per
/// step) and the termination scan match the weighted runner exactly, so the
/// two produce identical gamma matrices on a shared stream whenever no weight
/// is exactly zero.
inline GammaRun run_gamma(const TransitionKernel& p, std::uint64_t n, std::uint64_t seed,
                          std::uint64_t cap = 1'000'000'000ULL, std::uint64_t stream = 0) {
    const std::size_t d = p.dim();
    GammaRun out{CountMatrix(d), 0, false};
    BinaryMatrix pi(d);

    Xoshiro256 rng = Xoshiro256::split(seed, stream);
    std::size_t i = static_cast<std::size_t>(rng.below(d));

    const std::uint64_t scan_stride = d;
    while (true) {
        if (out.steps % scan_stride == 0 && out.gamma.min() >= n) break;
        if (out.steps >= cap) {
            out.cap_reached = true;
            break;
        }
        for (std::size_t k = 0; k < d; ++k) pi(i, k) = 1;
        const std::size_t j = p.sample(i, rng.uniform01());
        ++out.steps;
        for (std::size_t k = 0; k < d; ++k) {
            out.gamma(k, j) += pi(k, j);
            pi(k, j) = 0;
        }
        i = j;
    }
    return out;
}

} // namespace ruvn
