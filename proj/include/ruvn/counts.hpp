#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ruvn {

/// d x d matrix of nondecreasing counters (cycle counts).
class CountMatrix {
public:
    CountMatrix() = default;
    explicit CountMatrix(std::size_t d) : d_(d), counts_(d * d, 0) {}

    std::size_t dim() const { return d_; }
    std::uint64_t operator()(std::size_t i, std::size_t j) const { return counts_[i * d_ + j]; }
    std::uint64_t& operator()(std::size_t i, std::size_t j) { return counts_[i * d_ + j]; }

    std::uint64_t min() const {
        std::uint64_t m = UINT64_MAX;
        for (std::uint64_t c : counts_) m = c < m ? c : m;
        return counts_.empty() ? 0 : m;
    }

    friend bool operator==(const CountMatrix& a, const CountMatrix& b) {
        return a.d_ == b.d_ && a.counts_ == b.counts_;
    }

private:
    std::size_t d_ = 0;
    std::vector<std::uint64_t> counts_;
};

} // namespace ruvn
