#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ruvn {

/// d x d mask of entries excluded from error metrics (numerically unstable or
/// never observed). Kept alongside estimates rather than poisoning them.
class FlagMask {
public:
    FlagMask() = default;
    explicit FlagMask(std::size_t d) : d_(d), bits_(d * d, 0) {}

    std::size_t dim() const { return d_; }
    bool test(std::size_t i, std::size_t j) const { return bits_[i * d_ + j] != 0; }

    void set(std::size_t i, std::size_t j) {
        auto& b = bits_[i * d_ + j];
        if (!b) {
            b = 1;
            ++count_;
        }
    }

    std::size_t count() const { return count_; }
    bool any() const { return count_ > 0; }

private:
    std::size_t d_ = 0;
    std::vector<std::uint8_t> bits_;
    std::size_t count_ = 0;
};

} // namespace ruvn
