#pragma once

#include <cstddef>
#include <cstdint>

namespace linger {

// Counts (gradient, radius) oracle evaluations. One pass = n evaluations.
class GradMeter {
public:
    explicit GradMeter(std::size_t n) : n_(n) {}

    void bill(std::uint64_t units = 1) { calls_ += units; }
    std::uint64_t calls() const { return calls_; }
    std::size_t n() const { return n_; }
    double passes() const { return static_cast<double>(calls_) / static_cast<double>(n_); }

private:
    std::size_t n_;
    std::uint64_t calls_ = 0;
};

}  // namespace linger
