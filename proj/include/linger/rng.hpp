#pragma once

#include <cstddef>
#include <cstdint>

namespace linger {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so skipping a draw never shifts later ones.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
        return mix(seed_ ^ mix(stream + 0x632be59bd9b4e019ULL * mix(counter)));
    }

    // Uniform integer in [0, bound).
    std::size_t below(std::uint64_t stream, std::uint64_t counter, std::size_t bound) const {
        unsigned __int128 prod = static_cast<unsigned __int128>(bits(stream, counter)) * bound;
        return static_cast<std::size_t>(prod >> 64);
    }

    // Uniform double in [0, 1).
    double uniform(std::uint64_t stream, std::uint64_t counter) const {
        return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
};

// Stream ids for independent uses of one seed.
inline std::uint64_t stream_id(std::uint64_t tag, std::uint64_t epoch) {
    return (tag << 48) ^ epoch;
}

}  // namespace linger
