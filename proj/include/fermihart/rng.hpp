#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace fermihart {

/// SplitMix64; used for seed derivation and portable bounded draws.
class SplitMix64
{
  public:
    explicit SplitMix64(std::uint64_t seed)
        : state_(seed)
    {
    }

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound) by rejection; bound > 0.
    std::uint64_t bounded(std::uint64_t bound)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return r % bound;
    }

  private:
    std::uint64_t state_;
};

/// Independent Gaussian streams keyed by (iteration, sample index) under one master seed.
///
/// Each (t, j) pair gets its own engine, so a batch can be generated in any
/// order or concurrently and still reproduce the same vectors.
class Substreams
{
  public:
    explicit Substreams(std::uint64_t master_seed)
        : master_(master_seed)
    {
    }

    std::uint64_t master_seed() const noexcept
    {
        return master_;
    }

    std::uint64_t derive(std::uint64_t t, std::uint64_t j) const
    {
        SplitMix64 mix(master_ ^ 0x5851f42d4c957f2dULL);
        std::uint64_t h = mix.next();
        SplitMix64 a(h ^ (t * 0xd1342543de82ef95ULL));
        h = a.next();
        SplitMix64 b(h ^ (j * 0x2545f4914f6cdd1dULL + 0x632be59bd9b4e019ULL));
        return b.next();
    }

    std::vector<double> gaussian(std::uint64_t t, std::uint64_t j, std::size_t n) const
    {
        std::mt19937_64 engine(derive(t, j));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> z(n);
        for (auto& x : z) {
            x = normal(engine);
        }
        return z;
    }

  private:
    std::uint64_t master_;
};

} // namespace fermihart
