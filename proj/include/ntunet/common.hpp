#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

namespace ntunet {

inline const char* version() { return "0.1.0"; }

// ---------------------------------------------------------------------------
// Seeded substreams.
//
// All randomness in the library flows through mt19937_64 generators keyed by
// SplitMix64-mixed combinations of (seed, tags...).  Keying by logical
// coordinates (node index, pair indices, stream tag) makes draws independent
// of iteration order, so parallel generation is reproducible.
// ---------------------------------------------------------------------------

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t key_combine(std::uint64_t key, std::uint64_t value) {
  return mix64(key ^ (mix64(value) + 0x9e3779b97f4a7c15ULL + (key << 6) + (key >> 2)));
}

inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t a) {
  return key_combine(mix64(seed), a);
}
inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return key_combine(substream_key(seed, a), b);
}
inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                   std::uint64_t c) {
  return key_combine(substream_key(seed, a, b), c);
}

inline std::mt19937_64 make_rng(std::uint64_t key) { return std::mt19937_64(key); }

/// Uniform double in [0,1) with 53 random bits; avoids the
/// implementation-defined behavior of std::uniform_real_distribution.
inline double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in {0,...,k-1}.
inline int uniform_int(std::mt19937_64& rng, int k) {
  int v = static_cast<int>(u01(rng) * k);
  return v < k ? v : k - 1;
}

// ---------------------------------------------------------------------------
// Compensated summation (Neumaier variant).
// ---------------------------------------------------------------------------

class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// ---------------------------------------------------------------------------
// Minimal deterministic thread pool helper.
// ---------------------------------------------------------------------------

unsigned effective_threads(unsigned requested);

/// Splits [0,count) into contiguous chunks and runs `chunk_fn(begin,end)`
/// on up to `threads` worker threads.  Chunk boundaries depend only on
/// (count, threads), never on scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn);

}  // namespace ntunet
