#pragma once

// Reproducible random substreams and a deterministic parallel-for.
//
// A stream is a xoshiro256++ generator whose state is expanded by SplitMix64
// from (seed, stream_index). Work is always indexed by sample position, so
// output never depends on how many workers ran it.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <limits>
#include <random>
#include <thread>
#include <vector>

namespace riesz {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_index)
      : seed_(seed), stream_index_(stream_index) {
    std::uint64_t mix = seed;
    const std::uint64_t a = splitmix64(mix);
    std::uint64_t sm = a ^ (stream_index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL);
    splitmix64(sm);
    for (auto& w : s_) w = splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double normal() { return normal_(*this); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::uint64_t s_[4];
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline unsigned default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

// Calls fn(i) for i in [begin, end) over `workers` threads in contiguous
// chunks. fn must only write state owned by index i.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, unsigned workers, Fn&& fn) {
  const std::size_t n = end > begin ? end - begin : 0;
  const std::size_t w = std::min<std::size_t>(std::max(1u, workers), n);
  if (w <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(w);
  const std::size_t chunk = (n + w - 1) / w;
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t lo = begin + t * chunk;
    const std::size_t hi = std::min(end, lo + chunk);
    threads.emplace_back([&, t, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Pairwise summation; the result depends only on the order of values.
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += v[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace riesz
