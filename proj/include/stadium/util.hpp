#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace stadium {

// splitmix64; used as a stateless counter-based generator so that sampling
// stays deterministic for a fixed seed regardless of thread count.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t mix(uint64_t seed, uint64_t a, uint64_t b) {
  return splitmix64(seed ^ splitmix64(a ^ splitmix64(b + 0x12fad5c9ULL)));
}

// Uniform in [0, 1).
inline double mix_unit(uint64_t seed, uint64_t a, uint64_t b) {
  return static_cast<double>(mix(seed, a, b) >> 11) * 0x1.0p-53;
}

// Shortest-round-trip decimal formatting, frozen for byte-identical outputs.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Runs fn(chunk) for chunk = 0..n_chunks-1 on up to `threads` workers.
// Callers must write results into per-chunk slots and merge afterwards in
// chunk order so the outcome is independent of scheduling.
template <class Fn>
void parallel_chunks(size_t n_chunks, int threads, Fn&& fn) {
  if (threads <= 1 || n_chunks <= 1) {
    for (size_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::vector<std::thread> pool;
  const size_t workers = std::min<size_t>(static_cast<size_t>(threads), n_chunks);
  std::atomic<size_t> next{0};
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const size_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        fn(c);
      }
    });
  }
  for (auto& th : pool) th.join();
}

inline int default_threads() {
  if (const char* env = std::getenv("STADIUM_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace stadium
