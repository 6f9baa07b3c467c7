#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace relgeo {

// Runs fn(begin..end) over disjoint chunks on up to hardware_concurrency
// threads. Callers keep determinism by writing into per-index slots or by
// reducing per-chunk results in index order.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t workers = std::max<std::size_t>(1, hw);
  if (n < 2 * workers) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& t : pool) t.join();
}

// Deterministic uniform draw in [0, n); avoids std::uniform_int_distribution,
// whose output is implementation defined.
template <class Rng>
std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n <= 1) return 0;
  using U = decltype(rng());
  U range = static_cast<U>(n);
  U limit = static_cast<U>(rng.max() - rng.max() % range);
  U x;
  do { x = rng(); } while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

template <class Rng, class T>
void seeded_shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = uniform_index(rng, i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace relgeo
