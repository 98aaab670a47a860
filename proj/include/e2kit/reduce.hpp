#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

// Deterministic summation helpers.  All bulk sums in this project go through
// deterministic_reduce: the index range is cut into fixed-size chunks
// (independent of the worker count), each chunk is reduced with compensated
// accumulation, and the per-chunk results are folded by a fixed-shape pairwise
// tree in chunk order.  The result is therefore bit-identical for any number
// of workers.

namespace e2kit {

// Neumaier variant of Kahan summation.
struct Kahan {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Worker count: explicit argument wins, then E2KIT_WORKERS, then the number
// of logical CPUs.
int resolve_workers(int requested);

inline constexpr std::int64_t kDefaultChunk = 1024;

namespace detail {

template <class T, class Combine>
T pairwise_fold(std::vector<T>&& v, T identity, Combine combine) {
  if (v.empty()) return identity;
  while (v.size() > 1) {
    std::size_t out = 0;
    for (std::size_t i = 0; i + 1 < v.size(); i += 2)
      v[out++] = combine(v[i], v[i + 1]);
    if (v.size() % 2 == 1) v[out++] = v.back();
    v.resize(out);
  }
  return v[0];
}

}  // namespace detail

// fn(chunk_lo, chunk_hi) -> T reduces one chunk [chunk_lo, chunk_hi).
template <class T, class ChunkFn, class Combine>
T deterministic_reduce(std::int64_t lo, std::int64_t hi, int workers, T identity,
                       ChunkFn fn, Combine combine,
                       std::int64_t chunk = kDefaultChunk) {
  if (hi <= lo) return identity;
  const std::int64_t n_chunks = (hi - lo + chunk - 1) / chunk;
  std::vector<T> results(static_cast<std::size_t>(n_chunks), identity);

  workers = resolve_workers(workers);
  std::atomic<std::int64_t> next{0};
  auto work = [&] {
    for (;;) {
      std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) break;
      std::int64_t clo = lo + c * chunk;
      std::int64_t chi = std::min(hi, clo + chunk);
      results[static_cast<std::size_t>(c)] = fn(clo, chi);
    }
  };

  if (workers <= 1 || n_chunks == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    int spawn = static_cast<int>(std::min<std::int64_t>(workers, n_chunks)) - 1;
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int i = 0; i < spawn; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
  }
  return detail::pairwise_fold(std::move(results), identity, combine);
}

// Common case: a chunk reduces to a K-vector of doubles, combined by
// component-wise addition.
template <std::size_t K, class ChunkFn>
std::array<double, K> deterministic_sum_vec(std::int64_t lo, std::int64_t hi,
                                            int workers, ChunkFn fn,
                                            std::int64_t chunk = kDefaultChunk) {
  std::array<double, K> id{};
  return deterministic_reduce(
      lo, hi, workers, id, fn,
      [](const std::array<double, K>& a, const std::array<double, K>& b) {
        std::array<double, K> r;
        for (std::size_t i = 0; i < K; ++i) r[i] = a[i] + b[i];
        return r;
      },
      chunk);
}

template <class ChunkFn>
double deterministic_sum(std::int64_t lo, std::int64_t hi, int workers,
                         ChunkFn fn, std::int64_t chunk = kDefaultChunk) {
  return deterministic_reduce(
      lo, hi, workers, 0.0, fn, [](double a, double b) { return a + b; }, chunk);
}

// Seeded generator with explicit output mappings, so that identical seeds give
// identical streams on every platform (std::mt19937_64 output is standardized;
// the standard distributions are not, hence the hand-rolled mappings).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // splitmix64 warm-up so that small seeds do not start in a low-entropy state
    for (int i = 0; i < 4; ++i) next_u64();
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1) with 53 random bits
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // uniform integer in [lo, hi], inclusive; unbiased by rejection
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());  // full range
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
  }

 private:
  std::uint64_t state_;
};

}  // namespace e2kit
