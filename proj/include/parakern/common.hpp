#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace parakern {

// Spatial points and small matrices are fixed at capacity 3; the active
// dimension travels with the operator/domain that owns them.
using Vec = std::array<double, 3>;
using Mat = std::array<std::array<double, 3>, 3>;

inline Vec vec1(double x) { return {x, 0.0, 0.0}; }
inline Vec vec2(double x, double y) { return {x, y, 0.0}; }

inline double dot(const Vec& a, const Vec& b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double dist2(const Vec& a, const Vec& b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double norm(const Vec& a, int n) { return std::sqrt(dot(a, a, n)); }

struct Box {
  Vec lo{-1.0, -1.0, -1.0};
  Vec hi{1.0, 1.0, 1.0};
  int dim = 1;
};

// Error taxonomy. Everything derives from parakern::error so callers can
// catch the library as a whole.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct parameter_error : error {
  using error::error;
};
struct evaluation_error : error {
  using error::error;
};
struct integration_error : error {
  using error::error;
};
struct geometry_error : error {
  using error::error;
};
struct matrix_error : error {
  using error::error;
};
struct convergence_error : error {
  using error::error;
};
struct solver_error : error {
  using error::error;
};
struct state_error : error {
  using error::error;
};
struct parse_error : error {
  parse_error(const std::string& msg, std::size_t position)
      : error(msg + " (at position " + std::to_string(position) + ")"),
        pos(position) {}
  std::size_t pos;
};
struct usage_error : error {
  using error::error;
};

// Static-partition parallel map over [0, count). Results must be written by
// index so the outcome is deterministic for any thread count.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count < 16) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const int nt = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([=, &body]() {
      for (std::size_t i = t; i < count; i += nt) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace parakern
