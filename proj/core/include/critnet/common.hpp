#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace critnet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Edges shorter than this are rejected at construction; unit vectors are
/// undefined below it.
inline constexpr double kMinEdgeLength = 1e-12;

/// Clearance required between a restriction/cut boundary and any vertex.
inline constexpr double kBoundaryClearance = 1e-9;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid input data: bad ids, malformed files, violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Geometric degeneracy: boundary through a vertex, perpendicular edge,
/// tangency, failed constructive placement.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Formats a double with 17 significant digits (exact round-trip).
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Deterministic seeded random source. Uses a fixed 64-bit generator and
/// derives doubles directly from the bit stream, so a given seed produces
/// the same values on every run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double gaussian();

  /// Uniformly distributed unit vector in R^k.
  Vector unit_vector(int k);

  /// Random orthonormal basis of R^k (Gram-Schmidt on gaussian vectors).
  std::vector<Vector> orthonormal_basis(int k);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace critnet
