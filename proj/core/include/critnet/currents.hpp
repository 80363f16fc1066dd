#pragma once

#include <map>
#include <utility>
#include <vector>

#include "critnet/net.hpp"

namespace critnet {

/// Directional edge currents c_v(x,y) = unit(x->y) . v. Antisymmetric in the
/// orientation; satisfies the current law at interior vertices of a critical
/// net.
struct CurrentProfile {
  Vector direction;                  // unit
  std::vector<double> edge_current;  // aligned with net.edges(), e[0] -> e[1]
  std::vector<int> leaves_zero;      // |current| <= 1e-12 on the leaf edge
  std::vector<int> leaves_outflow;   // current toward the leaf
  std::vector<int> leaves_inflow;    // current away from the leaf
  double c_in = 0.0;                 // half the total |current| over leaf edges

  double current(const Net& net, int x, int y) const;
};

CurrentProfile current_profile(const Net& net, const Vector& v);

/// Max over interior x of |sum over neighbors of c_v(x, y)|.
double kirchhoff_residual(const Net& net, const Vector& v);

struct CinConsistency {
  double outflow_sum;      // sum of currents toward leaves over outflow edges
  double inflow_sum_neg;   // minus the sum over inflow edges
  double c_in;
  double bound;            // |leaves| / 2
};

/// The three expressions that agree for a critical net, plus the leaf bound.
CinConsistency cin_consistency(const Net& net, const Vector& v);

struct Slab {
  double lo, hi;            // offsets along the direction (+-inf at the ends)
  double current;           // sum of upward currents over crossing edges
  double leaf_flux;         // signed sum over leaves above the slab midpoint
  bool lower_is_leaf;       // breakpoint group below contains a leaf projection
};

/// Piecewise-constant cut current against the hyperplane offset. Breakpoints
/// are vertex projections merged at 1e-9. The current changes only at leaf
/// projections and always matches the signed leaf flux of the upper
/// half-space.
struct CutScan {
  Vector direction;
  std::vector<double> breakpoints;
  std::vector<bool> breakpoint_has_leaf;
  std::vector<Slab> slabs;
  double c_in = 0.0;
  double max_interior_jump = 0.0;    // |current change| across interior breakpoints
  double max_flux_mismatch = 0.0;    // |current - leaf_flux| over slabs
  double max_over_cin = 0.0;         // max(|current| - c_in, 0)
};

CutScan cut_scan(const Net& net, const Vector& v);

struct OrientedPath {
  int length = 0;             // edge count
  std::vector<int> vertices;  // witness, ordered by increasing potential
};

/// Longest path in the pruned net (leaves removed) with edges oriented by
/// positive current; a DAG because the potential x.v strictly increases.
/// Throws GeometryError when an interior edge is perpendicular to v within
/// 1e-9.
OrientedPath longest_oriented_path(const Net& net, const Vector& v);

/// Retry wrapper: rotates v by 1e-4 radians in a seeded random plane, up to
/// `max_retries` times, when a perpendicular interior edge blocks the scan.
OrientedPath longest_oriented_path_perturbed(const Net& net, Vector v,
                                             std::uint64_t seed, int max_retries = 5,
                                             Vector* direction_used = nullptr);

/// Function on oriented edges, stored per ordered index pair (missing pairs
/// read as zero).
class EdgeFunction {
 public:
  static EdgeFunction from_current(const Net& net, const CurrentProfile& profile);
  /// Gradient of a vertex potential: g(x,y) = h(y) - h(x).
  static EdgeFunction gradient(const Net& net, const std::vector<double>& h);

  void set(int x, int y, double value) { vals_[{x, y}] = value; }
  /// Sets g(x,y) = value and g(y,x) = -value.
  void set_antisymmetric(int x, int y, double value) {
    vals_[{x, y}] = value;
    vals_[{y, x}] = -value;
  }
  double at(int x, int y) const;

 private:
  std::map<std::pair<int, int>, double> vals_;
};

/// Adjoint of the gradient: div g(x) = sum over neighbors y of
/// g(y,x) - g(x,y). Requires an antisymmetric input (checked, error
/// otherwise). Currents lie in its kernel on interior vertices.
std::vector<double> discrete_divergence(const Net& net, const EdgeFunction& g,
                                        double antisymmetry_tol = 1e-12);

struct PackedRect {
  int edge_index;
  double width;    // |current|
  double height;   // |potential difference|
  double pot_lo, pot_hi;
  double x_offset; // greedy presentational placement
};

/// Planar (k = 2) realization of the current as a packing of rectangles:
/// one rectangle per interior edge, area r_e c_v(e)^2, bounded by the
/// c_in x potential-spread box.
struct RectanglePacking {
  Vector direction;
  std::vector<PackedRect> rects;
  double c_in = 0.0;
  double spread = 0.0;     // potential extent of the interior vertices
  double area_sum = 0.0;
  double bound = 0.0;      // c_in * spread
};

RectanglePacking rectangle_packing(const Net& net, const Vector& v);

}  // namespace critnet
