#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "critnet/net.hpp"

namespace critnet {

/// Per-vertex force balance. residual(x) = sum over neighbors y of
/// (x - y)/|x - y|, which is the gradient of total length in x. Leaves are
/// pinned and carry no residual.
struct ResidualReport {
  std::vector<double> norms;  // aligned with net.interior()
  double max_norm = 0.0;
  int worst_vertex = -1;  // vertex index into the net, -1 if no interior
};

Vector vertex_residual(const Net& net, int v);
ResidualReport residual_report(const Net& net);

/// True iff the max interior residual norm is <= tol.
bool is_critical(const Net& net, double tol, ResidualReport* report = nullptr);

/// Displacement fields used in first-variation evaluations. All kinds vanish
/// on leaves and outside the support domain.
class Deformation {
 public:
  enum class Kind { Scaling, Dilation, Swelling, Chopping, Translation, Rotation, Custom };

  /// d(x) = x - center
  static Deformation scaling(Vector center);
  /// d(x) = (e . (x - center)) e
  static Deformation dilation(Vector e, Vector center);
  /// d(x) = (x - center)/|x - center|, zero at the center. Requires no other
  /// vertex within kBoundaryClearance of the center.
  static Deformation swelling(Vector center);
  /// d(x) = v on the half-space x.v > offset, zero elsewhere (v normalized).
  static Deformation chopping(Vector v, double offset);
  /// d(x) = e
  static Deformation translation(Vector e);
  /// d(x) = A (x - center) with A antisymmetric.
  static Deformation rotation(Matrix generator, Vector center);
  /// k = 3 convenience: A z = axis x z.
  static Deformation rotation_axis(const Vector& axis, Vector center);
  /// Explicit per-vertex displacements (zero for ids not present).
  static Deformation custom(std::unordered_map<std::string, Vector> displacement);

  Deformation restricted_to(Domain support) const;

  Kind kind() const { return kind_; }
  const Domain& support() const { return support_; }

  /// Displacement at a vertex (zero on leaves / outside support).
  Vector displacement(const Net& net, int v) const;

  /// Checks finiteness and the swelling clearance precondition on this net.
  void validate(const Net& net) const;

 private:
  Kind kind_ = Kind::Translation;
  Vector vec_;       // center / direction, kind-dependent
  Vector aux_;       // dilation direction
  double scalar_ = 0.0;
  Matrix generator_;
  std::unordered_map<std::string, Vector> table_;
  Domain support_ = Domain::whole_minus_leaves();
};

/// First variation of total length under the deformation: the sum over edges
/// meeting the support of (x-y)/|x-y| . (d(x)-d(y)). Zero (to rounding) for
/// critical nets and leaf-fixing deformations.
double first_variation(const Net& net, const Deformation& deformation);

/// Same sum restricted to edges with both endpoints inside the domain.
double variation_within(const Net& net, const Deformation& deformation,
                        const Domain& domain);

/// Anchor flux: sum over boundary-crossing edges of the outward unit vector
/// at the inside endpoint dotted with its displacement. For a critical net
/// this equals variation_within on the same domain.
double anchor_side(const Net& net, const Deformation& deformation, const Domain& domain);

struct SolverParams {
  double tolerance = 1e-10;
  int max_sweeps = 10000;
  double damping = 1.0;              // applied when a step would increase length
  double collapse_threshold = 1e-8;  // adjacent vertices closer than this abort
  std::uint64_t seed = 0;

  void validate() const;
};

enum class RelaxStatus { Converged, MaxSweeps, EdgeCollapse };

struct TraceRow {
  int sweep;
  double total_length;
  double max_residual;
};

struct RelaxResult {
  Net net;
  RelaxStatus status = RelaxStatus::Converged;
  int sweeps = 0;
  double final_residual = 0.0;
  std::vector<TraceRow> trace;
  std::string collapsed_a, collapsed_b;  // set on EdgeCollapse
};

/// Gauss-Seidel relaxation: each interior vertex moves to the reciprocal-
/// distance-weighted average of its neighbors (vertices swept in ascending id
/// order, leaves pinned). Total length is non-increasing; stops when the max
/// interior residual drops below params.tolerance. Requires at least two
/// leaves in every connected component.
RelaxResult relax(const Net& initial, const SolverParams& params = {});

}  // namespace critnet
