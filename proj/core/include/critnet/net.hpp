#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "critnet/common.hpp"

namespace critnet {

/// Directed edge geometry: unit vector from x to y and the segment length.
/// The reverse unit vector is the exact negation.
struct EdgeVector {
  int x = -1;
  int y = -1;
  Vector unit;    // (pos(y) - pos(x)) / length
  double length = 0.0;
};

struct VertexSpec {
  std::string id;
  Vector pos;
  std::optional<bool> leaf;  // derived from degree == 1 when absent
};

/// Finite embedded graph in R^k. Vertices carry a leaf flag; leaves have
/// degree exactly 1 and are the pinned boundary of the net. Immutable after
/// construction: all queries are const and safe to share across threads.
class Net {
 public:
  /// Empty placeholder; use build() to construct a real net.
  Net() = default;

  static Net build(int dimension, std::vector<VertexSpec> vertices,
                   const std::vector<std::pair<std::string, std::string>>& edges,
                   std::optional<Vector> center = std::nullopt);

  int dimension() const { return dim_; }
  int vertex_count() const { return static_cast<int>(pos_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::string& id(int v) const { return ids_[v]; }
  int index(const std::string& id) const;
  const Vector& position(int v) const { return pos_[v]; }
  bool is_leaf(int v) const { return leaf_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  std::span<const int> neighbors(int v) const { return adj_[v]; }

  /// Edges as index pairs with a < b, in a canonical order.
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }

  const std::vector<int>& leaves() const { return leaves_; }
  const std::vector<int>& interior() const { return interior_; }
  int leaf_count() const { return static_cast<int>(leaves_.size()); }
  int interior_count() const { return static_cast<int>(interior_.size()); }

  /// Reference point for centered deformations and density profiles
  /// (defaults to the origin).
  const Vector& center() const { return center_; }

  EdgeVector edge_vector(int x, int y) const;
  double edge_length(int x, int y) const;

  /// The unique neighbor of a leaf.
  int leaf_neighbor(int leaf) const;
  /// Unit vector along the leaf edge, pointing at the leaf.
  Vector leaf_vector(int leaf) const;
  /// True if both endpoints are interior vertices.
  bool is_interior_edge(int x, int y) const { return !leaf_[x] && !leaf_[y]; }

  /// Sum of |edge| over all edges.
  double total_length() const;
  /// Sum of |edge| over edges with both endpoints interior; 0 if none.
  double total_interior_length() const;

  /// Same topology and flags, new positions (used by the relaxation solver).
  Net with_positions(std::vector<Vector> positions) const;
  /// Same net with a different center point.
  Net with_center(Vector center) const;

  /// Vertex indices sorted by id (deterministic sweep order).
  const std::vector<int>& order_by_id() const { return order_by_id_; }

 private:
  void index_structure();

  int dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<Vector> pos_;
  std::vector<bool> leaf_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::vector<int>> adj_;
  std::unordered_map<std::string, int> by_id_;
  std::vector<int> leaves_;
  std::vector<int> interior_;
  std::vector<int> order_by_id_;
  Vector center_;
};

/// Restriction domain. Inside predicates:
///   half-space: x . normal > offset
///   ball:       |x - center| < radius
///   whole-minus-leaves: every interior vertex (anchors land on the leaves)
class Domain {
 public:
  enum class Kind { HalfSpace, Ball, WholeMinusLeaves };

  static Domain half_space(Vector normal, double offset);
  static Domain ball(Vector center, double radius);
  static Domain whole_minus_leaves();

  Kind kind() const { return kind_; }
  const Vector& normal() const { return vec_; }
  double offset() const { return scalar_; }
  const Vector& ball_center() const { return vec_; }
  double radius() const { return scalar_; }

  /// Signed clearance of a point from the boundary (> 0 inside). For
  /// WholeMinusLeaves every point is inside.
  double signed_inside(const Vector& p) const;
  bool contains_point(const Vector& p) const { return signed_inside(p) > 0.0; }
  bool contains_vertex(const Net& net, int v) const;

 private:
  Kind kind_ = Kind::WholeMinusLeaves;
  Vector vec_;
  double scalar_ = 0.0;
};

/// One anchor created by a restriction: the cut point on the originating
/// edge (inside endpoint first).
struct Anchor {
  std::string id;
  std::string edge_inside;   // id of the endpoint kept inside
  std::string edge_outside;  // id of the discarded endpoint (or original leaf)
  Vector position;
};

struct Restriction {
  Net net;
  std::vector<Anchor> anchors;
};

/// Restriction of a net to a domain: interior vertices inside the domain are
/// kept, every edge-boundary crossing becomes a fresh leaf (an anchor), and
/// edges fully outside are discarded. The boundary must keep a clearance of
/// kBoundaryClearance from every vertex.
Restriction restrict_net(const Net& net, const Domain& domain);

struct EnclosingBall {
  Vector center;
  double radius = 0.0;
};

/// Smallest ball containing all the points. Exact combinatorial solver for
/// k <= 3, iterative refinement to 1e-9 relative accuracy above.
EnclosingBall minimal_enclosing_ball(const std::vector<Vector>& points, int dimension);

/// Outer radius: smallest ball containing all interior vertices. Errors if
/// the net has no interior vertex. When `center` is given, returns the max
/// distance from that center instead.
EnclosingBall outer_ball(const Net& net, std::optional<Vector> center = std::nullopt);

}  // namespace critnet
