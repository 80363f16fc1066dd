#include "critnet/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace critnet {

namespace {

std::string edge_label(const Net& net, int a, int b) {
  return "{" + net.id(a) + "," + net.id(b) + "}";
}

}  // namespace

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Vector Rng::unit_vector(int k) {
  Vector v(k);
  double n = 0.0;
  do {
    for (int i = 0; i < k; ++i) v[i] = gaussian();
    n = v.norm();
  } while (n < 1e-12);
  return v / n;
}

std::vector<Vector> Rng::orthonormal_basis(int k) {
  std::vector<Vector> basis;
  basis.reserve(k);
  while (static_cast<int>(basis.size()) < k) {
    Vector v(k);
    for (int i = 0; i < k; ++i) v[i] = gaussian();
    for (const Vector& b : basis) v -= b.dot(v) * b;
    const double n = v.norm();
    if (n < 1e-8) continue;  // rare degenerate draw; redraw
    basis.push_back(v / n);
  }
  return basis;
}

Net Net::build(int dimension, std::vector<VertexSpec> vertices,
               const std::vector<std::pair<std::string, std::string>>& edges,
               std::optional<Vector> center) {
  if (dimension < 1) throw ValidationError("dimension must be >= 1");
  if (vertices.empty()) throw ValidationError("net needs at least one vertex");

  Net net;
  net.dim_ = dimension;
  net.ids_.reserve(vertices.size());
  net.pos_.reserve(vertices.size());
  for (auto& v : vertices) {
    if (v.pos.size() != dimension)
      throw ValidationError("vertex '" + v.id + "' has position of dimension " +
                            std::to_string(v.pos.size()) + ", expected " +
                            std::to_string(dimension));
    if (!v.pos.allFinite())
      throw ValidationError("vertex '" + v.id + "' has a non-finite position");
    if (net.by_id_.count(v.id))
      throw ValidationError("duplicate vertex id '" + v.id + "'");
    net.by_id_[v.id] = static_cast<int>(net.ids_.size());
    net.ids_.push_back(v.id);
    net.pos_.push_back(std::move(v.pos));
  }

  const int n = net.vertex_count();
  net.adj_.assign(n, {});
  std::set<std::array<int, 2>> seen;
  for (const auto& [ia, ib] : edges) {
    auto a_it = net.by_id_.find(ia);
    auto b_it = net.by_id_.find(ib);
    if (a_it == net.by_id_.end() || b_it == net.by_id_.end())
      throw ValidationError("edge references unknown vertex '" +
                            (a_it == net.by_id_.end() ? ia : ib) + "'");
    int a = a_it->second, b = b_it->second;
    if (a == b) throw ValidationError("self-loop at vertex '" + ia + "'");
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second)
      throw ValidationError("duplicate edge {" + ia + "," + ib + "}");
    const double len = (net.pos_[a] - net.pos_[b]).norm();
    if (len < kMinEdgeLength)
      throw ValidationError("zero-length edge {" + ia + "," + ib + "} (length " +
                            format_double(len) + " < " + format_double(kMinEdgeLength) + ")");
  }
  net.edges_.assign(seen.begin(), seen.end());
  for (const auto& e : net.edges_) {
    net.adj_[e[0]].push_back(e[1]);
    net.adj_[e[1]].push_back(e[0]);
  }

  net.leaf_.assign(n, false);
  for (int v = 0; v < n; ++v) {
    if (net.adj_[v].empty())
      throw ValidationError("vertex '" + net.ids_[v] + "' has degree 0");
    const auto& flag = vertices[v].leaf;
    if (flag.has_value()) {
      if (*flag && net.adj_[v].size() != 1)
        throw ValidationError("vertex '" + net.ids_[v] +
                              "' is flagged leaf but has degree " +
                              std::to_string(net.adj_[v].size()));
      net.leaf_[v] = *flag;
    } else {
      net.leaf_[v] = net.adj_[v].size() == 1;
    }
  }

  if (center.has_value()) {
    if (center->size() != dimension)
      throw ValidationError("center has wrong dimension");
    net.center_ = std::move(*center);
  } else {
    net.center_ = Vector::Zero(dimension);
  }

  net.index_structure();
  return net;
}

void Net::index_structure() {
  leaves_.clear();
  interior_.clear();
  for (int v = 0; v < vertex_count(); ++v) {
    (leaf_[v] ? leaves_ : interior_).push_back(v);
    std::sort(adj_[v].begin(), adj_[v].end());
  }
  order_by_id_.resize(vertex_count());
  for (int v = 0; v < vertex_count(); ++v) order_by_id_[v] = v;
  std::sort(order_by_id_.begin(), order_by_id_.end(),
            [this](int a, int b) { return ids_[a] < ids_[b]; });
}

int Net::index(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw ValidationError("unknown vertex id '" + id + "'");
  return it->second;
}

EdgeVector Net::edge_vector(int x, int y) const {
  EdgeVector ev;
  ev.x = x;
  ev.y = y;
  Vector d = pos_[y] - pos_[x];
  ev.length = d.norm();
  if (ev.length < kMinEdgeLength)
    throw GeometryError("degenerate edge " + edge_label(*this, x, y));
  ev.unit = d / ev.length;
  return ev;
}

double Net::edge_length(int x, int y) const { return (pos_[y] - pos_[x]).norm(); }

int Net::leaf_neighbor(int leaf) const {
  if (!leaf_[leaf]) throw ValidationError("vertex '" + ids_[leaf] + "' is not a leaf");
  return adj_[leaf][0];
}

Vector Net::leaf_vector(int leaf) const {
  const int nb = leaf_neighbor(leaf);
  return edge_vector(nb, leaf).unit;
}

double Net::total_length() const {
  double sum = 0.0;
  for (const auto& e : edges_) sum += edge_length(e[0], e[1]);
  return sum;
}

double Net::total_interior_length() const {
  double sum = 0.0;
  for (const auto& e : edges_)
    if (!leaf_[e[0]] && !leaf_[e[1]]) sum += edge_length(e[0], e[1]);
  return sum;
}

Net Net::with_positions(std::vector<Vector> positions) const {
  if (positions.size() != pos_.size())
    throw ValidationError("with_positions: wrong vertex count");
  Net net = *this;
  net.pos_ = std::move(positions);
  return net;
}

Net Net::with_center(Vector center) const {
  if (center.size() != dim_) throw ValidationError("center has wrong dimension");
  Net net = *this;
  net.center_ = std::move(center);
  return net;
}

Domain Domain::half_space(Vector normal, double offset) {
  const double n = normal.norm();
  if (n < 1e-12) throw ValidationError("half-space normal must be nonzero");
  Domain d;
  d.kind_ = Kind::HalfSpace;
  d.vec_ = normal / n;
  d.scalar_ = offset / n;
  return d;
}

Domain Domain::ball(Vector center, double radius) {
  if (radius <= 0.0) throw ValidationError("ball radius must be positive");
  Domain d;
  d.kind_ = Kind::Ball;
  d.vec_ = std::move(center);
  d.scalar_ = radius;
  return d;
}

Domain Domain::whole_minus_leaves() { return Domain{}; }

double Domain::signed_inside(const Vector& p) const {
  switch (kind_) {
    case Kind::HalfSpace:
      return p.dot(vec_) - scalar_;
    case Kind::Ball:
      return scalar_ - (p - vec_).norm();
    case Kind::WholeMinusLeaves:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

bool Domain::contains_vertex(const Net& net, int v) const {
  if (kind_ == Kind::WholeMinusLeaves) return !net.is_leaf(v);
  return contains_point(net.position(v));
}

namespace {

// Crossing parameter t in (0,1) along the segment a->b where the domain
// boundary is crossed, if any. Precondition: endpoints strictly on opposite
// sides, or for balls possibly both outside (chord). Returns all crossings.
std::vector<double> boundary_crossings(const Domain& dom, const Vector& a, const Vector& b) {
  std::vector<double> ts;
  if (dom.kind() == Domain::Kind::HalfSpace) {
    const double fa = a.dot(dom.normal()) - dom.offset();
    const double fb = b.dot(dom.normal()) - dom.offset();
    if ((fa > 0.0) != (fb > 0.0)) ts.push_back(fa / (fa - fb));
  } else if (dom.kind() == Domain::Kind::Ball) {
    // |a + t(b-a) - c|^2 = r^2
    const Vector d = b - a;
    const Vector m = a - dom.ball_center();
    const double A = d.squaredNorm();
    const double B = 2.0 * m.dot(d);
    const double C = m.squaredNorm() - dom.radius() * dom.radius();
    const double disc = B * B - 4.0 * A * C;
    if (disc > 0.0 && A > 0.0) {
      const double sq = std::sqrt(disc);
      for (double t : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)})
        if (t > 0.0 && t < 1.0) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());
  return ts;
}

}  // namespace

Restriction restrict_net(const Net& net, const Domain& domain) {
  const int k = net.dimension();

  // Boundary clearance check (not applicable to whole-minus-leaves).
  if (domain.kind() != Domain::Kind::WholeMinusLeaves) {
    for (int v = 0; v < net.vertex_count(); ++v) {
      const double s = domain.signed_inside(net.position(v));
      if (std::abs(s) < kBoundaryClearance)
        throw GeometryError("domain boundary passes within " +
                            format_double(kBoundaryClearance) + " of vertex '" +
                            net.id(v) + "'; nudge the offset or radius");
    }
  }

  std::vector<VertexSpec> verts;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<Anchor> anchors;
  std::vector<bool> keep(net.vertex_count(), false);

  for (int v = 0; v < net.vertex_count(); ++v) {
    if (!domain.contains_vertex(net, v)) continue;
    keep[v] = true;
    // Original leaves inside the domain stay leaves; interior stays interior.
    verts.push_back({net.id(v), net.position(v), net.is_leaf(v)});
  }

  int next_anchor = 0;
  auto add_anchor = [&](int inside, int outside, const Vector& p) {
    Anchor a;
    a.id = "a" + std::to_string(next_anchor++) + ":" + net.id(inside) + "~" + net.id(outside);
    a.edge_inside = net.id(inside);
    a.edge_outside = net.id(outside);
    a.position = p;
    verts.push_back({a.id, p, true});
    anchors.push_back(a);
    return anchors.back().id;
  };

  for (const auto& e : net.edges()) {
    const int a = e[0], b = e[1];
    if (domain.kind() == Domain::Kind::WholeMinusLeaves) {
      if (!net.is_leaf(a) && !net.is_leaf(b)) {
        edges.emplace_back(net.id(a), net.id(b));
      } else if (net.is_leaf(a) != net.is_leaf(b)) {
        const int leaf = net.is_leaf(a) ? a : b;
        const int in = net.is_leaf(a) ? b : a;
        edges.emplace_back(net.id(in), add_anchor(in, leaf, net.position(leaf)));
      }
      // leaf-leaf edges have no interior endpoint and are dropped
      continue;
    }
    const bool ina = keep[a], inb = keep[b];
    if (ina && inb) {
      edges.emplace_back(net.id(a), net.id(b));
      continue;
    }
    const auto ts = boundary_crossings(domain, net.position(a), net.position(b));
    if (ina != inb) {
      // exactly one crossing for half-space / convex ball
      const int in = ina ? a : b;
      const int out = ina ? b : a;
      double t = ts.empty() ? 0.5 : (ina ? ts.front() : ts.back());
      Vector p = net.position(a) + t * (net.position(b) - net.position(a));
      edges.emplace_back(net.id(in), add_anchor(in, out, p));
    } else if (!ina && !inb && ts.size() == 2) {
      // chord of a ball: a two-anchor segment with no interior vertex
      Vector p0 = net.position(a) + ts[0] * (net.position(b) - net.position(a));
      Vector p1 = net.position(a) + ts[1] * (net.position(b) - net.position(a));
      if ((p1 - p0).norm() >= kMinEdgeLength) {
        Anchor a0;
        a0.id = "a" + std::to_string(next_anchor++) + ":" + net.id(a) + "~" + net.id(b);
        a0.edge_inside = net.id(a);
        a0.edge_outside = net.id(b);
        a0.position = p0;
        Anchor a1 = a0;
        a1.id = "a" + std::to_string(next_anchor++) + ":" + net.id(b) + "~" + net.id(a);
        a1.edge_inside = net.id(b);
        a1.edge_outside = net.id(a);
        a1.position = p1;
        verts.push_back({a0.id, p0, true});
        verts.push_back({a1.id, p1, true});
        anchors.push_back(a0);
        anchors.push_back(a1);
        edges.emplace_back(a0.id, a1.id);
      }
    }
  }

  if (verts.empty())
    throw GeometryError("restriction is empty: no vertex lies inside the domain");

  Vector center = net.center();
  Restriction res;
  res.net = Net::build(k, std::move(verts), edges, center);
  res.anchors = std::move(anchors);
  return res;
}

EnclosingBall outer_ball(const Net& net, std::optional<Vector> center) {
  if (net.interior().empty())
    throw ValidationError("outer radius needs at least one interior vertex");
  if (center.has_value()) {
    EnclosingBall ball;
    ball.center = std::move(*center);
    ball.radius = 0.0;
    for (int v : net.interior())
      ball.radius = std::max(ball.radius, (net.position(v) - ball.center).norm());
    return ball;
  }
  std::vector<Vector> pts;
  pts.reserve(net.interior().size());
  for (int v : net.interior()) pts.push_back(net.position(v));
  return minimal_enclosing_ball(pts, net.dimension());
}

}  // namespace critnet
