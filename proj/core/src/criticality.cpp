#include "critnet/criticality.hpp"

#include <algorithm>
#include <cmath>

namespace critnet {

Vector vertex_residual(const Net& net, int v) {
  if (net.is_leaf(v))
    throw ValidationError("vertex_residual: '" + net.id(v) + "' is a leaf");
  Vector r = Vector::Zero(net.dimension());
  for (int nb : net.neighbors(v)) {
    Vector d = net.position(v) - net.position(nb);
    const double len = d.norm();
    if (len < kMinEdgeLength)
      throw GeometryError("degenerate edge {" + net.id(v) + "," + net.id(nb) + "}");
    r += d / len;
  }
  return r;
}

ResidualReport residual_report(const Net& net) {
  ResidualReport rep;
  rep.norms.reserve(net.interior().size());
  for (int v : net.interior()) {
    const double n = vertex_residual(net, v).norm();
    rep.norms.push_back(n);
    if (n > rep.max_norm) {
      rep.max_norm = n;
      rep.worst_vertex = v;
    }
  }
  if (rep.worst_vertex == -1 && !net.interior().empty())
    rep.worst_vertex = net.interior().front();
  return rep;
}

bool is_critical(const Net& net, double tol, ResidualReport* report) {
  ResidualReport rep = residual_report(net);
  const bool ok = rep.max_norm <= tol;
  if (report) *report = std::move(rep);
  return ok;
}

Deformation Deformation::scaling(Vector center) {
  Deformation d;
  d.kind_ = Kind::Scaling;
  d.vec_ = std::move(center);
  return d;
}

Deformation Deformation::dilation(Vector e, Vector center) {
  Deformation d;
  d.kind_ = Kind::Dilation;
  d.vec_ = std::move(center);
  d.aux_ = std::move(e);
  return d;
}

Deformation Deformation::swelling(Vector center) {
  Deformation d;
  d.kind_ = Kind::Swelling;
  d.vec_ = std::move(center);
  return d;
}

Deformation Deformation::chopping(Vector v, double offset) {
  const double n = v.norm();
  if (n < 1e-12) throw ValidationError("chopping direction must be nonzero");
  Deformation d;
  d.kind_ = Kind::Chopping;
  d.vec_ = v / n;
  d.scalar_ = offset / n;
  return d;
}

Deformation Deformation::translation(Vector e) {
  Deformation d;
  d.kind_ = Kind::Translation;
  d.aux_ = std::move(e);
  return d;
}

Deformation Deformation::rotation(Matrix generator, Vector center) {
  if (generator.rows() != generator.cols())
    throw ValidationError("rotation generator must be square");
  if ((generator + generator.transpose()).norm() > 1e-12 * (1.0 + generator.norm()))
    throw ValidationError("rotation generator must be antisymmetric");
  Deformation d;
  d.kind_ = Kind::Rotation;
  d.vec_ = std::move(center);
  d.generator_ = std::move(generator);
  return d;
}

Deformation Deformation::rotation_axis(const Vector& axis, Vector center) {
  if (axis.size() != 3)
    throw ValidationError("rotation_axis requires a 3-dimensional axis");
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = -axis[2];
  a(1, 0) = axis[2];
  a(0, 2) = axis[1];
  a(2, 0) = -axis[1];
  a(1, 2) = -axis[0];
  a(2, 1) = axis[0];
  return rotation(std::move(a), std::move(center));
}

Deformation Deformation::custom(std::unordered_map<std::string, Vector> displacement) {
  Deformation d;
  d.kind_ = Kind::Custom;
  d.table_ = std::move(displacement);
  return d;
}

Deformation Deformation::restricted_to(Domain support) const {
  Deformation d = *this;
  d.support_ = std::move(support);
  return d;
}

Vector Deformation::displacement(const Net& net, int v) const {
  const int k = net.dimension();
  if (net.is_leaf(v)) return Vector::Zero(k);
  if (!support_.contains_vertex(net, v)) return Vector::Zero(k);
  const Vector& x = net.position(v);
  switch (kind_) {
    case Kind::Scaling:
      return x - vec_;
    case Kind::Dilation:
      return aux_.dot(x - vec_) * aux_;
    case Kind::Swelling: {
      Vector r = x - vec_;
      const double n = r.norm();
      if (n < 1e-12) return Vector::Zero(k);
      return r / n;
    }
    case Kind::Chopping:
      return x.dot(vec_) > scalar_ ? Vector(vec_) : Vector(Vector::Zero(k));
    case Kind::Translation:
      return aux_;
    case Kind::Rotation:
      return generator_ * (x - vec_);
    case Kind::Custom: {
      auto it = table_.find(net.id(v));
      return it == table_.end() ? Vector(Vector::Zero(k)) : it->second;
    }
  }
  return Vector::Zero(k);
}

void Deformation::validate(const Net& net) const {
  if (kind_ == Kind::Swelling) {
    for (int v = 0; v < net.vertex_count(); ++v) {
      const double d = (net.position(v) - vec_).norm();
      if (d >= 1e-12 && d < kBoundaryClearance)
        throw GeometryError("swelling center lies within " +
                            format_double(kBoundaryClearance) + " of vertex '" +
                            net.id(v) + "' without coinciding with it");
    }
  }
  for (int v : net.interior()) {
    if (!displacement(net, v).allFinite())
      throw ValidationError("deformation is non-finite at vertex '" + net.id(v) + "'");
  }
}

double first_variation(const Net& net, const Deformation& deformation) {
  deformation.validate(net);
  double sum = 0.0;
  for (const auto& e : net.edges()) {
    const Vector dx = deformation.displacement(net, e[0]);
    const Vector dy = deformation.displacement(net, e[1]);
    if (dx.isZero(0.0) && dy.isZero(0.0)) continue;
    const EdgeVector ev = net.edge_vector(e[0], e[1]);
    // (x - y)/|x - y| . (d(x) - d(y)) with ev.unit pointing x -> y
    sum += (-ev.unit).dot(dx - dy);
  }
  return sum;
}

double variation_within(const Net& net, const Deformation& deformation,
                        const Domain& domain) {
  double sum = 0.0;
  for (const auto& e : net.edges()) {
    if (!domain.contains_vertex(net, e[0]) || !domain.contains_vertex(net, e[1]))
      continue;
    const Vector dx = deformation.displacement(net, e[0]);
    const Vector dy = deformation.displacement(net, e[1]);
    if (dx.isZero(0.0) && dy.isZero(0.0)) continue;
    const EdgeVector ev = net.edge_vector(e[0], e[1]);
    sum += (-ev.unit).dot(dx - dy);
  }
  return sum;
}

double anchor_side(const Net& net, const Deformation& deformation, const Domain& domain) {
  deformation.validate(net);
  if (domain.kind() != Domain::Kind::WholeMinusLeaves) {
    for (int v = 0; v < net.vertex_count(); ++v)
      if (std::abs(domain.signed_inside(net.position(v))) < kBoundaryClearance)
        throw GeometryError("domain boundary passes within " +
                            format_double(kBoundaryClearance) + " of vertex '" +
                            net.id(v) + "'; nudge the offset or radius");
  }
  double sum = 0.0;
  for (const auto& e : net.edges()) {
    const bool in0 = domain.contains_vertex(net, e[0]);
    const bool in1 = domain.contains_vertex(net, e[1]);
    if (in0 == in1) continue;  // interior edge or fully outside
    const int inside = in0 ? e[0] : e[1];
    const int outside = in0 ? e[1] : e[0];
    // unit vector from the inside endpoint toward the anchor (same direction
    // as toward the outside endpoint), dotted with the displacement inside
    const EdgeVector ev = net.edge_vector(inside, outside);
    sum += ev.unit.dot(deformation.displacement(net, inside));
  }
  return sum;
}

void SolverParams::validate() const {
  if (tolerance <= 0.0) throw ValidationError("solver tolerance must be positive");
  if (max_sweeps < 1) throw ValidationError("max_sweeps must be >= 1");
  if (damping <= 0.0 || damping > 1.0)
    throw ValidationError("damping must lie in (0, 1]");
  if (collapse_threshold < kMinEdgeLength)
    throw ValidationError("collapse threshold must be >= the minimum edge length");
}

namespace {

void require_two_leaves_per_component(const Net& net) {
  std::vector<int> comp(net.vertex_count(), -1);
  int n_comp = 0;
  for (int s = 0; s < net.vertex_count(); ++s) {
    if (comp[s] != -1) continue;
    std::vector<int> stack{s};
    comp[s] = n_comp;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int nb : net.neighbors(v)) {
        if (comp[nb] == -1) {
          comp[nb] = n_comp;
          stack.push_back(nb);
        }
      }
    }
    ++n_comp;
  }
  std::vector<int> leaves(n_comp, 0);
  std::vector<int> sample(n_comp, -1);
  for (int v = 0; v < net.vertex_count(); ++v) {
    if (net.is_leaf(v)) ++leaves[comp[v]];
    if (sample[comp[v]] == -1) sample[comp[v]] = v;
  }
  for (int c = 0; c < n_comp; ++c) {
    if (leaves[c] < 2)
      throw ValidationError(
          "relax: the connected component containing '" + net.id(sample[c]) +
          "' has " + std::to_string(leaves[c]) +
          " pinned leaf/leaves; every component needs at least 2 to admit a "
          "length-critical embedding");
  }
}

}  // namespace

RelaxResult relax(const Net& initial, const SolverParams& params) {
  params.validate();
  require_two_leaves_per_component(initial);
  const int k = initial.dimension();

  std::vector<Vector> pos(initial.vertex_count());
  for (int v = 0; v < initial.vertex_count(); ++v) pos[v] = initial.position(v);

  // Near-coincident starts get a deterministic jitter so the reciprocal
  // weights stay finite.
  Rng rng(params.seed);
  for (int v : initial.interior()) {
    for (int nb : initial.neighbors(v)) {
      if ((pos[v] - pos[nb]).norm() < params.collapse_threshold) {
        pos[v] += 1e-6 * rng.unit_vector(k);
        break;
      }
    }
  }

  auto total_length = [&]() {
    double sum = 0.0;
    for (const auto& e : initial.edges()) sum += (pos[e[0]] - pos[e[1]]).norm();
    return sum;
  };
  auto max_residual = [&]() {
    double worst = 0.0;
    for (int v : initial.interior()) {
      Vector r = Vector::Zero(k);
      for (int nb : initial.neighbors(v)) {
        Vector d = pos[v] - pos[nb];
        const double len = d.norm();
        if (len > 0.0) r += d / len;
      }
      worst = std::max(worst, r.norm());
    }
    return worst;
  };

  RelaxResult result;
  result.trace.push_back({0, total_length(), max_residual()});

  int sweep = 0;
  for (sweep = 1; sweep <= params.max_sweeps; ++sweep) {
    for (int v : initial.order_by_id()) {
      if (initial.is_leaf(v)) continue;
      double weight_sum = 0.0;
      Vector target = Vector::Zero(k);
      double local_before = 0.0;
      bool degenerate = false;
      for (int nb : initial.neighbors(v)) {
        const double len = (pos[v] - pos[nb]).norm();
        local_before += len;
        if (len < params.collapse_threshold) {
          degenerate = true;
          break;
        }
        weight_sum += 1.0 / len;
        target += pos[nb] / len;
      }
      if (degenerate) continue;  // collapse detected below after the sweep
      target /= weight_sum;

      auto local_length = [&](const Vector& p) {
        double sum = 0.0;
        for (int nb : initial.neighbors(v)) sum += (p - pos[nb]).norm();
        return sum;
      };
      double after = local_length(target);
      if (after > local_before + 1e-15 * (1.0 + local_before)) {
        Vector damped = pos[v] + params.damping * (target - pos[v]);
        if (local_length(damped) <= local_before)
          target = damped;
        else
          target = pos[v];  // keep the monotone guarantee
      }
      pos[v] = target;
    }

    // collapse check: adjacent vertices that converged onto each other
    for (const auto& e : initial.edges()) {
      if ((pos[e[0]] - pos[e[1]]).norm() < params.collapse_threshold) {
        result.net = initial.with_positions(pos);
        result.status = RelaxStatus::EdgeCollapse;
        result.sweeps = sweep;
        result.final_residual = max_residual();
        result.collapsed_a = initial.id(e[0]);
        result.collapsed_b = initial.id(e[1]);
        result.trace.push_back({sweep, total_length(), result.final_residual});
        return result;
      }
    }

    const double res = max_residual();
    result.trace.push_back({sweep, total_length(), res});
    if (res <= params.tolerance) {
      result.net = initial.with_positions(pos);
      result.status = RelaxStatus::Converged;
      result.sweeps = sweep;
      result.final_residual = res;
      return result;
    }
  }

  result.net = initial.with_positions(pos);
  result.status = RelaxStatus::MaxSweeps;
  result.sweeps = params.max_sweeps;
  result.final_residual = result.trace.back().max_residual;
  return result;
}

}  // namespace critnet
