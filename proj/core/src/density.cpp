#include "critnet/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace critnet {

namespace {

constexpr double kRadiusWindow = 1e-9;   // exclusion window around bad radii
constexpr double kTangentAnchor = 1e-6;  // |x.l| below this blocks the derivative

struct Piece {
  // segment: start + t * dir for t in [0, t_max]; ray: t_max = +inf, |dir| = 1
  Vector start;
  Vector dir;      // not necessarily unit for segments
  double t_max;
  double dir_norm;
};

std::vector<Piece> pieces_of(const ExtendedNet& ext) {
  std::vector<Piece> out;
  for (const auto& e : ext.interior_edges) {
    Piece p;
    p.start = ext.base.position(e[0]);
    p.dir = ext.base.position(e[1]) - p.start;
    p.t_max = 1.0;
    p.dir_norm = p.dir.norm();
    out.push_back(std::move(p));
  }
  for (const auto& r : ext.rays) {
    Piece p;
    p.start = r.start;
    p.dir = r.dir;
    p.t_max = std::numeric_limits<double>::infinity();
    p.dir_norm = 1.0;
    out.push_back(std::move(p));
  }
  return out;
}

struct Crossing {
  Vector point;
  Vector outward;  // unit direction along the piece, leaving the ball
};

struct ClipResult {
  double inside_length = 0.0;
  std::vector<Crossing> crossings;
};

ClipResult clip_piece(const Piece& piece, const Vector& center, double r) {
  ClipResult res;
  // |start + t dir - center|^2 = r^2
  const Vector m = piece.start - center;
  const double a = piece.dir.squaredNorm();
  const double b = 2.0 * m.dot(piece.dir);
  const double c = m.squaredNorm() - r * r;
  if (a <= 0.0) return res;
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) return res;  // misses the ball (tangency is pre-excluded)
  const double sq = std::sqrt(disc);
  double t1 = (-b - sq) / (2.0 * a);
  double t2 = (-b + sq) / (2.0 * a);
  const double lo = std::max(t1, 0.0);
  const double hi = std::min(t2, piece.t_max);
  if (hi <= lo) return res;
  res.inside_length = (hi - lo) * piece.dir_norm;
  const Vector unit = piece.dir / piece.dir_norm;
  if (t1 > 0.0 && t1 < piece.t_max) {
    // entry point: the inside part lies forward, outward is backward
    res.crossings.push_back({piece.start + t1 * piece.dir, -unit});
  }
  if (t2 > 0.0 && t2 < piece.t_max) {
    res.crossings.push_back({piece.start + t2 * piece.dir, unit});
  }
  return res;
}

void reject_if_excluded(const ExtendedNet& ext, const Vector& center, double r) {
  for (int v = 0; v < ext.base.vertex_count(); ++v) {
    if (ext.base.is_leaf(v)) continue;  // leaves were replaced by rays
    const double d = (ext.base.position(v) - center).norm();
    if (std::abs(d - r) <= kRadiusWindow)
      throw GeometryError("radius " + format_double(r) + " passes within " +
                          format_double(kRadiusWindow) + " of vertex '" +
                          ext.base.id(v) + "'");
  }
  for (const auto& av : ext.artificial) {
    const double d = (av.position - center).norm();
    if (std::abs(d - r) <= kRadiusWindow)
      throw GeometryError("radius " + format_double(r) +
                          " passes through an extension crossing (" + av.description + ")");
  }
  for (const Piece& p : pieces_of(ext)) {
    // tangency radius: distance to the supporting line when the foot falls
    // inside the piece
    const Vector m = center - p.start;
    const double t_foot = m.dot(p.dir) / p.dir.squaredNorm();
    if (t_foot <= 0.0 || t_foot >= p.t_max) continue;
    const double d = (p.start + t_foot * p.dir - center).norm();
    if (std::abs(d - r) <= kRadiusWindow)
      throw GeometryError("radius " + format_double(r) +
                          " is tangent to an edge or ray");
  }
}

struct DensityEval {
  double lambda_geom;
  double lambda_anchor;
  std::vector<double> cosines;  // x.l per crossing, outward orientation
};

DensityEval evaluate(const ExtendedNet& ext, const Vector& center, double r) {
  if (r <= 0.0) throw ValidationError("density radius must be positive");
  if (center.size() != ext.base.dimension())
    throw ValidationError("density center has the wrong dimension");
  reject_if_excluded(ext, center, r);
  DensityEval out{0.0, 0.0, {}};
  double inside = 0.0;
  for (const Piece& p : pieces_of(ext)) {
    ClipResult cr = clip_piece(p, center, r);
    inside += cr.inside_length;
    for (const auto& crossing : cr.crossings) {
      const Vector radial = (crossing.point - center) / r;
      const double cosine = radial.dot(crossing.outward);
      out.cosines.push_back(cosine);
      out.lambda_anchor += cosine;
    }
  }
  out.lambda_geom = inside / r;
  return out;
}

}  // namespace

ExtendedNet extend_leaves(const Net& net) {
  ExtendedNet ext;
  ext.base = net;
  for (const auto& e : net.edges())
    if (!net.is_leaf(e[0]) && !net.is_leaf(e[1])) ext.interior_edges.push_back(e);

  for (int leaf : net.leaves()) {
    LeafRay ray;
    ray.leaf = leaf;
    ray.origin = net.leaf_neighbor(leaf);
    ray.start = net.position(ray.origin);
    ray.dir = net.leaf_vector(leaf);
    ext.rays.push_back(std::move(ray));
  }

  // Overlapping colinear rays are a measure-zero configuration the extension
  // cannot represent (the two-leaf segment is the canonical offender).
  for (std::size_t i = 0; i < ext.rays.size(); ++i) {
    for (std::size_t j = i + 1; j < ext.rays.size(); ++j) {
      const auto& a = ext.rays[i];
      const auto& b = ext.rays[j];
      const double align = a.dir.dot(b.dir);
      if (std::abs(std::abs(align) - 1.0) > 1e-12) continue;  // not parallel
      Vector off = b.start - a.start;
      Vector perp = off - off.dot(a.dir) * a.dir;
      if (perp.norm() > 1e-12) continue;  // parallel but distinct lines
      const double along = off.dot(a.dir);
      const bool overlap = align > 0.0 || along > 0.0;
      if (overlap)
        throw GeometryError("leaf rays of '" + net.id(a.leaf) + "' and '" +
                            net.id(b.leaf) + "' are colinear and overlap");
    }
  }

  // Artificial crossings: ray-ray and ray-interior-edge intersections.
  auto try_cross = [&](const Vector& a0, const Vector& ad, double amax,
                       const Vector& b0, const Vector& bd, double bmax,
                       const std::string& what) {
    // closest approach of the two supporting lines
    const double dd = ad.squaredNorm() * bd.squaredNorm() - std::pow(ad.dot(bd), 2);
    if (dd < 1e-18) return;  // parallel
    const Vector w = b0 - a0;
    const double s = (w.dot(ad) * bd.squaredNorm() - w.dot(bd) * ad.dot(bd)) / dd;
    const double t = (w.dot(ad) * ad.dot(bd) - w.dot(bd) * ad.squaredNorm()) / dd;
    if (s <= 1e-9 || s >= amax - 1e-9) return;
    if (t <= 1e-9 || t >= bmax - 1e-9) return;
    const Vector pa = a0 + s * ad;
    const Vector pb = b0 + t * bd;
    if ((pa - pb).norm() > 1e-12) return;  // skew (k >= 3)
    ext.artificial.push_back({pa, what});
  };

  for (std::size_t i = 0; i < ext.rays.size(); ++i) {
    const auto& a = ext.rays[i];
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1; j < ext.rays.size(); ++j) {
      const auto& b = ext.rays[j];
      try_cross(a.start, a.dir, inf, b.start, b.dir, inf,
                "ray '" + net.id(a.leaf) + "' x ray '" + net.id(b.leaf) + "'");
    }
    for (const auto& e : ext.interior_edges) {
      const Vector p = net.position(e[0]);
      const Vector d = net.position(e[1]) - p;
      try_cross(a.start, a.dir, inf, p, d, 1.0,
                "ray '" + net.id(a.leaf) + "' x edge {" + net.id(e[0]) + "," +
                    net.id(e[1]) + "}");
    }
  }
  return ext;
}

int generalized_degree(const ExtendedNet& ext, const Vector& center) {
  if (center.size() != ext.base.dimension())
    throw ValidationError("density center has the wrong dimension");
  for (int v = 0; v < ext.base.vertex_count(); ++v) {
    if (ext.base.is_leaf(v)) continue;
    if ((ext.base.position(v) - center).norm() <= kRadiusWindow)
      return ext.base.degree(v);
  }
  for (const Piece& p : pieces_of(ext)) {
    const Vector m = center - p.start;
    const double t = m.dot(p.dir) / p.dir.squaredNorm();
    if (t <= 0.0 || t >= p.t_max) continue;
    if ((p.start + t * p.dir - center).norm() <= kRadiusWindow) return 2;
  }
  return 0;
}

double length_density(const ExtendedNet& ext, const Vector& center, double r) {
  return evaluate(ext, center, r).lambda_geom;
}

double density_derivative(const ExtendedNet& ext, const Vector& center, double r) {
  const DensityEval eval = evaluate(ext, center, r);
  double sum = 0.0;
  for (double cosine : eval.cosines) {
    if (std::abs(cosine) <= kTangentAnchor)
      throw GeometryError("near-tangent crossing at radius " + format_double(r) +
                          " (x.l = " + format_double(cosine) + ")");
    sum += 1.0 / cosine - cosine;
  }
  return sum / r;
}

DensityProfile density_profile(const ExtendedNet& ext, const Vector& center,
                               double r_min, double r_max, int count) {
  if (!(r_min > 0.0) || !(r_max > r_min))
    throw ValidationError("density_profile requires 0 < r_min < r_max");
  if (count < 2) throw ValidationError("density_profile needs at least 2 samples");

  DensityProfile profile;
  profile.center = center;
  profile.leaf_count = ext.base.leaf_count();
  profile.generalized_degree = generalized_degree(ext, center);

  for (int i = 0; i < count; ++i) {
    DensitySample s;
    s.r = r_min + (r_max - r_min) * i / (count - 1);
    try {
      const DensityEval eval = evaluate(ext, center, s.r);
      s.valid = true;
      s.lambda = eval.lambda_geom;
      s.lambda_anchor = eval.lambda_anchor;
      s.anchor_count = static_cast<int>(eval.cosines.size());
      ++profile.valid_count;
    } catch (const GeometryError& err) {
      s.reject_reason = err.what();
      profile.samples.push_back(std::move(s));
      continue;
    }
    try {
      s.dlambda_formula = density_derivative(ext, center, s.r);
      s.derivative_valid = true;
      const double h = 1e-5 * s.r;
      try {
        const double plus = length_density(ext, center, s.r + h);
        const double minus = length_density(ext, center, s.r - h);
        s.dlambda_fd = (plus - minus) / (2.0 * h);
        s.fd_valid = true;
      } catch (const GeometryError&) {
        s.fd_valid = false;
      }
    } catch (const GeometryError&) {
      s.derivative_valid = false;
    }
    profile.samples.push_back(std::move(s));
  }

  if (profile.valid_count == 0)
    throw GeometryError("density_profile: every sampled radius was rejected");

  for (const auto& s : profile.samples) {
    if (!s.valid) continue;
    if (!profile.lambda_first) profile.lambda_first = s.lambda;
    profile.lambda_last = s.lambda;
  }
  return profile;
}

}  // namespace critnet
