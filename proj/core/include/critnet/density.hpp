#pragma once

#include <optional>
#include <string>
#include <vector>

#include "critnet/net.hpp"

namespace critnet {

/// Semi-infinite ray replacing a leaf edge: starts at the leaf's neighbor
/// and runs through the leaf.
struct LeafRay {
  int origin;  // interior vertex index in the base net
  int leaf;    // replaced leaf
  Vector start;
  Vector dir;  // unit, equals the leaf vector
};

/// Crossing forced by the extension (ray-ray or ray-edge); even degree and
/// exactly balanced, tracked only so its radius can be excluded from
/// density sampling.
struct ArtificialVertex {
  Vector position;
  std::string description;
};

/// Net with every leaf edge extended to an infinite ray.
struct ExtendedNet {
  Net base;
  std::vector<LeafRay> rays;
  std::vector<std::array<int, 2>> interior_edges;  // both endpoints interior
  std::vector<ArtificialVertex> artificial;
};

/// Extends all leaves to infinity. Errors on overlapping colinear rays
/// (e.g. a bare two-leaf segment).
ExtendedNet extend_leaves(const Net& net);

/// Generalized degree at a point: degree of the vertex there, 2 if an edge
/// or ray passes through, 0 otherwise (1e-9 window).
int generalized_degree(const ExtendedNet& ext, const Vector& center);

/// Length density lambda(r) = (length of the extended net inside the ball)/r,
/// computed by geometric clipping and cross-checked against the anchor sum
/// over sphere crossings. Radii within 1e-9 of a vertex norm or a tangency
/// are rejected (GeometryError).
double length_density(const ExtendedNet& ext, const Vector& center, double r);

/// Closed-form derivative (1/r) sum over crossings of (1/(x.l) - x.l); needs
/// every crossing to be non-tangent (|x.l| > 1e-6).
double density_derivative(const ExtendedNet& ext, const Vector& center, double r);

struct DensitySample {
  double r = 0.0;
  bool valid = false;
  std::string reject_reason;
  double lambda = 0.0;         // geometric clipping value
  double lambda_anchor = 0.0;  // anchor-sum value
  int anchor_count = 0;
  bool derivative_valid = false;
  double dlambda_formula = 0.0;
  bool fd_valid = false;
  double dlambda_fd = 0.0;
};

struct DensityProfile {
  Vector center;
  std::vector<DensitySample> samples;
  int valid_count = 0;
  int generalized_degree = 0;
  int leaf_count = 0;
  // set when r_min (resp. r_max) is clear of features / beyond the extent
  std::optional<double> lambda_first;
  std::optional<double> lambda_last;
};

/// Samples lambda and its derivative on `count` radii linearly spaced in
/// [r_min, r_max]; rejected radii are listed with their reason. Errors if
/// every sample is rejected.
DensityProfile density_profile(const ExtendedNet& ext, const Vector& center,
                               double r_min, double r_max, int count);

}  // namespace critnet
