#include "critnet/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "critnet/criticality.hpp"
#include "critnet/currents.hpp"

namespace critnet {

namespace {

constexpr double kAtCenter = 1e-12;

Vector net_centroid(const Net& net) {
  Vector c = Vector::Zero(net.dimension());
  for (int v = 0; v < net.vertex_count(); ++v) c += net.position(v);
  return c / net.vertex_count();
}

double net_scale(const Net& net, const Vector& centroid) {
  double s = 0.0;
  for (int v = 0; v < net.vertex_count(); ++v)
    s = std::max(s, (net.position(v) - centroid).norm());
  return s + 1.0;
}

std::vector<int> component_labels(const Net& net, int* count = nullptr) {
  std::vector<int> comp(net.vertex_count(), -1);
  int n_comp = 0;
  for (int s = 0; s < net.vertex_count(); ++s) {
    if (comp[s] != -1) continue;
    std::vector<int> stack{s};
    comp[s] = n_comp;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int nb : net.neighbors(v))
        if (comp[nb] == -1) {
          comp[nb] = n_comp;
          stack.push_back(nb);
        }
    }
    ++n_comp;
  }
  if (count) *count = n_comp;
  return comp;
}

/// Leaves whose neighbor is an interior vertex (anchor sums run over these).
std::vector<int> anchored_leaves(const Net& net) {
  std::vector<int> out;
  for (int leaf : net.leaves())
    if (!net.is_leaf(net.leaf_neighbor(leaf))) out.push_back(leaf);
  return out;
}

CheckReport pass_fail(CheckReport rep, double residual, double tol) {
  rep.residual = residual;
  rep.tolerance = tol;
  rep.status = residual <= tol ? CheckStatus::Pass : CheckStatus::Fail;
  return rep;
}

CheckReport skipped(CheckReport rep, const std::string& reason) {
  rep.status = CheckStatus::Skipped;
  rep.detail = reason;
  return rep;
}

// ---------------------------------------------------------------------------
// individual checks

CheckReport check_leaf_count_min(const Net& net, const CheckOptions&) {
  CheckReport rep;
  int n_comp = 0;
  const auto comp = component_labels(net, &n_comp);
  std::vector<int> leaves(n_comp, 0), required(n_comp, 2);
  std::vector<int> sample(n_comp, -1);
  for (int v = 0; v < net.vertex_count(); ++v) {
    if (sample[comp[v]] == -1) sample[comp[v]] = v;
    if (net.is_leaf(v))
      ++leaves[comp[v]];
    else if (net.degree(v) >= 3)
      required[comp[v]] = 3;
  }
  int worst = 0;
  double deficit = 0.0;
  for (int c = 0; c < n_comp; ++c) {
    const double d = required[c] - leaves[c];
    if (d > deficit) {
      deficit = d;
      worst = c;
    }
  }
  rep.measured = leaves[worst];
  rep.bound = required[worst];
  rep.detail = "component of '" + net.id(sample[worst]) + "'";
  return pass_fail(rep, deficit, 0.0);
}

CheckReport check_vertex_balance(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  const ResidualReport rr = residual_report(net);
  rep.measured = rr.max_norm;
  rep.bound = opt.tol_balance;
  if (rr.worst_vertex >= 0) rep.detail = "worst vertex '" + net.id(rr.worst_vertex) + "'";
  return pass_fail(rep, rr.max_norm, opt.tol_balance);
}

double anchor_length_sum(const Net& net) {
  double sum = 0.0;
  for (int leaf : anchored_leaves(net)) {
    const int nb = net.leaf_neighbor(leaf);
    sum += net.position(nb).dot(net.leaf_vector(leaf));
  }
  return sum;
}

CheckReport check_length_identity(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  rep.measured = net.total_interior_length();
  rep.bound = anchor_length_sum(net);
  return pass_fail(rep, std::abs(rep.measured - rep.bound), opt.tol_identity);
}

CheckReport check_outer_radius_bound(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  if (net.interior().empty())
    return skipped(rep, "no interior vertices; outer radius undefined");
  const EnclosingBall ball = outer_ball(net);
  rep.measured = net.total_interior_length();
  rep.bound = ball.radius * net.leaf_count();
  rep.detail = "outer radius " + format_double(ball.radius);
  return pass_fail(rep, rep.measured - rep.bound, opt.tol_inequality);
}

CheckReport check_leaf_sum_zero(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  Vector sum = Vector::Zero(net.dimension());
  for (int leaf : net.leaves()) sum += net.leaf_vector(leaf);
  rep.measured = sum.norm();
  rep.bound = 0.0;
  return pass_fail(rep, rep.measured, opt.tol_unit_sum);
}

CheckReport check_torque_zero(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  const int k = net.dimension();
  Matrix m = Matrix::Zero(k, k);
  for (int leaf : net.leaves()) {
    const Vector l = net.leaf_vector(leaf);
    const Vector& x = net.position(net.leaf_neighbor(leaf));
    m += l * x.transpose() - x * l.transpose();
  }
  rep.measured = m.norm();
  rep.bound = 0.0;
  return pass_fail(rep, rep.measured, opt.tol_unit_sum);
}

CheckReport check_degree_bound_swelling(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  int max_deg = 0;
  int worst = -1;
  for (int v : net.interior())
    if (net.degree(v) > max_deg) {
      max_deg = net.degree(v);
      worst = v;
    }
  rep.measured = max_deg;
  rep.bound = net.leaf_count();
  if (worst >= 0) rep.detail = "vertex '" + net.id(worst) + "'";
  return pass_fail(rep, rep.measured - rep.bound, opt.tol_inequality);
}

CheckReport check_swelling_identity(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  const Vector center = opt.center.value_or(net.center());

  int center_vertex = -1;
  for (int v = 0; v < net.vertex_count(); ++v) {
    const double d = (net.position(v) - center).norm();
    if (d < kAtCenter) {
      center_vertex = v;
    } else if (d < kBoundaryClearance) {
      return skipped(rep, "vertex '" + net.id(v) +
                              "' lies within 1e-9 of the center without coinciding");
    }
  }
  if (center_vertex >= 0 && net.is_leaf(center_vertex))
    return skipped(rep, "a leaf sits at the center");

  // Generalized degree and the excluded through-edge, if any.
  double nu0 = 0.0;
  int through_a = -1, through_b = -1;
  if (center_vertex >= 0) {
    nu0 = net.degree(center_vertex);
  } else {
    for (const auto& e : net.edges()) {
      const Vector p = net.position(e[0]);
      const Vector d = net.position(e[1]) - p;
      const double t = (center - p).dot(d) / d.squaredNorm();
      if (t <= 0.0 || t >= 1.0) continue;
      if ((p + t * d - center).norm() < kBoundaryClearance) {
        nu0 = 2.0;
        through_a = e[0];
        through_b = e[1];
        break;
      }
    }
  }

  double middle = 0.0;
  for (const auto& e : net.edges()) {
    if (center_vertex >= 0 && (e[0] == center_vertex || e[1] == center_vertex)) continue;
    if (e[0] == through_a && e[1] == through_b) continue;
    const Vector rx = net.position(e[0]) - center;
    const Vector ry = net.position(e[1]) - center;
    middle += (rx - ry).normalized().dot(rx.normalized() - ry.normalized());
  }

  double rhs = 0.0;
  for (int leaf : net.leaves())
    rhs += net.leaf_vector(leaf).dot((net.position(leaf) - center).normalized());

  rep.measured = nu0 + middle;
  rep.bound = rhs;
  rep.detail = "generalized degree " + format_double(nu0) + ", middle term " +
               format_double(middle);
  const double residual = std::abs(rep.measured - rhs);
  CheckReport out = pass_fail(rep, residual, opt.tol_identity);
  if (middle < -1e-12) {
    out.status = CheckStatus::Fail;
    out.detail += " (middle term negative)";
  }
  return out;
}

CheckReport check_further_relation(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  Rng rng(opt.seed + 701);
  const int k = net.dimension();
  double worst = 0.0;
  for (int trial = 0; trial < opt.vectors; ++trial) {
    const Vector e = rng.unit_vector(k);
    Vector lhs = Vector::Zero(k);
    for (const auto& ed : net.edges()) {
      if (net.is_leaf(ed[0]) || net.is_leaf(ed[1])) continue;
      const Vector d = net.position(ed[1]) - net.position(ed[0]);
      lhs += 2.0 * d.dot(e) * d / d.norm();
    }
    Vector rhs = Vector::Zero(k);
    for (int leaf : anchored_leaves(net)) {
      const Vector l = net.leaf_vector(leaf);
      const Vector& x = net.position(net.leaf_neighbor(leaf));
      rhs += x.dot(e) * l + l.dot(e) * x;
    }
    worst = std::max(worst, (lhs - rhs).norm());
  }
  rep.measured = worst;
  rep.bound = 0.0;
  rep.detail = std::to_string(opt.vectors) + " probe vectors";
  return pass_fail(rep, worst, opt.tol_identity);
}

CheckReport check_cin_bound(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  Rng rng(opt.seed + 1009);
  double worst_cin = 0.0;
  for (int t = 0; t < opt.directions; ++t) {
    const Vector v = rng.unit_vector(net.dimension());
    worst_cin = std::max(worst_cin, current_profile(net, v).c_in);
  }
  rep.measured = worst_cin;
  rep.bound = 0.5 * net.leaf_count();
  rep.detail = std::to_string(opt.directions) + " directions";
  return pass_fail(rep, rep.measured - rep.bound, opt.tol_inequality);
}

CheckReport check_cut_lemma(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  Rng rng(opt.seed + 1201);
  double worst = 0.0;
  for (int t = 0; t < opt.directions; ++t) {
    const CutScan scan = cut_scan(net, rng.unit_vector(net.dimension()));
    worst = std::max({worst, scan.max_interior_jump, scan.max_flux_mismatch,
                      scan.max_over_cin});
  }
  rep.measured = worst;
  rep.bound = 0.0;
  rep.detail = std::to_string(opt.directions) + " directions";
  return pass_fail(rep, worst, opt.tol_inequality);
}

CheckReport check_degree_bound_current(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  int max_deg = 0;
  for (int v : net.interior()) max_deg = std::max(max_deg, net.degree(v));
  rep.measured = max_deg;
  rep.bound = std::sqrt(static_cast<double>(net.dimension())) * net.leaf_count();
  return pass_fail(rep, rep.measured - rep.bound, opt.tol_inequality);
}

CheckReport check_isoperimetric(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  Rng rng(opt.seed + 1401);
  const int k = net.dimension();
  const double L = net.total_interior_length();
  double worst = -std::numeric_limits<double>::infinity();
  double worst_rhs = 0.0;
  for (int t = 0; t < opt.directions; ++t) {
    const auto basis = rng.orthonormal_basis(k);
    double sum_sq = 0.0;
    double max_spread = 0.0;
    for (const Vector& v : basis) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (int x : net.interior()) {
        const double p = net.position(x).dot(v);
        lo = std::min(lo, p);
        hi = std::max(hi, p);
      }
      const double spread = net.interior().empty() ? 0.0 : hi - lo;
      sum_sq += spread * spread;
      max_spread = std::max(max_spread, spread);
    }
    const double rhs = std::sqrt(sum_sq) * net.leaf_count();
    if (2.0 * L - rhs > worst) {
      worst = 2.0 * L - rhs;
      worst_rhs = rhs;
    }
    if (k == 2 && max_spread > 0.0) {
      // max-projection corollary, planar case
      const double rhs2 = 0.5 * std::sqrt(2.0) * net.leaf_count() * max_spread;
      worst = std::max(worst, L - rhs2);
    }
  }
  rep.measured = 2.0 * L;
  rep.bound = worst_rhs;
  rep.detail = std::to_string(opt.directions) + " bases";
  return pass_fail(rep, worst, opt.tol_inequality);
}

CheckReport check_combinatorial(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  Rng rng(opt.seed + 1601);
  const int k = net.dimension();
  double nu_int = 0.0;
  for (int v : net.interior()) nu_int += net.degree(v);
  double worst = -std::numeric_limits<double>::infinity();
  double worst_bound = 0.0;
  int used = 0, skipped_bases = 0;
  for (int t = 0; t < opt.directions; ++t) {
    const auto basis = rng.orthonormal_basis(k);
    double sum_sq = 0.0;
    bool ok = true;
    for (const Vector& v : basis) {
      try {
        int d;
        if (opt.perturb_directions) {
          d = longest_oriented_path_perturbed(net, v, opt.seed + 13 * t).length;
        } else {
          d = longest_oriented_path(net, v).length;
        }
        sum_sq += static_cast<double>(d) * d;
      } catch (const GeometryError&) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      ++skipped_bases;
      continue;
    }
    ++used;
    const double bound = 2.0 * net.leaf_count() + std::sqrt(sum_sq) * net.leaf_count();
    if (nu_int - bound > worst) {
      worst = nu_int - bound;
      worst_bound = bound;
    }
  }
  if (used == 0)
    return skipped(rep, "every sampled basis hit a perpendicular edge");
  rep.measured = nu_int;
  rep.bound = worst_bound;
  rep.detail = std::to_string(used) + " bases (" + std::to_string(skipped_bases) +
               " skipped)";
  return pass_fail(rep, worst, opt.tol_inequality);
}

CheckReport check_convex_hull(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  if (net.leaves().empty()) return skipped(rep, "net has no leaves");
  std::vector<Vector> hull_pts;
  for (int leaf : net.leaves()) hull_pts.push_back(net.position(leaf));
  double worst = 0.0;
  int worst_v = -1;
  for (int v = 0; v < net.vertex_count(); ++v) {
    const double d = distance_to_convex_hull(hull_pts, net.position(v));
    if (d > worst) {
      worst = d;
      worst_v = v;
    }
  }
  rep.measured = worst;
  rep.bound = 0.0;
  if (worst_v >= 0) rep.detail = "farthest vertex '" + net.id(worst_v) + "'";
  return pass_fail(rep, worst, opt.tol_inequality);
}

CheckReport check_face_convexity(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  if (net.dimension() != 2) return skipped(rep, "requires k = 2");
  const auto faces = planar_faces(net);
  double worst = 0.0;
  int checked = 0;
  for (const auto& face : faces) {
    if (face.signed_area <= 1e-12) continue;  // unbounded (or degenerate) walk
    if (face.contains_leaf) continue;         // exempt
    ++checked;
    const int m = static_cast<int>(face.walk.size());
    for (int i = 0; i < m; ++i) {
      const Vector& a = net.position(face.walk[(i + m - 1) % m]);
      const Vector& b = net.position(face.walk[i]);
      const Vector& c = net.position(face.walk[(i + 1) % m]);
      const Vector u1 = (b - a).normalized();
      const Vector u2 = (c - b).normalized();
      const double cross = u1[0] * u2[1] - u1[1] * u2[0];
      const double dot = u1.dot(u2);
      if (dot < -1.0 + 1e-9) {
        worst = std::max(worst, 1.0);  // boundary folds back on itself
      } else if (cross < 0.0) {
        worst = std::max(worst, -cross);
      }
    }
  }
  rep.measured = worst;
  rep.bound = 0.0;
  rep.detail = std::to_string(checked) + " leafless bounded faces";
  return pass_fail(rep, worst, opt.tol_inequality);
}

CheckReport check_lemma_1_2(const Net& net, const CheckOptions& opt) {
  CheckReport rep;
  Rng rng(opt.seed + 1801);
  const int k = net.dimension();
  const Vector centroid = net_centroid(net);
  const double scale = net_scale(net, centroid);

  auto nudged_halfspace = [&](const Vector& v) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int x = 0; x < net.vertex_count(); ++x) {
      const double p = net.position(x).dot(v);
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    const double span = std::max(hi - lo, 1.0);
    double lambda = lo + span * (0.2 + 0.6 * rng.uniform());
    for (int tries = 0; tries < 1000; ++tries) {
      bool clear = true;
      for (int x = 0; x < net.vertex_count(); ++x)
        if (std::abs(net.position(x).dot(v) - lambda) < kBoundaryClearance) clear = false;
      if (clear) break;
      lambda += 1e-5 * span;
    }
    return lambda;
  };

  auto nudged_ball = [&](const Vector& center) {
    double radius = scale * (0.3 + 0.5 * rng.uniform());
    for (int tries = 0; tries < 1000; ++tries) {
      bool clear = true;
      for (int x = 0; x < net.vertex_count(); ++x)
        if (std::abs((net.position(x) - center).norm() - radius) < kBoundaryClearance)
          clear = false;
      if (clear) break;
      radius += 1e-5 * scale;
    }
    return radius;
  };

  auto swelling_center = [&]() {
    for (int tries = 0; tries < 100; ++tries) {
      Vector c = centroid + 0.1 * scale * rng.unit_vector(k);
      bool ok = true;
      for (int x = 0; x < net.vertex_count(); ++x) {
        const double d = (net.position(x) - c).norm();
        if (d < kBoundaryClearance) ok = false;
      }
      if (ok) return c;
    }
    throw GeometryError("could not place a swelling center away from all vertices");
  };

  double worst = 0.0;
  std::string worst_case;
  auto compare = [&](const char* name, const Deformation& def, const Domain& dom) {
    const double lhs = variation_within(net, def, dom);
    const double rhs = anchor_side(net, def, dom);
    const double diff = std::abs(lhs - rhs);
    if (diff > worst) {
      worst = diff;
      worst_case = name;
    }
  };

  for (int i = 0; i < opt.domains; ++i) {
    Domain dom = Domain::whole_minus_leaves();
    if (i == 0) {
      dom = Domain::ball(centroid, nudged_ball(centroid) + 2.0 * scale);
    } else if (i % 2 == 1) {
      const Vector v = rng.unit_vector(k);
      dom = Domain::half_space(v, nudged_halfspace(v));
    } else {
      Vector c = centroid + 0.3 * scale * rng.unit_vector(k);
      dom = Domain::ball(c, nudged_ball(c));
    }

    compare("scaling", Deformation::scaling(centroid).restricted_to(dom), dom);
    compare("dilation",
            Deformation::dilation(rng.unit_vector(k), centroid).restricted_to(dom), dom);
    compare("translation", Deformation::translation(rng.unit_vector(k)).restricted_to(dom),
            dom);
    if (k >= 2) {
      Matrix g = Matrix::Zero(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = r + 1; c < k; ++c) {
          const double a = rng.gaussian();
          g(r, c) = a;
          g(c, r) = -a;
        }
      compare("rotation", Deformation::rotation(g, centroid).restricted_to(dom), dom);
    }
    try {
      compare("swelling", Deformation::swelling(swelling_center()).restricted_to(dom), dom);
    } catch (const GeometryError&) {
      // center placement failed for this draw; the other kinds still count
    }
    const Vector vc = rng.unit_vector(k);
    const double lc = nudged_halfspace(vc);
    const Domain chop_dom = Domain::half_space(vc, lc);
    compare("chopping", Deformation::chopping(vc, lc).restricted_to(chop_dom), chop_dom);
  }

  rep.measured = worst;
  rep.bound = 0.0;
  rep.detail = "worst deformation: " + (worst_case.empty() ? "none" : worst_case);
  return pass_fail(rep, worst, opt.tol_identity);
}

using CheckFn = CheckReport (*)(const Net&, const CheckOptions&);

struct CatalogRow {
  CatalogEntry entry;
  CheckFn fn;
  bool presupposes_balance;
};

const std::vector<CatalogRow>& catalog_rows() {
  static const std::vector<CatalogRow> rows = {
      {{"leaf_count_min", 0, "at least 2 leaves; 3 with a branching interior vertex"},
       check_leaf_count_min, false},
      {{"vertex_balance", 0, "interior unit vectors sum to zero"},
       check_vertex_balance, false},
      {{"length_identity", 0, "interior length equals the leaf anchor sum"},
       check_length_identity, true},
      {{"outer_radius_bound", 0, "interior length <= outer radius x leaf count"},
       check_outer_radius_bound, true},
      {{"leaf_sum_zero", 0, "leaf vectors sum to zero"}, check_leaf_sum_zero, true},
      {{"torque_zero", 0, "net torque of the leaf pulls vanishes"},
       check_torque_zero, true},
      {{"degree_bound_swelling", 0, "every interior valency <= leaf count"},
       check_degree_bound_swelling, true},
      {{"swelling_identity", 0,
        "radial-field identity with nonnegative middle term"},
       check_swelling_identity, true},
      {{"further_relation", 0, "differentiated dilation identity (vector form)"},
       check_further_relation, true},
      {{"cin_bound", 0, "entering current <= half the leaf count"},
       check_cin_bound, true},
      {{"cut_lemma", 0,
        "cut current constant between leaf projections and equal to the leaf flux"},
       check_cut_lemma, true},
      {{"degree_bound_current", 0, "every interior valency <= sqrt(k) x leaf count"},
       check_degree_bound_current, true},
      {{"isoperimetric", 0,
        "2L <= sqrt(sum of squared projection extents) x leaf count"},
       check_isoperimetric, true},
      {{"combinatorial", 0,
        "interior valency sum <= (2 + sqrt(sum D_v^2)) x leaf count"},
       check_combinatorial, true},
      {{"convex_hull", 0, "net lies in the convex hull of its leaves"},
       check_convex_hull, true},
      {{"face_convexity", 2, "leafless bounded faces are convex"},
       check_face_convexity, true},
      {{"lemma_1_2", 0, "interior variation equals the anchor flux on domains"},
       check_lemma_1_2, true},
  };
  return rows;
}

const CatalogRow* find_row(const std::string& id) {
  for (const auto& row : catalog_rows())
    if (row.entry.id == id) return &row;
  return nullptr;
}

}  // namespace

const std::vector<CatalogEntry>& check_catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (const auto& row : catalog_rows()) out.push_back(row.entry);
    return out;
  }();
  return entries;
}

bool check_exists(const std::string& id) { return find_row(id) != nullptr; }

namespace {

// A check that cannot even be evaluated (degenerate geometry blocks every
// seeded domain/direction) reports Skipped instead of aborting the caller.
CheckReport guarded(const CatalogRow& row, const Net& net, const CheckOptions& options) {
  try {
    return row.fn(net, options);
  } catch (const GeometryError& e) {
    CheckReport rep;
    return skipped(rep, std::string("geometry: ") + e.what());
  }
}

}  // namespace

CheckReport run_check(const Net& net, const std::string& check_id,
                      const CheckOptions& options) {
  const CatalogRow* row = find_row(check_id);
  if (!row) throw ValidationError("unknown check '" + check_id + "'");
  CheckReport rep;
  if (row->entry.required_k != 0 && net.dimension() != row->entry.required_k) {
    rep = skipped(rep, "requires k = " + std::to_string(row->entry.required_k));
  } else {
    rep = guarded(*row, net, options);
  }
  rep.id = check_id;
  return rep;
}

SuiteReport run_suite(const Net& net, const CheckOptions& options) {
  SuiteReport suite;
  bool balanced = true;
  for (const auto& row : catalog_rows()) {
    CheckReport rep;
    if (!balanced && row.presupposes_balance) {
      rep = skipped(rep,
                    "not asserted: the statement presupposes a balanced (critical) net");
    } else if (row.entry.required_k != 0 && net.dimension() != row.entry.required_k) {
      rep = skipped(rep, "requires k = " + std::to_string(row.entry.required_k));
    } else {
      rep = row.fn(net, options);
    }
    rep.id = row.entry.id;
    if (rep.id == "vertex_balance" && rep.status != CheckStatus::Pass) balanced = false;
    switch (rep.status) {
      case CheckStatus::Pass:
        ++suite.passed;
        break;
      case CheckStatus::Fail:
        ++suite.failed;
        break;
      case CheckStatus::Skipped:
        ++suite.skipped;
        break;
    }
    suite.reports.push_back(std::move(rep));
  }
  suite.all_applicable_pass = suite.failed == 0;
  return suite;
}

double distance_to_convex_hull(const std::vector<Vector>& points, const Vector& x) {
  if (points.empty()) throw ValidationError("distance_to_convex_hull: no points");
  const int n = static_cast<int>(points.size());
  if (n == 1) return (points[0] - x).norm();

  // Projection onto the hull: minimize |sum w_i p_i - x|^2 over the simplex
  // by toward/away steps with exact line search.
  std::vector<double> w(n, 1.0 / n);
  Vector c = Vector::Zero(x.size());
  for (int i = 0; i < n; ++i) c += w[i] * points[i];

  for (int it = 0; it < 100000; ++it) {
    const Vector g = c - x;  // half-gradient direction
    if (g.squaredNorm() < 1e-26) return 0.0;
    int s = 0, a = -1;
    double sbest = std::numeric_limits<double>::infinity();
    double abest = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double gi = g.dot(points[i]);
      if (gi < sbest) {
        sbest = gi;
        s = i;
      }
      if (w[i] > 0.0 && gi > abest) {
        abest = gi;
        a = i;
      }
    }
    const double gap = g.dot(c) - sbest;  // toward-gap
    if (gap <= 1e-24 + 1e-14 * g.squaredNorm()) break;
    const double away_gap = a >= 0 ? abest - g.dot(c) : -1.0;

    Vector dir;
    double gamma_max;
    int moved;
    bool away = away_gap > gap && w[a] < 1.0;
    if (away) {
      dir = c - points[a];
      gamma_max = w[a] / (1.0 - w[a]);
      moved = a;
    } else {
      dir = points[s] - c;
      gamma_max = 1.0;
      moved = s;
    }
    const double denom = dir.squaredNorm();
    if (denom < 1e-30) break;
    double gamma = std::clamp(-g.dot(dir) / denom, 0.0, gamma_max);
    if (gamma <= 0.0) break;
    if (away) {
      for (int i = 0; i < n; ++i) w[i] *= (1.0 + gamma);
      w[moved] -= gamma;
      if (w[moved] < 1e-18) w[moved] = 0.0;
    } else {
      for (int i = 0; i < n; ++i) w[i] *= (1.0 - gamma);
      w[moved] += gamma;
    }
    c += gamma * dir;
  }
  return (c - x).norm();
}

std::vector<Face> planar_faces(const Net& net) {
  if (net.dimension() != 2)
    throw ValidationError("planar_faces requires k = 2");

  // rotation system: outgoing half-edges sorted counterclockwise per vertex
  struct Half {
    int from, to;
  };
  std::vector<Half> halves;
  for (const auto& e : net.edges()) {
    halves.push_back({e[0], e[1]});
    halves.push_back({e[1], e[0]});
  }
  const int H = static_cast<int>(halves.size());
  std::vector<std::vector<int>> out_sorted(net.vertex_count());
  for (int h = 0; h < H; ++h) out_sorted[halves[h].from].push_back(h);
  std::vector<double> angle(H);
  for (int h = 0; h < H; ++h) {
    const Vector d = net.position(halves[h].to) - net.position(halves[h].from);
    angle[h] = std::atan2(d[1], d[0]);
  }
  for (auto& list : out_sorted)
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      if (angle[a] != angle[b]) return angle[a] < angle[b];
      return halves[a].to < halves[b].to;
    });
  std::map<std::pair<int, int>, int> half_index;
  for (int h = 0; h < H; ++h) half_index[{halves[h].from, halves[h].to}] = h;
  std::vector<int> pos_in_list(H);
  for (const auto& list : out_sorted)
    for (std::size_t i = 0; i < list.size(); ++i)
      pos_in_list[list[i]] = static_cast<int>(i);

  // next half-edge of the face: the clockwise predecessor of the reversal at
  // the head vertex (interior of the face stays on the left)
  auto next_half = [&](int h) {
    const int rev = half_index.at({halves[h].to, halves[h].from});
    const auto& list = out_sorted[halves[h].to];
    const int idx = pos_in_list[rev];
    return list[(idx + list.size() - 1) % list.size()];
  };

  std::vector<Face> faces;
  std::vector<bool> used(H, false);
  for (int h0 = 0; h0 < H; ++h0) {
    if (used[h0]) continue;
    Face face;
    int h = h0;
    do {
      used[h] = true;
      face.walk.push_back(halves[h].from);
      if (net.is_leaf(halves[h].from)) face.contains_leaf = true;
      h = next_half(h);
    } while (h != h0);
    const int m = static_cast<int>(face.walk.size());
    double area2 = 0.0;
    for (int i = 0; i < m; ++i) {
      const Vector& p = net.position(face.walk[i]);
      const Vector& q = net.position(face.walk[(i + 1) % m]);
      area2 += p[0] * q[1] - q[0] * p[1];
    }
    face.signed_area = 0.5 * area2;
    faces.push_back(std::move(face));
  }

  // Leaves of other components strictly inside a face also exempt it.
  for (auto& face : faces) {
    if (face.contains_leaf || face.signed_area <= 0.0) continue;
    for (int leaf : net.leaves()) {
      bool on_walk = false;
      for (int v : face.walk)
        if (v == leaf) on_walk = true;
      if (on_walk) continue;
      // winding number of the walk around the leaf position
      const Vector& p = net.position(leaf);
      double winding = 0.0;
      const int m = static_cast<int>(face.walk.size());
      bool on_boundary = false;
      for (int i = 0; i < m; ++i) {
        Vector a = net.position(face.walk[i]) - p;
        Vector b = net.position(face.walk[(i + 1) % m]) - p;
        const double na = a.norm(), nb = b.norm();
        if (na < 1e-12 || nb < 1e-12) {
          on_boundary = true;
          break;
        }
        winding += std::atan2(a[0] * b[1] - b[0] * a[1], a.dot(b));
      }
      if (on_boundary || std::abs(winding) > M_PI) {
        face.contains_leaf = true;
        break;
      }
    }
  }
  return faces;
}

}  // namespace critnet
