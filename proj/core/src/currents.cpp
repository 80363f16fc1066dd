#include "critnet/currents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "critnet/criticality.hpp"

namespace critnet {

namespace {

constexpr double kZeroCurrent = 1e-12;
constexpr double kPerpendicular = 1e-9;

Vector require_unit(const Vector& v) {
  if (std::abs(v.norm() - 1.0) > 1e-12)
    throw ValidationError("direction must be a unit vector (|v| = " +
                          format_double(v.norm()) + ")");
  return v;
}

}  // namespace

double CurrentProfile::current(const Net& net, int x, int y) const {
  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    const auto& e = net.edges()[i];
    if (e[0] == x && e[1] == y) return edge_current[i];
    if (e[0] == y && e[1] == x) return -edge_current[i];
  }
  throw ValidationError("no edge {" + net.id(x) + "," + net.id(y) + "}");
}

CurrentProfile current_profile(const Net& net, const Vector& v) {
  CurrentProfile p;
  p.direction = require_unit(v);
  p.edge_current.reserve(net.edges().size());
  for (const auto& e : net.edges())
    p.edge_current.push_back(net.edge_vector(e[0], e[1]).unit.dot(v));

  double abs_sum = 0.0;
  for (int leaf : net.leaves()) {
    const double c = net.leaf_vector(leaf).dot(v);  // current toward the leaf
    abs_sum += std::abs(c);
    if (std::abs(c) <= kZeroCurrent)
      p.leaves_zero.push_back(leaf);
    else if (c > 0.0)
      p.leaves_outflow.push_back(leaf);
    else
      p.leaves_inflow.push_back(leaf);
  }
  p.c_in = 0.5 * abs_sum;
  return p;
}

double kirchhoff_residual(const Net& net, const Vector& v) {
  require_unit(v);
  double worst = 0.0;
  for (int x : net.interior()) {
    double sum = 0.0;
    for (int y : net.neighbors(x)) sum += net.edge_vector(x, y).unit.dot(v);
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

CinConsistency cin_consistency(const Net& net, const Vector& v) {
  const CurrentProfile p = current_profile(net, v);
  CinConsistency r{0.0, 0.0, p.c_in, 0.5 * net.leaf_count()};
  for (int leaf : p.leaves_outflow) r.outflow_sum += net.leaf_vector(leaf).dot(v);
  for (int leaf : p.leaves_inflow) r.inflow_sum_neg -= net.leaf_vector(leaf).dot(v);
  return r;
}

CutScan cut_scan(const Net& net, const Vector& v) {
  CutScan scan;
  scan.direction = require_unit(v);
  const CurrentProfile profile = current_profile(net, v);
  scan.c_in = profile.c_in;

  const int n = net.vertex_count();
  std::vector<double> proj(n);
  for (int i = 0; i < n; ++i) proj[i] = net.position(i).dot(v);

  // Breakpoints: vertex projections merged at 1e-9 (slabs thinner than the
  // merge window disappear).
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return proj[a] < proj[b]; });
  for (int i = 0; i < n;) {
    int j = i;
    double lo = proj[order[i]];
    bool has_leaf = false;
    double sum = 0.0;
    while (j < n && proj[order[j]] - lo <= 1e-9) {
      has_leaf |= net.is_leaf(order[j]);
      sum += proj[order[j]];
      lo = std::max(lo, proj[order[j]]);
      ++j;
    }
    scan.breakpoints.push_back(sum / (j - i));
    scan.breakpoint_has_leaf.push_back(has_leaf);
    i = j;
  }

  auto cut_current = [&](double lambda) {
    double sum = 0.0;
    for (std::size_t i = 0; i < net.edges().size(); ++i) {
      const auto& e = net.edges()[i];
      const double pa = proj[e[0]], pb = proj[e[1]];
      if ((pa < lambda && pb > lambda))
        sum += profile.edge_current[i];
      else if (pb < lambda && pa > lambda)
        sum -= profile.edge_current[i];
    }
    return sum;
  };
  auto leaf_flux_above = [&](double lambda) {
    double sum = 0.0;
    for (int leaf : net.leaves())
      if (proj[leaf] > lambda) sum += net.leaf_vector(leaf).dot(v);
    return sum;
  };

  const int m = static_cast<int>(scan.breakpoints.size());
  for (int s = 0; s <= m; ++s) {
    Slab slab;
    slab.lo = s == 0 ? -std::numeric_limits<double>::infinity() : scan.breakpoints[s - 1];
    slab.hi = s == m ? std::numeric_limits<double>::infinity() : scan.breakpoints[s];
    double mid;
    if (s == 0)
      mid = scan.breakpoints.front() - 1.0;
    else if (s == m)
      mid = scan.breakpoints.back() + 1.0;
    else
      mid = 0.5 * (slab.lo + slab.hi);
    slab.current = cut_current(mid);
    slab.leaf_flux = leaf_flux_above(mid);
    slab.lower_is_leaf = s > 0 && scan.breakpoint_has_leaf[s - 1];
    scan.max_flux_mismatch =
        std::max(scan.max_flux_mismatch, std::abs(slab.current - slab.leaf_flux));
    scan.max_over_cin =
        std::max(scan.max_over_cin, std::abs(slab.current) - scan.c_in);
    scan.slabs.push_back(slab);
  }
  for (int s = 1; s <= m; ++s) {
    if (scan.breakpoint_has_leaf[s - 1]) continue;
    scan.max_interior_jump =
        std::max(scan.max_interior_jump,
                 std::abs(scan.slabs[s].current - scan.slabs[s - 1].current));
  }
  return scan;
}

OrientedPath longest_oriented_path(const Net& net, const Vector& v) {
  require_unit(v);
  const int n = net.vertex_count();
  std::vector<double> proj(n);
  for (int i = 0; i < n; ++i) proj[i] = net.position(i).dot(v);

  // pruned net: interior vertices and interior-interior edges only
  std::vector<std::pair<int, int>> oriented;  // low-potential -> high-potential
  for (const auto& e : net.edges()) {
    if (net.is_leaf(e[0]) || net.is_leaf(e[1])) continue;
    const double c = net.edge_vector(e[0], e[1]).unit.dot(v);
    if (std::abs(c) <= kPerpendicular)
      throw GeometryError("edge {" + net.id(e[0]) + "," + net.id(e[1]) +
                          "} is perpendicular to the direction; perturb v and retry");
    oriented.emplace_back(c > 0.0 ? e[0] : e[1], c > 0.0 ? e[1] : e[0]);
  }

  std::vector<int> order;
  order.reserve(net.interior().size());
  for (int i : net.interior()) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return proj[a] < proj[b]; });

  // incoming adjacency, then one DP pass in potential order
  std::vector<std::vector<int>> incoming(n);
  for (const auto& [a, b] : oriented) incoming[b].push_back(a);
  std::vector<int> best(n, 0), pred(n, -1);
  OrientedPath path;
  int best_end = -1;
  for (int x : order) {
    for (int a : incoming[x]) {
      if (best[a] + 1 > best[x]) {
        best[x] = best[a] + 1;
        pred[x] = a;
      }
    }
    if (best_end == -1 || best[x] > best[best_end]) best_end = x;
  }
  if (best_end != -1) {
    path.length = best[best_end];
    for (int x = best_end; x != -1; x = pred[x]) path.vertices.push_back(x);
    std::reverse(path.vertices.begin(), path.vertices.end());
  }
  return path;
}

OrientedPath longest_oriented_path_perturbed(const Net& net, Vector v,
                                             std::uint64_t seed, int max_retries,
                                             Vector* direction_used) {
  Rng rng(seed);
  for (int attempt = 0;; ++attempt) {
    try {
      OrientedPath p = longest_oriented_path(net, v);
      if (direction_used) *direction_used = v;
      return p;
    } catch (const GeometryError&) {
      if (attempt >= max_retries) throw;
      // rotate by 1e-4 radians in a seeded random plane through v
      Vector u = rng.unit_vector(net.dimension());
      u -= u.dot(v) * v;
      const double n = u.norm();
      if (n < 1e-9) continue;
      u /= n;
      v = std::cos(1e-4) * v + std::sin(1e-4) * u;
      v.normalize();
    }
  }
}

EdgeFunction EdgeFunction::from_current(const Net& net, const CurrentProfile& p) {
  EdgeFunction g;
  for (std::size_t i = 0; i < net.edges().size(); ++i)
    g.set_antisymmetric(net.edges()[i][0], net.edges()[i][1], p.edge_current[i]);
  return g;
}

EdgeFunction EdgeFunction::gradient(const Net& net, const std::vector<double>& h) {
  if (h.size() != static_cast<std::size_t>(net.vertex_count()))
    throw ValidationError("gradient: potential size mismatch");
  EdgeFunction g;
  for (const auto& e : net.edges())
    g.set_antisymmetric(e[0], e[1], h[e[1]] - h[e[0]]);
  return g;
}

double EdgeFunction::at(int x, int y) const {
  auto it = vals_.find({x, y});
  return it == vals_.end() ? 0.0 : it->second;
}

std::vector<double> discrete_divergence(const Net& net, const EdgeFunction& g,
                                        double antisymmetry_tol) {
  for (const auto& e : net.edges()) {
    const double fwd = g.at(e[0], e[1]);
    const double bwd = g.at(e[1], e[0]);
    if (std::abs(fwd + bwd) > antisymmetry_tol)
      throw ValidationError("edge function is not antisymmetric on {" +
                            net.id(e[0]) + "," + net.id(e[1]) + "}: " +
                            format_double(fwd) + " vs " + format_double(bwd));
  }
  std::vector<double> div(net.vertex_count(), 0.0);
  for (int x = 0; x < net.vertex_count(); ++x)
    for (int y : net.neighbors(x)) div[x] += g.at(y, x) - g.at(x, y);
  return div;
}

RectanglePacking rectangle_packing(const Net& net, const Vector& v) {
  if (net.dimension() != 2)
    throw ValidationError("rectangle_packing requires a planar net (k = 2)");
  RectanglePacking pack;
  pack.direction = require_unit(v);
  const CurrentProfile profile = current_profile(net, v);
  pack.c_in = profile.c_in;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int x : net.interior()) {
    const double p = net.position(x).dot(v);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  pack.spread = net.interior().empty() ? 0.0 : hi - lo;
  pack.bound = pack.c_in * pack.spread;

  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    const auto& e = net.edges()[i];
    if (net.is_leaf(e[0]) || net.is_leaf(e[1])) continue;
    PackedRect r;
    r.edge_index = static_cast<int>(i);
    r.width = std::abs(profile.edge_current[i]);
    const double pa = net.position(e[0]).dot(v), pb = net.position(e[1]).dot(v);
    r.pot_lo = std::min(pa, pb);
    r.pot_hi = std::max(pa, pb);
    r.height = r.pot_hi - r.pot_lo;
    r.x_offset = 0.0;
    pack.area_sum += r.width * r.height;
    pack.rects.push_back(r);
  }

  // Greedy left-to-right placement per potential band (presentation only;
  // the area inequality above is the exact invariant).
  std::vector<double> bands;  // interior breakpoints
  for (int x : net.interior()) bands.push_back(net.position(x).dot(v));
  std::sort(bands.begin(), bands.end());
  bands.erase(std::unique(bands.begin(), bands.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              bands.end());
  std::vector<double> occupied(bands.empty() ? 0 : bands.size() - 1, 0.0);
  std::vector<int> idx(pack.rects.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    const auto& ra = pack.rects[a];
    const auto& rb = pack.rects[b];
    if (ra.pot_lo != rb.pot_lo) return ra.pot_lo < rb.pot_lo;
    if (ra.pot_hi != rb.pot_hi) return ra.pot_hi < rb.pot_hi;
    return ra.edge_index < rb.edge_index;
  });
  for (int i : idx) {
    PackedRect& r = pack.rects[i];
    double x_off = 0.0;
    for (std::size_t b = 0; b + 1 < bands.size(); ++b) {
      const double mid = 0.5 * (bands[b] + bands[b + 1]);
      if (mid > r.pot_lo && mid < r.pot_hi) x_off = std::max(x_off, occupied[b]);
    }
    r.x_offset = x_off;
    for (std::size_t b = 0; b + 1 < bands.size(); ++b) {
      const double mid = 0.5 * (bands[b] + bands[b + 1]);
      if (mid > r.pot_lo && mid < r.pot_hi) occupied[b] = x_off + r.width;
    }
  }
  return pack;
}

}  // namespace critnet
