#include "critnet/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace critnet {

namespace {

constexpr double kExadiamSlopeStep = 1e-3;
constexpr double kExadiamLeafLength = 0.25;

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

std::string grid_id(const std::vector<int>& coords) {
  std::string id = "g";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) id += '_';
    id += std::to_string(coords[i]);
  }
  return id;
}

}  // namespace

GeneratedNet grid_net(int d, int n, int vertex_budget) {
  if (d < 1 || n < 1) throw ValidationError("grid_net requires d >= 1 and n >= 1");
  double count = 1.0;
  for (int i = 0; i < d; ++i) count *= (n + 1);
  if (count > vertex_budget)
    throw ValidationError("grid_net: (n+1)^d = " + format_double(count) +
                          " exceeds the vertex budget of " + std::to_string(vertex_budget));

  std::vector<VertexSpec> verts;
  std::vector<std::pair<std::string, std::string>> edges;

  const int total = static_cast<int>(count);
  std::vector<int> coords(d, 0);
  for (int idx = 0; idx < total; ++idx) {
    int rem = idx;
    for (int i = 0; i < d; ++i) {
      coords[i] = rem % (n + 1);
      rem /= (n + 1);
    }
    Vector p(d);
    for (int i = 0; i < d; ++i) p[i] = coords[i];
    const std::string id = grid_id(coords);
    verts.push_back({id, p, false});

    for (int axis = 0; axis < d; ++axis) {
      if (coords[axis] < n) {
        auto nb = coords;
        nb[axis] += 1;
        edges.emplace_back(id, grid_id(nb));
      } else {
        Vector lp = p;
        lp[axis] += 1.0;
        const std::string lid = "l_" + id + "_" + std::to_string(axis) + "p";
        verts.push_back({lid, lp, true});
        edges.emplace_back(id, lid);
      }
      if (coords[axis] == 0) {
        Vector lp = p;
        lp[axis] -= 1.0;
        const std::string lid = "l_" + id + "_" + std::to_string(axis) + "m";
        verts.push_back({lid, lp, true});
        edges.emplace_back(id, lid);
      }
    }
  }

  GeneratedNet out;
  out.net = Net::build(d, std::move(verts), edges);
  double leaf_exact = 2.0 * d;
  for (int i = 0; i < d - 1; ++i) leaf_exact *= (n + 1);
  out.meta["leaf_count"] = leaf_exact;
  out.meta["interior_count"] = count;
  out.meta["interior_degree_sum"] = 2.0 * d * count;
  out.meta["interior_length"] = d * n * count / (n + 1);
  out.meta["dv_generic"] = static_cast<double>(d) * n;
  out.meta["leaf_count_leading_order"] = 2.0 * d * std::pow(n, d - 1);
  return out;
}

GeneratedNet hexagon_net(int rows, int cols, int vertex_budget) {
  if (rows < 1 || cols < 1) throw ValidationError("hexagon_net requires rows, cols >= 1");
  if (6.0 * rows * cols > vertex_budget)
    throw ValidationError("hexagon_net exceeds the vertex budget");

  const double root3 = std::sqrt(3.0);
  // Integer key lattice: x is a multiple of 1/2, y of sqrt(3)/2.
  auto key_of = [&](double x, double y) {
    return std::pair<long, long>(std::lround(2.0 * x), std::lround(2.0 * y / root3));
  };

  std::map<std::pair<long, long>, int> index;
  std::vector<Vector> pos;
  std::set<std::array<int, 2>> edge_set;

  auto vertex_at = [&](double x, double y) {
    const auto key = key_of(x, y);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(pos.size());
    index[key] = id;
    // snap to the exact lattice to keep shared corners bit-identical
    pos.push_back(vec2(0.5 * key.first, 0.5 * root3 * key.second));
    return id;
  };

  for (int col = 0; col < cols; ++col) {
    for (int row = 0; row < rows; ++row) {
      const double cx = 1.5 * col;
      const double cy = root3 * row + (col % 2 ? 0.5 * root3 : 0.0);
      int corner[6];
      for (int m = 0; m < 6; ++m) {
        const double a = M_PI / 3.0 * m;
        corner[m] = vertex_at(cx + std::cos(a), cy + std::sin(a));
      }
      for (int m = 0; m < 6; ++m) {
        int a = corner[m], b = corner[(m + 1) % 6];
        if (a > b) std::swap(a, b);
        edge_set.insert({a, b});
      }
    }
  }

  std::vector<std::vector<int>> adj(pos.size());
  for (const auto& e : edge_set) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }

  std::vector<VertexSpec> verts;
  std::vector<std::pair<std::string, std::string>> edges;
  auto hid = [](int i) { return "h" + std::to_string(i); };
  for (std::size_t i = 0; i < pos.size(); ++i) verts.push_back({hid(i), pos[i], false});
  for (const auto& e : edge_set) edges.emplace_back(hid(e[0]), hid(e[1]));

  int leaf_count = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (adj[i].size() == 3) continue;
    if (adj[i].size() != 2)
      throw GeometryError("hexagon_net: unexpected tiling degree " +
                          std::to_string(adj[i].size()));
    // Two unit edges at 120 degrees; the missing third direction is exactly
    // minus their sum (which already has unit norm).
    Vector u = Vector::Zero(2);
    for (int nb : adj[i]) u += (pos[nb] - pos[i]).normalized();
    Vector dir = -u;
    const std::string lid = "l_" + hid(static_cast<int>(i));
    verts.push_back({lid, pos[i] + dir, true});
    edges.emplace_back(hid(static_cast<int>(i)), lid);
    ++leaf_count;
  }

  GeneratedNet out;
  out.net = Net::build(2, std::move(verts), edges);
  out.meta["leaf_count"] = leaf_count;
  out.meta["interior_count"] = static_cast<double>(pos.size());
  out.meta["interior_length"] = static_cast<double>(edge_set.size());
  return out;
}

namespace {

struct PreparedLine {
  Vector point;
  Vector dir;  // unit
};

std::vector<PreparedLine> prepare_lines(const std::vector<Line>& lines) {
  std::vector<PreparedLine> out;
  for (const auto& l : lines) {
    if (l.point.size() != 2 || l.direction.size() != 2)
      throw ValidationError("line_arrangement_net lines must be planar");
    const double n = l.direction.norm();
    if (n < 1e-12) throw ValidationError("line direction must be nonzero");
    out.push_back({l.point, l.direction / n});
  }
  return out;
}

}  // namespace

GeneratedNet line_arrangement_net(const std::vector<Line>& lines, double disk_radius) {
  if (lines.empty()) throw ValidationError("line_arrangement_net needs at least one line");
  if (disk_radius <= 0.0) throw ValidationError("disk radius must be positive");
  const auto ls = prepare_lines(lines);
  const int n = static_cast<int>(ls.size());

  // Pairwise crossings; validate geometry.
  std::map<std::pair<int, int>, Vector> crossing;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double cross = ls[i].dir[0] * ls[j].dir[1] - ls[i].dir[1] * ls[j].dir[0];
      if (std::abs(cross) < 1e-6)
        throw GeometryError("lines " + std::to_string(i) + " and " + std::to_string(j) +
                            " are parallel within tolerance");
      const Vector dp = ls[j].point - ls[i].point;
      const double t = (dp[0] * ls[j].dir[1] - dp[1] * ls[j].dir[0]) / cross;
      Vector q = ls[i].point + t * ls[i].dir;
      if (q.norm() > disk_radius - 1e-6)
        throw GeometryError("crossing of lines " + std::to_string(i) + " and " +
                            std::to_string(j) + " lies outside the disk");
      crossing[{i, j}] = q;
    }
  }
  for (auto a = crossing.begin(); a != crossing.end(); ++a) {
    auto b = a;
    for (++b; b != crossing.end(); ++b) {
      if ((a->second - b->second).norm() < 1e-9)
        throw GeometryError("triple point detected: crossings of lines (" +
                            std::to_string(a->first.first) + "," +
                            std::to_string(a->first.second) + ") and (" +
                            std::to_string(b->first.first) + "," +
                            std::to_string(b->first.second) + ") coincide");
    }
  }

  std::vector<VertexSpec> verts;
  std::vector<std::pair<std::string, std::string>> edges;
  auto xid = [](int i, int j) { return "x" + std::to_string(i) + "_" + std::to_string(j); };
  std::set<std::string> declared;

  for (int i = 0; i < n; ++i) {
    // chain along line i: entry leaf, crossings sorted by parameter, exit leaf
    std::vector<std::pair<double, std::string>> stops;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto key = std::minmax(i, j);
      const Vector& q = crossing.at({key.first, key.second});
      stops.emplace_back((q - ls[i].point).dot(ls[i].dir),
                         xid(key.first, key.second));
      if (!declared.count(xid(key.first, key.second))) {
        declared.insert(xid(key.first, key.second));
        verts.push_back({xid(key.first, key.second), q, false});
      }
    }
    // circle crossings: |p + t u| = R
    const double pu = ls[i].point.dot(ls[i].dir);
    const double disc = pu * pu - (ls[i].point.squaredNorm() - disk_radius * disk_radius);
    if (disc <= 0.0)
      throw GeometryError("line " + std::to_string(i) + " misses the disk");
    const double sq = std::sqrt(disc);
    const std::string la = "l" + std::to_string(i) + "a";
    const std::string lb = "l" + std::to_string(i) + "b";
    verts.push_back({la, ls[i].point + (-pu - sq) * ls[i].dir, true});
    verts.push_back({lb, ls[i].point + (-pu + sq) * ls[i].dir, true});
    stops.emplace_back(-pu - sq, la);
    stops.emplace_back(-pu + sq, lb);
    std::sort(stops.begin(), stops.end());
    for (std::size_t s = 0; s + 1 < stops.size(); ++s)
      edges.emplace_back(stops[s].second, stops[s + 1].second);
  }

  GeneratedNet out;
  out.net = Net::build(2, std::move(verts), edges);
  out.meta["crossing_count"] = static_cast<double>(crossing.size());
  out.meta["leaf_count"] = 2.0 * n;
  return out;
}

GeneratedNet line_arrangement_net(int count, double disk_radius, std::uint64_t seed) {
  if (count < 1) throw ValidationError("line count must be >= 1");
  Rng rng(seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Line> lines;
    for (int i = 0; i < count; ++i) {
      const double angle =
          M_PI * (i + 0.2 + 0.6 * rng.uniform()) / count;
      Vector dir = vec2(std::cos(angle), std::sin(angle));
      Vector normal = vec2(-dir[1], dir[0]);
      const double offset = 0.15 * disk_radius * (2.0 * rng.uniform() - 1.0);
      lines.push_back({offset * normal, dir});
    }
    try {
      auto out = line_arrangement_net(lines, disk_radius);
      out.meta["seed"] = static_cast<double>(seed);
      return out;
    } catch (const GeometryError&) {
      continue;  // re-draw deterministically
    }
  }
  throw GeometryError("could not place a generic line arrangement for this seed");
}

GeneratedNet exadiam_net(int n, int k) {
  if (n < 1 || k < 0) throw ValidationError("exadiam_net requires n >= 1, k >= 0");
  GeneratedNet base = grid_net(2, n);
  base.meta["c0"] = 4.0;
  base.meta["dv_target"] = 2.0 * (k + 1) * n;
  base.meta["leaf_count"] = base.meta["leaf_count"] + 2.0 * k;
  if (k == 0) return base;

  // Deterministic offset search: each line y = slope*x + b must cross every
  // staircase edge with comfortable margins, avoid lattice points, stay clear
  // of the other lines inside the net, and keep its short leaf stubs away
  // from the grid's leaf rays.
  std::vector<double> slope(k), offset(k);
  const double margin = 1e-3;
  const double spacing = std::max(0.02, 2.0 * (n + 1) * kExadiamSlopeStep * k);
  for (int i = 0; i < k; ++i) {
    slope[i] = 1.0 + (i + 1) * kExadiamSlopeStep;
    bool found = false;
    const double start = -0.30 - i * spacing;
    for (int step = 0; step < 2000 && !found; ++step) {
      const double b = start - step * 1e-4;
      bool ok = true;
      for (int m = 0; m < n && ok; ++m) {
        const double xh = (m - b) / slope[i];
        if (xh <= m + margin || xh >= m + 1 - margin) ok = false;
      }
      for (int m = 1; m <= n && ok; ++m) {
        const double yv = slope[i] * m + b;
        if (yv <= m - 1 + margin || yv >= m - margin) ok = false;
      }
      if (ok) {
        const double xh0 = -b / slope[i];
        const double yvn = slope[i] * n + b;
        if (xh0 < 0.25 || xh0 > 0.75) ok = false;
        if (yvn < n - 0.75 || yvn > n - 0.25) ok = false;
      }
      const double norm = std::hypot(slope[i], 1.0);
      for (int ax = 0; ax <= n && ok; ++ax)
        for (int ay = 0; ay <= n && ok; ++ay)
          if (std::abs(slope[i] * ax - ay + b) / norm < 1e-6) ok = false;
      for (int j = 0; j < i && ok; ++j) {
        const double xstar = (offset[j] - b) / (slope[i] - slope[j]);
        if (std::abs(xstar) <= n + 1) ok = false;
        for (int m = 0; m < n && ok; ++m)
          if (std::abs((m - b) / slope[i] - (m - offset[j]) / slope[j]) < 2e-3) ok = false;
        for (int m = 1; m <= n && ok; ++m)
          if (std::abs((slope[i] - slope[j]) * m + b - offset[j]) < 2e-3) ok = false;
      }
      if (ok) {
        offset[i] = b;
        found = true;
      }
    }
    if (!found)
      throw GeometryError(
          "exadiam_net: no admissible offset for line " + std::to_string(i + 1) +
          " (n=" + std::to_string(n) + ", k=" + std::to_string(k) +
          "); every candidate failed a staircase-crossing or clearance constraint");
  }

  // Rebuild the vertex/edge lists from the base grid, subdividing staircase
  // edges at the line crossings and adding the line chains.
  std::vector<VertexSpec> verts;
  std::vector<std::pair<std::string, std::string>> edges;
  std::set<std::pair<std::string, std::string>> staircase;
  auto gid2 = [](int x, int y) { return grid_id({x, y}); };
  for (int m = 0; m < n; ++m) {
    staircase.insert({gid2(m, m), gid2(m + 1, m)});
    staircase.insert({gid2(m + 1, m), gid2(m + 1, m + 1)});
  }

  const Net& g = base.net;
  for (int v = 0; v < g.vertex_count(); ++v)
    verts.push_back({g.id(v), g.position(v), g.is_leaf(v)});
  for (const auto& e : g.edges()) {
    std::pair<std::string, std::string> key{g.id(e[0]), g.id(e[1])};
    std::pair<std::string, std::string> rkey{key.second, key.first};
    if (!staircase.count(key) && !staircase.count(rkey)) edges.emplace_back(key.first, key.second);
  }

  struct Crossing {
    double along;  // x-coordinate, monotone along each line
    std::string id;
  };
  // crossings per staircase edge (keyed by its id pair) and per line
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<double, std::string>>>
      edge_cross;
  std::vector<std::vector<Crossing>> line_cross(k);

  for (int i = 0; i < k; ++i) {
    for (int m = 0; m < n; ++m) {
      const double xh = (m - offset[i]) / slope[i];
      const std::string cid = "c" + std::to_string(i) + "_h" + std::to_string(m);
      verts.push_back({cid, vec2(xh, m), false});
      edge_cross[{gid2(m, m), gid2(m + 1, m)}].push_back({xh, cid});
      line_cross[i].push_back({xh, cid});
      const double yv = slope[i] * (m + 1) + offset[i];
      const std::string vid = "c" + std::to_string(i) + "_v" + std::to_string(m + 1);
      verts.push_back({vid, vec2(m + 1, yv), false});
      edge_cross[{gid2(m + 1, m), gid2(m + 1, m + 1)}].push_back({yv, vid});
      line_cross[i].push_back({static_cast<double>(m + 1), vid});
    }
  }

  for (int m = 0; m < n; ++m) {
    auto subdivide = [&](const std::string& a, const std::string& b, bool horizontal) {
      auto& cr = edge_cross[{a, b}];
      std::sort(cr.begin(), cr.end());
      std::string prev = a;
      for (const auto& [t, cid] : cr) {
        edges.emplace_back(prev, cid);
        prev = cid;
      }
      edges.emplace_back(prev, b);
      (void)horizontal;
    };
    subdivide(gid2(m, m), gid2(m + 1, m), true);
    subdivide(gid2(m + 1, m), gid2(m + 1, m + 1), false);
  }

  for (int i = 0; i < k; ++i) {
    auto& cr = line_cross[i];
    std::sort(cr.begin(), cr.end(),
              [](const Crossing& a, const Crossing& b) { return a.along < b.along; });
    const double norm = std::hypot(1.0, slope[i]);
    Vector u = vec2(1.0 / norm, slope[i] / norm);
    Vector first = vec2(cr.front().along,
                        slope[i] * cr.front().along + offset[i]);
    Vector last = vec2(cr.back().along, slope[i] * cr.back().along + offset[i]);
    const std::string la = "ll" + std::to_string(i) + "a";
    const std::string lb = "ll" + std::to_string(i) + "b";
    verts.push_back({la, first - kExadiamLeafLength * u, true});
    verts.push_back({lb, last + kExadiamLeafLength * u, true});
    std::string prev = la;
    for (const auto& c : cr) {
      edges.emplace_back(prev, c.id);
      prev = c.id;
    }
    edges.emplace_back(prev, lb);
  }

  GeneratedNet out;
  out.net = Net::build(2, std::move(verts), edges);
  out.meta["c0"] = 4.0;
  out.meta["dv_target"] = 2.0 * (k + 1) * n;
  out.meta["leaf_count"] = base.meta["leaf_count"];
  out.meta["leaf_count_leading_order"] = 4.0 * n + 2.0 * k;
  out.meta["interior_count"] = out.net.interior_count();
  double degree_sum = 0.0;
  for (int v : out.net.interior()) degree_sum += out.net.degree(v);
  out.meta["interior_degree_sum"] = degree_sum;
  out.meta["interior_length"] = out.net.total_interior_length();
  return out;
}

GeneratedNet fixture(FixtureTag tag) {
  std::vector<VertexSpec> verts;
  std::vector<std::pair<std::string, std::string>> edges;
  GeneratedNet out;
  switch (tag) {
    case FixtureTag::Cross: {
      verts.push_back({"o", vec2(0, 0), false});
      verts.push_back({"e", vec2(1, 0), true});
      verts.push_back({"n", vec2(0, 1), true});
      verts.push_back({"w", vec2(-1, 0), true});
      verts.push_back({"s", vec2(0, -1), true});
      for (const char* l : {"e", "n", "w", "s"}) edges.emplace_back("o", l);
      break;
    }
    case FixtureTag::Fermat3: {
      verts.push_back({"o", vec2(0, 0), false});
      const double angles[3] = {M_PI / 2.0, M_PI * 7.0 / 6.0, M_PI * 11.0 / 6.0};
      for (int i = 0; i < 3; ++i) {
        verts.push_back({"l" + std::to_string(i),
                         vec2(std::cos(angles[i]), std::sin(angles[i])), true});
        edges.emplace_back("o", "l" + std::to_string(i));
      }
      break;
    }
    case FixtureTag::Steiner4: {
      const double s = 1.0 - 1.0 / std::sqrt(3.0);
      verts.push_back({"p", vec2(s, 0), false});
      verts.push_back({"q", vec2(-s, 0), false});
      verts.push_back({"ne", vec2(1, 1), true});
      verts.push_back({"se", vec2(1, -1), true});
      verts.push_back({"nw", vec2(-1, 1), true});
      verts.push_back({"sw", vec2(-1, -1), true});
      edges.emplace_back("p", "q");
      edges.emplace_back("p", "ne");
      edges.emplace_back("p", "se");
      edges.emplace_back("q", "nw");
      edges.emplace_back("q", "sw");
      out.meta["steiner_offset"] = s;
      break;
    }
  }
  out.net = Net::build(2, std::move(verts), edges);
  return out;
}

GeneratedNet fixture(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(), ::toupper);
  if (up == "CROSS") return fixture(FixtureTag::Cross);
  if (up == "FERMAT3") return fixture(FixtureTag::Fermat3);
  if (up == "STEINER4") return fixture(FixtureTag::Steiner4);
  throw ValidationError("unknown fixture '" + name + "' (expected CROSS, FERMAT3 or STEINER4)");
}

}  // namespace critnet
