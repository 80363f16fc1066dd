#pragma once

#include <map>
#include <string>
#include <vector>

#include "critnet/net.hpp"

namespace critnet {

/// A generated net plus the generator's exact counts (leaf count, interior
/// degree sum, corner corrections, target path lengths, ...).
struct GeneratedNet {
  Net net;
  std::map<std::string, double> meta;
};

/// An infinite line p + t*u in the plane.
struct Line {
  Vector point;
  Vector direction;  // normalized at use
};

/// Guard against accidentally huge lattices.
inline constexpr int kDefaultVertexBudget = 1'000'000;

/// Unit-cube packing of [0,n]^d: lattice interior vertices, unit lattice
/// edges, and one outward unit leaf ray per missing axis direction at the
/// boundary. Exactly balanced at every interior vertex.
GeneratedNet grid_net(int d, int n, int vertex_budget = kDefaultVertexBudget);

/// Honeycomb of unit-side regular hexagons (flat-top, first hexagon centered
/// at the origin), rows x cols. Boundary vertices get the outward leaf ray
/// that completes the three-way balance.
GeneratedNet hexagon_net(int rows, int cols, int vertex_budget = kDefaultVertexBudget);

/// Arrangement of pairwise non-parallel lines clipped to a disk of radius R:
/// degree-4 vertices at the pairwise crossings, leaves on the circle.
GeneratedNet line_arrangement_net(const std::vector<Line>& lines, double disk_radius);

/// Seeded generic line arrangement: `count` lines in general position whose
/// crossings all fall well inside the disk.
GeneratedNet line_arrangement_net(int count, double disk_radius, std::uint64_t seed);

/// grid_net(2, n) plus k near-diagonal lines, each crossing every edge of the
/// monotone staircase path from (0,0) to (n,n). Crossings become degree-4
/// vertices; meta records the corner correction and the longest-path target
/// 2(k+1)n.
GeneratedNet exadiam_net(int n, int k);

enum class FixtureTag { Cross, Fermat3, Steiner4 };

/// Canonical closed-form fixtures, exactly balanced:
///   CROSS    leaves (+-1,0),(0,+-1) joined at the origin
///   FERMAT3  leaves at 90/210/330 degrees on the unit circle + origin
///   STEINER4 leaves (+-1,+-1), Steiner points (+-(1-3^{-1/2}), 0)
GeneratedNet fixture(FixtureTag tag);
GeneratedNet fixture(const std::string& name);

}  // namespace critnet
