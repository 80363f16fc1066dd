#include <doctest.h>

#include <cmath>

#include "critnet/criticality.hpp"
#include "critnet/currents.hpp"
#include "critnet/generators.hpp"
#include "oracles.hpp"

using namespace critnet;
using oracle::v2;

namespace {

Net steiner4() { return fixture(FixtureTag::Steiner4).net; }
Net cross() { return fixture(FixtureTag::Cross).net; }

Net two_leaf_segment() {
  std::vector<VertexSpec> verts{{"a", v2(0, 0), {}}, {"b", v2(1, 0), {}}};
  return Net::build(2, verts, {{"a", "b"}});
}

}  // namespace

TEST_CASE("current profiles on the fixtures") {
  SUBCASE("cross, v = (1,0)") {
    const CurrentProfile p = current_profile(cross(), v2(1, 0));
    CHECK(std::abs(p.c_in - 1.0) <= 1e-15);
    CHECK(p.leaves_zero.size() == 2);
    CHECK(p.leaves_outflow.size() == 1);
    CHECK(p.leaves_inflow.size() == 1);
  }
  SUBCASE("steiner4, v = (1,0): central edge carries 1, stems carry 1/2") {
    const Net s = steiner4();
    const CurrentProfile p = current_profile(s, v2(1, 0));
    CHECK(std::abs(std::abs(p.current(s, s.index("q"), s.index("p"))) - 1.0) <= 1e-12);
    CHECK(std::abs(std::abs(p.current(s, s.index("p"), s.index("ne"))) - 0.5) <= 1e-12);
    CHECK(std::abs(p.c_in - 1.0) <= 1e-12);
  }
  SUBCASE("grid(2,2), v = (0,1): vertical edges carry 1") {
    const Net g = grid_net(2, 2).net;
    const CurrentProfile p = current_profile(g, v2(0, 1));
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      const double c = std::abs(p.edge_current[i]);
      CHECK((c <= 1e-12 || std::abs(c - 1.0) <= 1e-12));
    }
    CHECK(std::abs(p.c_in - 3.0) <= 1e-12);
  }
  SUBCASE("non-unit direction rejected") {
    CHECK_THROWS_AS(current_profile(cross(), v2(1, 1)), ValidationError);
  }
}

TEST_CASE("kirchhoff residuals") {
  Rng rng(9);
  SUBCASE("balanced fixture: 20 seeded directions") {
    const Net s = steiner4();
    for (int t = 0; t < 20; ++t)
      CHECK(kirchhoff_residual(s, rng.unit_vector(2)) <= 1e-10);
  }
  SUBCASE("perturbed fixture fails") {
    Net s = steiner4();
    std::vector<Vector> pos;
    for (int v = 0; v < s.vertex_count(); ++v) pos.push_back(s.position(v));
    pos[s.index("p")] += v2(0.01, 0);
    const Net bad = s.with_positions(pos);
    CHECK(kirchhoff_residual(bad, v2(1, 0)) > 1e-3);
  }
  SUBCASE("sign symmetry") {
    const Net g = grid_net(2, 2).net;
    const Vector v = rng.unit_vector(2);
    CHECK(kirchhoff_residual(g, v) == kirchhoff_residual(g, Vector(-v)));
  }
}

TEST_CASE("entering current consistency and bound") {
  SUBCASE("cross") {
    const CinConsistency c = cin_consistency(cross(), v2(1, 0));
    CHECK(std::abs(c.outflow_sum - 1.0) <= 1e-15);
    CHECK(std::abs(c.inflow_sum_neg - 1.0) <= 1e-15);
    CHECK(std::abs(c.c_in - 1.0) <= 1e-15);
    CHECK(c.bound == 2.0);
  }
  SUBCASE("grid(2,3), v = (1,0): four horizontal lines") {
    const CinConsistency c = cin_consistency(grid_net(2, 3).net, v2(1, 0));
    CHECK(std::abs(c.outflow_sum - 4.0) <= 1e-12);
    CHECK(std::abs(c.inflow_sum_neg - 4.0) <= 1e-12);
    CHECK(std::abs(c.c_in - 4.0) <= 1e-12);
  }
  SUBCASE("two-leaf segment along v is the sharp case") {
    const CinConsistency c = cin_consistency(two_leaf_segment(), v2(1, 0));
    CHECK(c.c_in == c.bound);
    CHECK(c.bound == 1.0);
  }
  SUBCASE("agreement for seeded directions on a critical net") {
    const Net h = hexagon_net(2, 2).net;
    Rng rng(31);
    for (int t = 0; t < 20; ++t) {
      const CinConsistency c = cin_consistency(h, rng.unit_vector(2));
      CHECK(std::abs(c.outflow_sum - c.c_in) <= 1e-9);
      CHECK(std::abs(c.inflow_sum_neg - c.c_in) <= 1e-9);
      CHECK(c.c_in <= c.bound + 1e-9);
    }
  }
}

TEST_CASE("cut scans") {
  SUBCASE("cross, v = (1,0): slab currents 0,1,1,0") {
    const CutScan scan = cut_scan(cross(), v2(1, 0));
    REQUIRE(scan.breakpoints.size() == 3);  // projections -1, 0, +1
    REQUIRE(scan.slabs.size() == 4);
    CHECK(std::abs(scan.slabs[0].current - 0.0) <= 1e-15);
    CHECK(std::abs(scan.slabs[1].current - 1.0) <= 1e-15);
    CHECK(std::abs(scan.slabs[2].current - 1.0) <= 1e-15);
    CHECK(std::abs(scan.slabs[3].current - 0.0) <= 1e-15);
    CHECK(scan.max_flux_mismatch <= 1e-15);
  }
  SUBCASE("grid(2,2), v = (1,0): current 3 across the square") {
    const CutScan scan = cut_scan(grid_net(2, 2).net, v2(1, 0));
    CHECK(scan.max_interior_jump <= 1e-9);
    CHECK(scan.max_flux_mismatch <= 1e-9);
    CHECK(scan.max_over_cin <= 1e-9);
    bool saw_three = false;
    for (const auto& slab : scan.slabs) {
      if (slab.lo > -1.0 + 1e-9 && slab.hi < 3.0 - 1e-9 && slab.lo >= 0.0 - 1e-9 &&
          slab.hi <= 2.0 + 1e-9)
        saw_three = saw_three || std::abs(slab.current - 3.0) <= 1e-12;
    }
    CHECK(saw_three);
  }
  SUBCASE("steiner4, v = (0,1): cut above the bar carries sqrt(3)") {
    const CutScan scan = cut_scan(steiner4(), v2(0, 1));
    for (const auto& slab : scan.slabs) {
      if (slab.lo >= 0.0 - 1e-12 && slab.hi <= 1.0 + 1e-12)
        CHECK(std::abs(slab.current - std::sqrt(3.0)) <= 1e-12);
    }
  }
  SUBCASE("currents change only at leaf projections (seeded nets)") {
    Rng rng(13);
    for (const GeneratedNet& g :
         {grid_net(2, 2), hexagon_net(2, 2), fixture(FixtureTag::Steiner4),
          exadiam_net(2, 1)}) {
      for (int t = 0; t < 5; ++t) {
        const CutScan scan = cut_scan(g.net, rng.unit_vector(2));
        CHECK(scan.max_interior_jump <= 1e-9);
        CHECK(scan.max_flux_mismatch <= 1e-9);
        CHECK(scan.max_over_cin <= 1e-9);
      }
    }
  }
}

TEST_CASE("longest oriented paths") {
  SUBCASE("grid(2,1) with a near-axis direction") {
    const Vector v = v2(std::cos(M_PI / 180.0), std::sin(M_PI / 180.0));
    const OrientedPath p = longest_oriented_path(grid_net(2, 1).net, v);
    CHECK(p.length == 2);
    CHECK(p.vertices.size() == 3);
  }
  SUBCASE("grid(2,n) generic direction gives 2n") {
    const Vector v = v2(std::cos(0.41), std::sin(0.41));
    for (int n : {1, 2, 3})
      CHECK(longest_oriented_path(grid_net(2, n).net, v).length == 2 * n);
  }
  SUBCASE("axis direction hits perpendicular edges") {
    CHECK_THROWS_AS(longest_oriented_path(grid_net(2, 2).net, v2(1, 0)), GeometryError);
    Vector used;
    const OrientedPath p =
        longest_oriented_path_perturbed(grid_net(2, 2).net, v2(1, 0), 0, 5, &used);
    CHECK(p.length == 4);
    CHECK((used - v2(1, 0)).norm() > 0.0);
  }
  SUBCASE("matches exhaustive enumeration on small fixtures") {
    Rng rng(77);
    for (const GeneratedNet& g :
         {fixture(FixtureTag::Cross), fixture(FixtureTag::Steiner4), grid_net(2, 1),
          grid_net(1, 3), grid_net(2, 2), hexagon_net(1, 1), exadiam_net(1, 1),
          line_arrangement_net(3, 4.0, 11)}) {
      for (int t = 0; t < 5; ++t) {
        const Vector v = rng.unit_vector(2);
        int brute;
        try {
          brute = oracle::dfs_longest_path(g.net, v);
        } catch (const std::runtime_error&) {
          continue;
        }
        CHECK(longest_oriented_path(g.net, v).length == brute);
      }
    }
  }
  SUBCASE("witness path is oriented and connected") {
    const Vector v = v2(std::cos(0.41), std::sin(0.41));
    const Net g = grid_net(2, 2).net;
    const OrientedPath p = longest_oriented_path(g, v);
    REQUIRE(p.vertices.size() == static_cast<std::size_t>(p.length) + 1);
    for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
      const double step =
          (g.position(p.vertices[i + 1]) - g.position(p.vertices[i])).dot(v);
      CHECK(step > 0.0);
    }
  }
}

TEST_CASE("discrete divergence") {
  SUBCASE("currents lie in the kernel at interior vertices") {
    const Net s = steiner4();
    const CurrentProfile p = current_profile(s, v2(1, 0));
    const auto div = discrete_divergence(s, EdgeFunction::from_current(s, p));
    for (int v : s.interior()) CHECK(std::abs(div[v]) <= 1e-10);
  }
  SUBCASE("gradient of the linear potential is divergence-free at a balanced star") {
    const Net c = cross();
    std::vector<double> h(c.vertex_count());
    for (int v = 0; v < c.vertex_count(); ++v) h[v] = c.position(v).dot(v2(1, 0));
    const auto div = discrete_divergence(c, EdgeFunction::gradient(c, h));
    CHECK(std::abs(div[c.index("o")]) <= 1e-12);
  }
  SUBCASE("single-edge impulse") {
    const Net seg = two_leaf_segment();
    EdgeFunction g;
    g.set_antisymmetric(seg.index("a"), seg.index("b"), 0.75);
    const auto div = discrete_divergence(seg, g);
    CHECK(div[seg.index("b")] == 1.5);
    CHECK(div[seg.index("a")] == -1.5);
  }
  SUBCASE("non-antisymmetric input rejected") {
    const Net seg = two_leaf_segment();
    EdgeFunction g;
    g.set(seg.index("a"), seg.index("b"), 1.0);  // reverse left at 0
    CHECK_THROWS_AS(discrete_divergence(seg, g), ValidationError);
  }
}

TEST_CASE("rectangle packings") {
  SUBCASE("steiner4 with the axis direction is sharp") {
    const RectanglePacking pack = rectangle_packing(steiner4(), v2(1, 0));
    const double s = 1.0 - 1.0 / std::sqrt(3.0);
    REQUIRE(pack.rects.size() == 1);
    CHECK(std::abs(pack.rects[0].width - 1.0) <= 1e-12);
    CHECK(std::abs(pack.rects[0].height - 2.0 * s) <= 1e-12);
    CHECK(std::abs(pack.area_sum - pack.bound) <= 1e-12);
  }
  SUBCASE("grid(2,2): equality at 6 = 3 x 2") {
    const RectanglePacking pack = rectangle_packing(grid_net(2, 2).net, v2(1, 0));
    CHECK(std::abs(pack.area_sum - 6.0) <= 1e-12);
    CHECK(std::abs(pack.bound - 6.0) <= 1e-12);
  }
  SUBCASE("cross has no interior rectangles") {
    const RectanglePacking pack = rectangle_packing(cross(), v2(1, 0));
    CHECK(pack.rects.empty());
    CHECK(pack.area_sum == 0.0);
  }
  SUBCASE("areas equal length times squared current") {
    const Net h = hexagon_net(2, 2).net;
    Rng rng(3);
    const Vector v = rng.unit_vector(2);
    const RectanglePacking pack = rectangle_packing(h, v);
    const CurrentProfile p = current_profile(h, v);
    for (const auto& r : pack.rects) {
      const auto& e = h.edges()[r.edge_index];
      const double len = h.edge_length(e[0], e[1]);
      const double c = p.edge_current[r.edge_index];
      CHECK(std::abs(r.width * r.height - len * c * c) <= 1e-12);
    }
    CHECK(pack.area_sum <= pack.bound + 1e-9);
  }
  SUBCASE("k != 2 rejected") {
    CHECK_THROWS_AS(rectangle_packing(grid_net(3, 1).net, v2(1, 0)), ValidationError);
  }
}

TEST_CASE("squared currents over an orthonormal basis sum to one") {
  Rng rng(19);
  for (const GeneratedNet& g : {fixture(FixtureTag::Steiner4), grid_net(3, 1)}) {
    const Net& net = g.net;
    const int k = net.dimension();
    const auto basis = rng.orthonormal_basis(k);
    std::vector<CurrentProfile> profiles;
    for (const auto& v : basis) profiles.push_back(current_profile(net, v));
    for (std::size_t e = 0; e < net.edges().size(); ++e) {
      double sum = 0.0;
      for (const auto& p : profiles) sum += p.edge_current[e] * p.edge_current[e];
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}
