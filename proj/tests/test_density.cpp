#include <doctest.h>

#include <cmath>

#include "critnet/density.hpp"
#include "critnet/generators.hpp"
#include "oracles.hpp"

using namespace critnet;
using oracle::v2;

namespace {

Net steiner4() { return fixture(FixtureTag::Steiner4).net; }

/// Three straight paths (each exactly balanced): the slanted ones extend to
/// rays hitting the horizontal path's ray at (3.5, 0) and its interior edge
/// at (1.5, 0).
Net crossing_paths() {
  std::vector<VertexSpec> verts{
      {"a0", v2(-2, 0), {}},   {"a1", v2(0, 0), {}},    {"a2", v2(2, 0), {}},
      {"a3", v2(4, 0), {}},    {"b0", v2(-0.5, 2), {}}, {"b1", v2(0.5, 1.5), {}},
      {"b2", v2(1.5, 1), {}},  {"c0", v2(-0.9, 1.2), {}}, {"c1", v2(0.1, 0.7), {}},
      {"c2", v2(1.1, 0.2), {}}};
  return Net::build(2, verts,
                    {{"a0", "a1"},
                     {"a1", "a2"},
                     {"a2", "a3"},
                     {"b0", "b1"},
                     {"b1", "b2"},
                     {"c0", "c1"},
                     {"c1", "c2"}});
}

}  // namespace

TEST_CASE("extend_leaves geometry") {
  SUBCASE("cross: four axis rays, no crossings") {
    const ExtendedNet ext = extend_leaves(fixture(FixtureTag::Cross).net);
    CHECK(ext.rays.size() == 4);
    CHECK(ext.artificial.empty());
    for (const auto& ray : ext.rays) {
      CHECK(ray.start.norm() <= 1e-15);  // rays start at the leaf's neighbor
      CHECK(std::abs(ray.dir.norm() - 1.0) <= 1e-15);
    }
  }
  SUBCASE("steiner4: diverging stem rays never meet") {
    const ExtendedNet ext = extend_leaves(steiner4());
    CHECK(ext.rays.size() == 4);
    CHECK(ext.artificial.empty());
  }
  SUBCASE("grid(2,1): eight rays, no crossings") {
    const ExtendedNet ext = extend_leaves(grid_net(2, 1).net);
    CHECK(ext.rays.size() == 8);
    CHECK(ext.artificial.empty());
  }
  SUBCASE("crossing paths produce ray-ray and ray-edge artificial vertices") {
    const ExtendedNet ext = extend_leaves(crossing_paths());
    CHECK(ext.rays.size() == 6);
    REQUIRE(ext.artificial.size() == 2);
    // line y = 1.75 - x/2 meets the horizontal ray at (3.5, 0); line
    // y = 0.75 - x/2 meets the interior edge at (1.5, 0)
    std::vector<Vector> positions{ext.artificial[0].position,
                                  ext.artificial[1].position};
    std::sort(positions.begin(), positions.end(),
              [](const Vector& a, const Vector& b) { return a[0] < b[0]; });
    CHECK((positions[0] - v2(1.5, 0)).norm() <= 1e-12);
    CHECK((positions[1] - v2(3.5, 0)).norm() <= 1e-12);
  }
  SUBCASE("two-leaf segment: overlapping colinear rays rejected") {
    std::vector<VertexSpec> verts{{"a", v2(0, 0), {}}, {"b", v2(1, 0), {}}};
    const Net seg = Net::build(2, verts, {{"a", "b"}});
    CHECK_THROWS_AS(extend_leaves(seg), GeometryError);
  }
  SUBCASE("straight path: opposite rays do not overlap") {
    CHECK_NOTHROW(extend_leaves(grid_net(1, 3).net));
  }
}

TEST_CASE("length density on the fixtures") {
  SUBCASE("cross: lambda = 4 for every radius") {
    const ExtendedNet ext = extend_leaves(fixture(FixtureTag::Cross).net);
    for (double r : {0.1, 0.5, 2.0, 50.0})
      CHECK(std::abs(length_density(ext, v2(0, 0), r) - 4.0) <= 1e-12);
  }
  SUBCASE("straight line through the center: lambda = 2") {
    const ExtendedNet ext = extend_leaves(grid_net(1, 3).net);
    Vector center(1);
    center << 1.5;
    for (double r : {0.2, 1.0, 7.0})
      CHECK(std::abs(length_density(ext, center, r) - 2.0) <= 1e-12);
  }
  SUBCASE("steiner4: 2 near the bar, approaching 4 far out") {
    const ExtendedNet ext = extend_leaves(steiner4());
    CHECK(std::abs(length_density(ext, v2(0, 0), 0.1) - 2.0) <= 1e-12);
    CHECK(length_density(ext, v2(0, 0), 10.0) > 3.99);
    CHECK(std::abs(length_density(ext, v2(0, 0), 3e5) - 4.0) <= 1e-9);
  }
  SUBCASE("geometric clipping equals the anchor formula") {
    const ExtendedNet ext = extend_leaves(steiner4());
    Rng rng(41);
    for (int t = 0; t < 50; ++t) {
      const double r = rng.uniform(0.05, 6.0);
      const Vector center = 0.3 * rng.unit_vector(2);
      try {
        const double lam = length_density(ext, center, r);
        // re-evaluate via the profile struct to read the anchor value
        const DensityProfile prof = density_profile(ext, center, r, 2.0 * r, 2);
        if (prof.samples[0].valid)
          CHECK(std::abs(prof.samples[0].lambda - prof.samples[0].lambda_anchor) <= 1e-9);
        CHECK(lam >= 0.0);
      } catch (const GeometryError&) {
        continue;
      }
    }
  }
  SUBCASE("excluded radii are rejected with a reason") {
    const ExtendedNet ext = extend_leaves(steiner4());
    const double s = 1.0 - 1.0 / std::sqrt(3.0);
    CHECK_THROWS_AS(length_density(ext, v2(0, 0), s), GeometryError);  // vertex norm
  }
}

TEST_CASE("density derivative") {
  SUBCASE("cross: derivative is identically zero") {
    const ExtendedNet ext = extend_leaves(fixture(FixtureTag::Cross).net);
    CHECK(std::abs(density_derivative(ext, v2(0, 0), 1.3)) <= 1e-15);
  }
  SUBCASE("steiner4 radial regime: derivative zero") {
    const ExtendedNet ext = extend_leaves(steiner4());
    CHECK(std::abs(density_derivative(ext, v2(0, 0), 0.2)) <= 1e-12);
  }
  SUBCASE("formula matches central differences") {
    const ExtendedNet ext = extend_leaves(steiner4());
    for (double r : {1.0, 1.7, 2.9, 4.2}) {
      const double formula = density_derivative(ext, v2(0, 0), r);
      const double h = 1e-5 * r;
      const double fd = (length_density(ext, v2(0, 0), r + h) -
                         length_density(ext, v2(0, 0), r - h)) /
                        (2.0 * h);
      CHECK(std::abs(formula - fd) <= 1e-4);
      CHECK(formula >= -1e-9);
    }
  }
}

TEST_CASE("density profiles") {
  SUBCASE("cross: constant profile, endpoints equal 4") {
    const ExtendedNet ext = extend_leaves(fixture(FixtureTag::Cross).net);
    const DensityProfile prof = density_profile(ext, v2(0, 0), 0.1, 10.0, 50);
    CHECK(prof.generalized_degree == 4);
    CHECK(prof.valid_count >= 45);
    for (const auto& s : prof.samples)
      if (s.valid) CHECK(std::abs(s.lambda - 4.0) <= 1e-12);
  }
  SUBCASE("steiner4: starts at 2, non-decreasing, ends near 4") {
    const ExtendedNet ext = extend_leaves(steiner4());
    const DensityProfile prof = density_profile(ext, v2(0, 0), 0.05, 40.0, 200);
    CHECK(prof.generalized_degree == 2);  // central edge through the origin
    REQUIRE(prof.lambda_first.has_value());
    CHECK(std::abs(*prof.lambda_first - 2.0) <= 1e-6);
    double prev = -1.0;
    for (const auto& s : prof.samples) {
      if (!s.valid) continue;
      CHECK(s.lambda >= prev - 1e-9);
      prev = s.lambda;
    }
    CHECK(*prof.lambda_last > 3.9);
  }
  SUBCASE("grid(2,2) centered at (1,1): degree 4 up to exact leaf count 12") {
    const ExtendedNet ext = extend_leaves(grid_net(2, 2).net);
    const DensityProfile prof = density_profile(ext, v2(1, 1), 0.17, 1e6, 40);
    CHECK(prof.generalized_degree == 4);
    CHECK(prof.leaf_count == 12);
    REQUIRE(prof.lambda_last.has_value());
    CHECK(std::abs(*prof.lambda_last - 12.0) <= 1e-9);
  }
  SUBCASE("monotone over seeded centers and radius pairs") {
    const ExtendedNet ext = extend_leaves(grid_net(2, 2).net);
    Rng rng(47);
    int checked = 0;
    for (int t = 0; t < 100; ++t) {
      const Vector center = v2(1, 1) + 0.45 * rng.unit_vector(2);
      double r1 = rng.uniform(0.05, 4.0);
      double r2 = rng.uniform(0.05, 4.0);
      if (r1 > r2) std::swap(r1, r2);
      try {
        const double l1 = length_density(ext, center, r1);
        const double l2 = length_density(ext, center, r2);
        CHECK(l1 <= l2 + 1e-9);
        ++checked;
      } catch (const GeometryError&) {
        continue;
      }
    }
    CHECK(checked >= 80);
  }
  SUBCASE("derivative terms are individually nonnegative") {
    const ExtendedNet ext = extend_leaves(hexagon_net(1, 1).net);
    const DensityProfile prof = density_profile(ext, v2(0, 0), 0.3, 8.0, 60);
    for (const auto& s : prof.samples)
      if (s.derivative_valid) CHECK(s.dlambda_formula >= -1e-9);
  }
  SUBCASE("three-dimensional cube net") {
    const ExtendedNet ext = extend_leaves(grid_net(3, 1).net);
    const Net& g = ext.base;
    Vector corner = g.position(g.index("g0_0_0"));
    CHECK(generalized_degree(ext, corner) == 6);
    CHECK(std::abs(length_density(ext, corner, 0.3) - 6.0) <= 1e-12);
    Vector cube_center(3);
    cube_center << 0.5, 0.5, 0.5;
    CHECK(generalized_degree(ext, cube_center) == 0);
    CHECK(length_density(ext, cube_center, 0.4) == 0.0);
    CHECK(std::abs(length_density(ext, cube_center, 1e6) - 24.0) <= 1e-9);
  }
  SUBCASE("bad sampling ranges are rejected") {
    const ExtendedNet ext = extend_leaves(fixture(FixtureTag::Cross).net);
    CHECK_THROWS_AS(density_profile(ext, v2(0, 0), -1.0, 2.0, 10), ValidationError);
    CHECK_THROWS_AS(density_profile(ext, v2(0, 0), 0.1, 2.0, 1), ValidationError);
  }
}
