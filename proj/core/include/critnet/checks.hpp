#pragma once

#include <optional>
#include <string>
#include <vector>

#include "critnet/net.hpp"

namespace critnet {

enum class CheckStatus { Pass, Fail, Skipped };

struct CheckReport {
  std::string id;
  CheckStatus status = CheckStatus::Skipped;
  double measured = 0.0;   // check-specific primary value
  double bound = 0.0;      // target / bound it is compared against
  double residual = 0.0;   // pass iff residual <= tolerance
  double tolerance = 0.0;
  std::string detail;      // worst witness, skip reason, ...
};

struct CheckOptions {
  std::uint64_t seed = 0;
  int directions = 20;  // seeded directions / orthonormal bases
  int domains = 5;      // seeded domains for the restriction identity
  int vectors = 10;     // seeded probe vectors for the bilinear relation
  std::optional<Vector> center;       // overrides net.center()
  bool perturb_directions = false;    // retry longest-path scans around
                                      // perpendicular edges
  double tol_identity = 1e-8;   // accumulated identities
  double tol_unit_sum = 1e-9;   // unit-vector sums (leaf vectors, torque)
  double tol_inequality = 1e-9; // slack on inequalities
  double tol_balance = 1e-8;    // vertex balance residual
};

struct CatalogEntry {
  std::string id;
  int required_k;  // 0 = any dimension
  std::string summary;
};

/// Canonical catalog, in report order.
const std::vector<CatalogEntry>& check_catalog();
bool check_exists(const std::string& id);

/// Runs one catalog check. Inapplicable checks (wrong dimension, no leaves,
/// ...) come back Skipped with the reason in `detail`.
CheckReport run_check(const Net& net, const std::string& check_id,
                      const CheckOptions& options = {});

struct SuiteReport {
  std::vector<CheckReport> reports;  // catalog order
  int passed = 0, failed = 0, skipped = 0;
  bool all_applicable_pass = false;
};

/// Runs every applicable check in catalog order. When vertex_balance fails,
/// the identity and bound checks that presuppose a balanced net are reported
/// Skipped("not asserted: ...") instead of misleadingly failing.
SuiteReport run_suite(const Net& net, const CheckOptions& options = {});

/// Distance from a point to the convex hull of `points` (0 inside).
double distance_to_convex_hull(const std::vector<Vector>& points, const Vector& x);

/// Planar face of the embedding: the boundary walk and its signed area.
struct Face {
  std::vector<int> walk;  // vertex indices, closed implicitly
  double signed_area = 0.0;
  bool contains_leaf = false;
};

/// All faces of a planar net from the rotation system of the embedding
/// (k = 2 only). Bounded faces have positive signed area.
std::vector<Face> planar_faces(const Net& net);

}  // namespace critnet
