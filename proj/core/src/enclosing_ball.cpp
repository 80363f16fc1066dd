#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "critnet/net.hpp"

namespace critnet {

namespace {

// Smallest ball with all support points on its boundary. The center is
// R[0] + M^-1 rhs in the affine frame of the support set.
EnclosingBall ball_from_support(const std::vector<Vector>& support, int k) {
  EnclosingBall b;
  if (support.empty()) {
    b.center = Vector::Zero(k);
    b.radius = -1.0;  // contains nothing
    return b;
  }
  if (support.size() == 1) {
    b.center = support[0];
    b.radius = 0.0;
    return b;
  }
  const int m = static_cast<int>(support.size()) - 1;
  Matrix A(m, k);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    Vector d = support[i + 1] - support[0];
    A.row(i) = d.transpose();
    rhs[i] = 0.5 * d.squaredNorm();
  }
  // Solve 2(p_i - p_0) . x = |p_i - p_0|^2 in least-squares sense; x is the
  // center offset inside the affine hull of the support.
  Vector x = A.completeOrthogonalDecomposition().solve(rhs);
  b.center = support[0] + x;
  b.radius = 0.0;
  for (const Vector& p : support)
    b.radius = std::max(b.radius, (p - b.center).norm());
  return b;
}

bool in_ball(const EnclosingBall& b, const Vector& p, double slack) {
  if (b.radius < 0.0) return false;
  return (p - b.center).norm() <= b.radius + slack;
}

EnclosingBall welzl(std::vector<const Vector*>& pts, std::size_t n,
                    std::vector<Vector>& support, int k) {
  if (n == 0 || static_cast<int>(support.size()) == k + 1)
    return ball_from_support(support, k);
  EnclosingBall b = welzl(pts, n - 1, support, k);
  const Vector& p = *pts[n - 1];
  const double scale = std::max(1.0, b.radius);
  if (in_ball(b, p, 1e-12 * scale)) return b;
  support.push_back(p);
  b = welzl(pts, n - 1, support, k);
  support.pop_back();
  // move-to-front keeps the expected recursion depth small
  auto* moved = pts[n - 1];
  for (std::size_t i = n - 1; i > 0; --i) pts[i] = pts[i - 1];
  pts[0] = moved;
  return b;
}

// First-order refinement on the weight simplex: the center is a convex
// combination of the points; alternate farthest-point steps with away steps
// and exact line search. Converges linearly, stopped at 1e-9 relative radius.
EnclosingBall iterative_ball(const std::vector<Vector>& pts, int k) {
  const int n = static_cast<int>(pts.size());
  std::vector<double> w(n, 1.0 / n);
  Vector c = Vector::Zero(k);
  for (int i = 0; i < n; ++i) c += w[i] * pts[i];

  auto farthest = [&](const Vector& from) {
    int best = 0;
    double bd = -1.0;
    for (int i = 0; i < n; ++i) {
      const double d = (pts[i] - from).squaredNorm();
      if (d > bd) {
        bd = d;
        best = i;
      }
    }
    return best;
  };

  // Warm start: repeatedly step toward the farthest point.
  for (int t = 1; t <= 256; ++t) {
    const int f = farthest(c);
    const double step = 1.0 / (t + 1);
    for (int i = 0; i < n; ++i) w[i] *= (1.0 - step);
    w[f] += step;
    c += step * (pts[f] - c);
  }

  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) sum_sq += w[i] * pts[i].squaredNorm();

  const int max_iter = 500000;
  for (int it = 0; it < max_iter; ++it) {
    const int f = farthest(c);
    const double r_ub_sq = (pts[f] - c).squaredNorm();
    const double phi = sum_sq - c.squaredNorm();  // lower bound on r*^2
    const double scale = std::max(r_ub_sq, 1e-300);
    if (r_ub_sq - phi <= 2e-9 * scale + 1e-30) break;

    // Away candidate: active point closest to the center.
    int a = -1;
    double ad = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (w[i] <= 0.0) continue;
      const double d = (pts[i] - c).squaredNorm();
      if (d < ad) {
        ad = d;
        a = i;
      }
    }

    // Toward-gap is r_ub^2 - phi, away-gap is phi - |p_a - c|^2; take the
    // larger improvement direction.
    const bool use_away = a >= 0 && (phi - ad) > (r_ub_sq - phi) && w[a] < 1.0;

    Vector dir_c;
    double dir_sum_sq;
    double gamma_max;
    int moved;
    if (use_away) {
      dir_c = c - pts[a];
      dir_sum_sq = sum_sq - pts[a].squaredNorm();
      gamma_max = w[a] / (1.0 - w[a]);
      moved = a;
    } else {
      dir_c = pts[f] - c;
      dir_sum_sq = pts[f].squaredNorm() - sum_sq;
      gamma_max = 1.0;
      moved = f;
    }
    const double denom = dir_c.squaredNorm();
    if (denom < 1e-300) break;
    double gamma = (dir_sum_sq - 2.0 * c.dot(dir_c)) / (2.0 * denom);
    gamma = std::clamp(gamma, 0.0, gamma_max);
    if (gamma <= 0.0) {
      if (use_away) continue;  // try a plain step next round
      break;
    }
    if (use_away) {
      for (int i = 0; i < n; ++i) w[i] *= (1.0 + gamma);
      w[moved] -= gamma;
      if (w[moved] < 1e-18) w[moved] = 0.0;
    } else {
      for (int i = 0; i < n; ++i) w[i] *= (1.0 - gamma);
      w[moved] += gamma;
    }
    c += gamma * dir_c;
    sum_sq += gamma * dir_sum_sq;
  }

  EnclosingBall b;
  b.center = c;
  b.radius = std::sqrt((pts[farthest(c)] - c).squaredNorm());
  return b;
}

}  // namespace

EnclosingBall minimal_enclosing_ball(const std::vector<Vector>& points, int dimension) {
  if (points.empty()) throw ValidationError("minimal_enclosing_ball: no points");
  for (const Vector& p : points)
    if (p.size() != dimension)
      throw ValidationError("minimal_enclosing_ball: dimension mismatch");
  if (points.size() == 1) return {points[0], 0.0};

  if (dimension <= 3) {
    std::vector<const Vector*> pts(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) pts[i] = &points[i];
    // deterministic shuffle
    Rng rng(0x6d1e5);
    for (std::size_t i = pts.size(); i > 1; --i)
      std::swap(pts[i - 1], pts[rng.next_u64() % i]);
    std::vector<Vector> support;
    return welzl(pts, pts.size(), support, dimension);
  }
  return iterative_ball(points, dimension);
}

}  // namespace critnet
