#include "digitsvm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "digitsvm/errors.hpp"

namespace digitsvm {

namespace {

enum class Slot { zero, upper, free };

double objective_of(const Eigen::MatrixXd& q, const Eigen::VectorXd& a) {
  return a.sum() - 0.5 * a.dot(q * a);
}

double kkt_bias(const Eigen::MatrixXd& k, std::span<const int> y, const Eigen::VectorXd& a,
                double c) {
  const auto n = static_cast<Eigen::Index>(y.size());
  const double eps = 1e-9 * std::max(1.0, c);
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  int free_count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) s += a[j] * y[j] * k(i, j);
    const double g = y[i] - s;
    if (a[i] > eps && a[i] < c - eps) {
      free_sum += g;
      ++free_count;
    } else if ((a[i] <= eps) == (y[i] == 1)) {
      lower = std::max(lower, g);
    } else {
      upper = std::min(upper, g);
    }
  }
  if (free_count > 0) return free_sum / free_count;
  if (std::isfinite(lower) && std::isfinite(upper)) return 0.5 * (lower + upper);
  if (std::isfinite(lower)) return lower;
  if (std::isfinite(upper)) return upper;
  return 0.0;
}

}  // namespace

DualOracleResult brute_force_dual(const std::vector<FeatureVector>& samples,
                                  std::span<const int> labels, const KernelSpec& spec, double c) {
  const std::size_t n = samples.size();
  if (n == 0) throw std::invalid_argument("oracle needs at least one point");
  if (n > kOracleMaxPoints) {
    throw std::invalid_argument("oracle is limited to " + std::to_string(kOracleMaxPoints) +
                                " points, got " + std::to_string(n));
  }
  if (labels.size() != n) throw DimensionMismatch(n, labels.size());
  if (!(c > 0.0)) throw std::invalid_argument("C must be positive");
  for (int y : labels) {
    if (y != 1 && y != -1) throw std::invalid_argument("labels must be +1 or -1");
  }

  const auto en = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd k(en, en), q(en, en);
  for (Eigen::Index i = 0; i < en; ++i) {
    for (Eigen::Index j = 0; j < en; ++j) {
      k(i, j) = kernel_eval(spec, samples[i], samples[j]);
      q(i, j) = labels[i] * labels[j] * k(i, j);
    }
  }

  DualOracleResult best;
  best.objective = -std::numeric_limits<double>::infinity();
  std::vector<Slot> slot(n);
  std::size_t faces = 1;
  for (std::size_t i = 0; i < n; ++i) faces *= 3;

  for (std::size_t code = 0; code < faces; ++code) {
    std::size_t rest = code;
    std::vector<Eigen::Index> free_idx;
    Eigen::VectorXd a = Eigen::VectorXd::Zero(en);
    for (std::size_t i = 0; i < n; ++i) {
      slot[i] = static_cast<Slot>(rest % 3);
      rest /= 3;
      if (slot[i] == Slot::upper) a[i] = c;
      if (slot[i] == Slot::free) free_idx.push_back(static_cast<Eigen::Index>(i));
    }
    ++best.faces_examined;

    const auto m = static_cast<Eigen::Index>(free_idx.size());
    if (m == 0) {
      double ya = 0.0;
      for (std::size_t i = 0; i < n; ++i) ya += labels[i] * a[i];
      if (std::abs(ya) > 1e-12 * c) continue;
    } else {
      Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(m + 1, m + 1);
      Eigen::VectorXd rhs(m + 1);
      double bound_ya = 0.0;
      for (std::size_t i = 0; i < n; ++i) bound_ya += labels[i] * a[i];
      for (Eigen::Index r = 0; r < m; ++r) {
        const Eigen::Index i = free_idx[r];
        for (Eigen::Index s = 0; s < m; ++s) sys(r, s) = q(i, free_idx[s]);
        sys(r, m) = labels[i];
        sys(m, r) = labels[i];
        rhs[r] = 1.0 - q.row(i).dot(a);
      }
      rhs[m] = -bound_ya;

      Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
      lu.setThreshold(1e-11);
      const Eigen::VectorXd sol = lu.solve(rhs);
      if ((sys * sol - rhs).norm() > 1e-8 * (1.0 + rhs.norm())) continue;
      if (lu.rank() < m + 1) {
        const Eigen::MatrixXd null = lu.kernel();
        if (null.topRows(m).norm() > 1e-8) continue;  // a smaller face holds the same optimum
      }
      bool feasible = true;
      const double slack = 1e-9 * std::max(1.0, c);
      for (Eigen::Index r = 0; r < m; ++r) {
        if (sol[r] < -slack || sol[r] > c + slack) feasible = false;
        a[free_idx[r]] = std::clamp(sol[r], 0.0, c);
      }
      if (!feasible) continue;
    }
    ++best.faces_feasible;
    const double w = objective_of(q, a);
    if (w > best.objective) {
      best.objective = w;
      best.alphas.assign(a.data(), a.data() + n);
    }
  }
  if (best.alphas.empty()) throw std::runtime_error("oracle found no feasible face");

  const Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(best.alphas.data(), en);
  best.bias = kkt_bias(k, labels, a, c);
  return best;
}

double oracle_decision(const std::vector<FeatureVector>& samples, std::span<const int> labels,
                       const KernelSpec& spec, const DualOracleResult& sol,
                       std::span<const double> x) {
  double f = sol.bias;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    f += sol.alphas[i] * labels[i] * kernel_eval(spec, samples[i], x);
  }
  return f;
}

namespace {

struct P2 {
  double x, y;
};

P2 sub(P2 a, P2 b) { return {a.x - b.x, a.y - b.y}; }
double cross(P2 a, P2 b) { return a.x * b.y - a.y * b.x; }
double dot(P2 a, P2 b) { return a.x * b.x + a.y * b.y; }

P2 closest_on_segment(P2 p, P2 a, P2 b) {
  const P2 d = sub(b, a);
  const double len2 = dot(d, d);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(sub(p, a), d) / len2, 0.0, 1.0);
  return {a.x + t * d.x, a.y + t * d.y};
}

double orient(P2 a, P2 b, P2 c) { return cross(sub(b, a), sub(c, a)); }

bool on_segment(P2 p, P2 a, P2 b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_touch(P2 a, P2 b, P2 c, P2 d) {
  const double d1 = orient(c, d, a), d2 = orient(c, d, b);
  const double d3 = orient(a, b, c), d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return (d1 == 0 && on_segment(a, c, d)) || (d2 == 0 && on_segment(b, c, d)) ||
         (d3 == 0 && on_segment(c, a, b)) || (d4 == 0 && on_segment(d, a, b));
}

bool in_triangle(P2 p, P2 a, P2 b, P2 c) {
  const double o1 = orient(a, b, p), o2 = orient(b, c, p), o3 = orient(c, a, p);
  const bool has_neg = o1 < 0 || o2 < 0 || o3 < 0;
  const bool has_pos = o1 > 0 || o2 > 0 || o3 > 0;
  return !(has_neg && has_pos);
}

std::vector<P2> to_points(const std::vector<FeatureVector>& pts) {
  std::vector<P2> out;
  for (const auto& p : pts) {
    if (p.size() != 2) throw DimensionMismatch(2, p.size());
    out.push_back({p[0], p[1]});
  }
  return out;
}

bool contains_vertex(const std::vector<P2>& hull_pts, const std::vector<P2>& probes) {
  const std::size_t n = hull_pts.size();
  for (P2 p : probes) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          if (orient(hull_pts[i], hull_pts[j], hull_pts[k]) == 0.0) continue;
          if (in_triangle(p, hull_pts[i], hull_pts[j], hull_pts[k])) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

HullResult hull_closest_points(const std::vector<FeatureVector>& class_a,
                               const std::vector<FeatureVector>& class_b) {
  if (class_a.empty() || class_b.empty()) throw std::invalid_argument("both classes need points");
  const auto a = to_points(class_a);
  const auto b = to_points(class_b);

  HullResult result;
  result.distance = std::numeric_limits<double>::infinity();
  const auto consider = [&](P2 pa, P2 pb) {
    const double d = std::hypot(pa.x - pb.x, pa.y - pb.y);
    if (d < result.distance) {
      result.distance = d;
      result.point_a = {pa.x, pa.y};
      result.point_b = {pb.x, pb.y};
    }
  };
  bool crossing = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i; j < a.size(); ++j) {
      for (std::size_t k = 0; k < b.size(); ++k) {
        for (std::size_t l = k; l < b.size(); ++l) {
          if (segments_touch(a[i], a[j], b[k], b[l])) crossing = true;
        }
        consider(closest_on_segment(b[k], a[i], a[j]), b[k]);
      }
    }
  }
  for (std::size_t k = 0; k < b.size(); ++k) {
    for (std::size_t l = k; l < b.size(); ++l) {
      for (P2 p : a) consider(p, closest_on_segment(p, b[k], b[l]));
    }
  }
  result.separable = !crossing && !contains_vertex(a, b) && !contains_vertex(b, a) &&
                     result.distance > 1e-9;
  return result;
}

}  // namespace digitsvm
