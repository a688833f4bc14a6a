#include "mtlab/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace mtlab {

namespace {

// Concave piecewise-linear value function on [-1, 1], the DP state of the
// support-point LP: after k points it is max over feasible psi_1..psi_k with
// psi_k = s of the partial objective. Stored as breakpoints + slopes
// (decreasing) + the value at the left end.
class ConcaveEnvelope {
 public:
  explicit ConcaveEnvelope(double first_slope) {
    xs_ = {-1.0, 1.0};
    slope_ = {first_slope};
    left_value_ = -first_slope;
  }

  void add_linear(double d) {
    for (double& s : slope_) s += d;
    left_value_ += d * xs_.front();
  }

  // Replace V by s -> max{ V(s') : |s'-s| <= g } restricted to [-1, 1].
  // For concave V this shifts the rising part left by g, the falling part
  // right by g, and inserts a flat top in between.
  void window_clip(double g) {
    std::size_t a = 0;
    while (a < slope_.size() && slope_[a] > 0.0) ++a;
    std::size_t b = a;
    while (b < slope_.size() && slope_[b] >= 0.0) ++b;
    const double p_lo = xs_[a];
    const double p_hi = xs_[b];
    const double peak = value_at_breakpoint(a);
    const double mid_hi = std::min(1.0, p_hi + g);

    std::vector<double> nxs;
    std::vector<double> nsl;
    double nleft;
    nxs.push_back(-1.0);
    if (-1.0 + g < p_lo) {
      const double cut = -1.0 + g;
      nleft = eval(cut);
      for (std::size_t i = 0; i < a; ++i) {
        if (xs_[i + 1] <= cut) continue;
        nsl.push_back(slope_[i]);
        nxs.push_back(xs_[i + 1] - g);
      }
    } else {
      nleft = peak;
    }
    if (nxs.back() < mid_hi) {
      nsl.push_back(0.0);
      nxs.push_back(mid_hi);
    }
    if (p_hi < 1.0 - g) {
      for (std::size_t i = b; i < slope_.size(); ++i) {
        if (xs_[i] >= 1.0 - g) break;
        nsl.push_back(slope_[i]);
        nxs.push_back(std::min(xs_[i + 1], 1.0 - g) + g);
      }
    }
    xs_ = std::move(nxs);
    slope_ = std::move(nsl);
    left_value_ = nleft;
    compact();
  }

  double max_value() const {
    std::size_t a = 0;
    while (a < slope_.size() && slope_[a] > 0.0) ++a;
    return value_at_breakpoint(a);
  }

 private:
  double value_at_breakpoint(std::size_t k) const {
    double v = left_value_;
    for (std::size_t i = 0; i < k; ++i) v += slope_[i] * (xs_[i + 1] - xs_[i]);
    return v;
  }

  double eval(double x) const {
    double v = left_value_;
    for (std::size_t i = 0; i < slope_.size() && xs_[i] < x; ++i)
      v += slope_[i] * (std::min(x, xs_[i + 1]) - xs_[i]);
    return v;
  }

  void compact() {
    std::size_t out = 0;
    for (std::size_t i = 0; i < slope_.size(); ++i) {
      if (xs_[i + 1] - xs_[out] <= 0.0) continue;  // degenerate segment
      if (out > 0 && slope_[i] == slope_[out - 1]) {
        xs_[out] = xs_[i + 1];
        continue;
      }
      slope_[out] = slope_[i];
      xs_[out + 1] = xs_[i + 1];
      ++out;
    }
    slope_.resize(out);
    xs_.resize(out + 1);
  }

  std::vector<double> xs_;
  std::vector<double> slope_;
  double left_value_ = 0.0;
};

}  // namespace

namespace detail {

double flat_lp_value(const std::vector<double>& positions, const std::vector<double>& weights) {
  if (positions.empty()) return 0.0;
  ConcaveEnvelope env(weights[0]);
  for (std::size_t k = 1; k < positions.size(); ++k) {
    env.window_clip(positions[k] - positions[k - 1]);
    env.add_linear(weights[k]);
  }
  return env.max_value();
}

}  // namespace detail

double norm_distance(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  SignedAtomVector d = difference(m1, m2);
  double total = 0.0;
  for (double w : d.weights) total += std::fabs(w);
  return total;
}

double wasserstein1(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  const double tv1 = m1.total_variation();
  const double tv2 = m2.total_variation();
  const double tol = 1e-12 * std::max({1.0, tv1, tv2});
  if (std::fabs(tv1 - tv2) > tol)
    fail(ErrorCode::UnequalMass,
         "1-Wasserstein distance needs equal total masses (the Lipschitz test class is unbounded)");
  SignedAtomVector d = difference(m1, m2);
  double cumulative = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < d.positions.size(); ++k) {
    cumulative += d.weights[k];
    total += std::fabs(cumulative) * (d.positions[k + 1] - d.positions[k]);
  }
  return total;
}

double flat_metric(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  SignedAtomVector d = difference(m1, m2);
  return detail::flat_lp_value(d.positions, d.weights);
}

double mt_metric(const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                 const BreakpointGrid& grid) {
  SignedAtomVector d = difference(m1, m2);
  double total = 0.0;
  std::size_t i = 0;
  while (i < d.positions.size()) {
    const std::size_t interval = grid.interval_index(d.positions[i]);
    std::size_t j = i;
    while (j < d.positions.size() && grid.interval_index(d.positions[j]) == interval) ++j;
    std::vector<double> pos(d.positions.begin() + i, d.positions.begin() + j);
    std::vector<double> w(d.weights.begin() + i, d.weights.begin() + j);
    total += detail::flat_lp_value(pos, w);
    i = j;
  }
  return total;
}

double metric(MetricKind kind, const DiscreteMeasure& m1, const DiscreteMeasure& m2,
              const BreakpointGrid* grid) {
  switch (kind) {
    case MetricKind::NormDistance: return norm_distance(m1, m2);
    case MetricKind::Wasserstein1: return wasserstein1(m1, m2);
    case MetricKind::Flat: return flat_metric(m1, m2);
    case MetricKind::MeasureTransmission:
      if (!grid)
        fail(ErrorCode::InvalidArgument, "measure-transmission metric needs a breakpoint grid");
      return mt_metric(m1, m2, *grid);
  }
  fail(ErrorCode::InvalidArgument, "unknown metric kind");
}

namespace {

constexpr std::size_t kOracleCap = 6;
// Residual-scaled feasibility slack: tight enough to reject the junk
// solutions of ill-conditioned bases (near-coincident support points),
// loose enough to keep every vertex whose defining system is triangular.
inline double feasibility_slack(double rhs) { return 1e-11 * (1.0 + std::fabs(rhs)); }

// Solves A x = b (n x n) by Gaussian elimination; false when singular.
bool solve_dense(std::vector<std::array<double, kOracleCap>>& A, std::vector<double>& b,
                 std::size_t n, std::array<double, kOracleCap>& x) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
    if (std::fabs(A[piv][col]) < 1e-9) return false;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = A[r][col] / A[col][col];
      if (f == 0.0) continue;
      for (std::size_t cc = col; cc < n; ++cc) A[r][cc] -= f * A[col][cc];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double v = b[i];
    for (std::size_t cc = i + 1; cc < n; ++cc) v -= A[i][cc] * x[cc];
    x[i] = v / A[i][i];
  }
  return true;
}

struct LinearConstraint {
  int k;        // variable index (chain constraints couple k and k+1)
  bool chain;   // chain: sign*(psi_{k+1} - psi_k) <= rhs; box: sign*psi_k <= 1
  double sign;
  double rhs;
};

// Enumerates every vertex of {psi : constraints} and maximizes d'psi. The
// polytope is bounded (box constraints), so the optimum sits at a vertex.
double lp_vertex_oracle(const std::vector<double>& pos, const std::vector<double>& d,
                        const std::vector<std::size_t>& interval_of) {
  const std::size_t n = pos.size();
  if (n == 0) return 0.0;

  std::vector<LinearConstraint> cons;
  for (std::size_t k = 0; k < n; ++k) {
    cons.push_back({static_cast<int>(k), false, 1.0, 1.0});
    cons.push_back({static_cast<int>(k), false, -1.0, 1.0});
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!interval_of.empty() && interval_of[k] != interval_of[k + 1]) continue;
    double gap = pos[k + 1] - pos[k];
    cons.push_back({static_cast<int>(k), true, 1.0, gap});
    cons.push_back({static_cast<int>(k), true, -1.0, gap});
  }

  const std::size_t m = cons.size();
  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  double best = -std::numeric_limits<double>::infinity();

  auto residual = [&](const LinearConstraint& c, const std::array<double, kOracleCap>& psi) {
    double lhs = c.chain ? c.sign * (psi[c.k + 1] - psi[c.k]) : c.sign * psi[c.k];
    return lhs - c.rhs;
  };

  while (true) {
    std::vector<std::array<double, kOracleCap>> A(n);
    std::vector<double> b(n);
    for (std::size_t r = 0; r < n; ++r) {
      A[r].fill(0.0);
      const LinearConstraint& c = cons[pick[r]];
      if (c.chain) {
        A[r][c.k] = -c.sign;
        A[r][c.k + 1] = c.sign;
      } else {
        A[r][c.k] = c.sign;
      }
      b[r] = c.rhs;
    }
    std::array<double, kOracleCap> psi{};
    if (solve_dense(A, b, n, psi)) {
      bool feasible = true;
      for (const LinearConstraint& c : cons)
        if (residual(c, psi) > feasibility_slack(c.rhs)) {
          feasible = false;
          break;
        }
      if (feasible) {
        double obj = 0.0;
        for (std::size_t k = 0; k < n; ++k) obj += d[k] * psi[k];
        best = std::max(best, obj);
      }
    }
    // next combination
    std::size_t i = n;
    while (i-- > 0) {
      if (pick[i] + (n - i) < m) {
        ++pick[i];
        for (std::size_t j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
        break;
      }
      if (i == 0) return best;
    }
  }
}

double norm_sign_oracle(const std::vector<double>& d) {
  const std::size_t n = d.size();
  double best = 0.0;
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    double obj = 0.0;
    for (std::size_t k = 0; k < n; ++k) obj += ((mask >> k) & 1u ? 1.0 : -1.0) * d[k];
    best = std::max(best, obj);
  }
  return best;
}

// Enumerates the basic solutions of the transportation polytope (edge subsets
// of size p+q-1 with a unique nonnegative flow) and minimizes the cost.
double transport_plan_oracle(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  const auto& src = m1.atoms();
  const auto& dst = m2.atoms();
  if (src.empty() && dst.empty()) return 0.0;
  const std::size_t p = src.size(), q = dst.size();
  const std::size_t edges = p * q;
  const std::size_t need = p + q - 1;
  if (edges < need) return std::numeric_limits<double>::infinity();

  std::vector<std::size_t> pick(need);
  std::iota(pick.begin(), pick.end(), 0);
  double best = std::numeric_limits<double>::infinity();

  while (true) {
    // Balance equations: rows = sources then sinks, columns = chosen edges.
    const std::size_t rows = p + q;
    std::vector<std::vector<double>> A(rows, std::vector<double>(need + 1, 0.0));
    for (std::size_t e = 0; e < need; ++e) {
      std::size_t i = pick[e] / q, j = pick[e] % q;
      A[i][e] = 1.0;
      A[p + j][e] = 1.0;
    }
    for (std::size_t i = 0; i < p; ++i) A[i][need] = src[i].weight;
    for (std::size_t j = 0; j < q; ++j) A[p + j][need] = dst[j].weight;

    // Row-reduce; a full-rank consistent system gives the unique basic flow.
    std::vector<int> pivot_col_of_row(rows, -1);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < need && rank < rows; ++col) {
      std::size_t piv = rank;
      for (std::size_t r = rank; r < rows; ++r)
        if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
      if (std::fabs(A[piv][col]) < 1e-12) continue;
      std::swap(A[piv], A[rank]);
      for (std::size_t r = 0; r < rows; ++r) {
        if (r == rank || A[r][col] == 0.0) continue;
        double f = A[r][col] / A[rank][col];
        for (std::size_t cc = col; cc <= need; ++cc) A[r][cc] -= f * A[rank][cc];
      }
      pivot_col_of_row[rank] = static_cast<int>(col);
      ++rank;
    }
    bool ok = rank == need;
    for (std::size_t r = rank; ok && r < rows; ++r)
      if (std::fabs(A[r][need]) > 1e-9) ok = false;
    if (ok) {
      std::vector<double> flow(need, 0.0);
      for (std::size_t r = 0; r < rank; ++r) {
        int col = pivot_col_of_row[r];
        flow[col] = A[r][need] / A[r][col];
        if (flow[col] < -1e-9) {
          ok = false;
          break;
        }
      }
      if (ok) {
        double cost = 0.0;
        for (std::size_t e = 0; e < need; ++e) {
          std::size_t i = pick[e] / q, j = pick[e] % q;
          cost += std::max(flow[e], 0.0) * std::fabs(src[i].pos - dst[j].pos);
        }
        best = std::min(best, cost);
      }
    }
    std::size_t i = need;
    bool advanced = false;
    while (i-- > 0) {
      if (pick[i] + (need - i) < edges) {
        ++pick[i];
        for (std::size_t j = i + 1; j < need; ++j) pick[j] = pick[j - 1] + 1;
        advanced = true;
        break;
      }
    }
    if (!advanced) return best;
  }
}

}  // namespace

double metric_oracle(MetricKind kind, const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                     const BreakpointGrid* grid) {
  if (kind == MetricKind::Wasserstein1) {
    if (m1.size() + m2.size() > kOracleCap)
      fail(ErrorCode::TooLarge, "transport-plan oracle capped at 6 combined atoms");
    const double tv1 = m1.total_variation(), tv2 = m2.total_variation();
    if (std::fabs(tv1 - tv2) > 1e-12 * std::max({1.0, tv1, tv2}))
      fail(ErrorCode::UnequalMass, "1-Wasserstein oracle needs equal total masses");
    if (m1.empty() && m2.empty()) return 0.0;
    return transport_plan_oracle(m1, m2);
  }

  SignedAtomVector d = difference(m1, m2);
  if (d.positions.size() > kOracleCap)
    fail(ErrorCode::TooLarge, "vertex-enumeration oracle capped at 6 support atoms");
  switch (kind) {
    case MetricKind::NormDistance: return norm_sign_oracle(d.weights);
    case MetricKind::Flat: return lp_vertex_oracle(d.positions, d.weights, {});
    case MetricKind::MeasureTransmission: {
      if (!grid)
        fail(ErrorCode::InvalidArgument, "measure-transmission oracle needs a breakpoint grid");
      std::vector<std::size_t> interval_of(d.positions.size());
      for (std::size_t k = 0; k < d.positions.size(); ++k)
        interval_of[k] = grid->interval_index(d.positions[k]);
      return lp_vertex_oracle(d.positions, d.weights, interval_of);
    }
    default: break;
  }
  fail(ErrorCode::InvalidArgument, "unknown metric kind");
}

}  // namespace mtlab
