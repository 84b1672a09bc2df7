#pragma once

// Dense two-phase simplex for small linear programs
//
//     maximize  c.x   subject to  A x <= b,   x free.
//
// Pivoting follows Bland's rule (smallest entering index, smallest basic
// index on ratio ties), so the solver terminates on degenerate problems and
// every run on the same data performs the same pivot sequence.

#include <strongconv/core.hpp>

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace strongconv {

struct LinearProgram {
  Vec objective;  // c
  Mat normals;    // rows a_i
  Vec offsets;    // b_i
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  Vec argmax;

  bool optimal() const { return status == LpStatus::optimal; }
};

namespace detail {

class SimplexTableau {
 public:
  // Columns: [x+ (n) | x- (n) | slacks (m) | artificials (k) | rhs]
  SimplexTableau(const Mat& A, const Vec& b) : m_(static_cast<int>(A.rows())), n_(static_cast<int>(A.cols())) {
    art_rows_.clear();
    for (int i = 0; i < m_; ++i)
      if (b(i) < 0) art_rows_.push_back(i);
    k_ = static_cast<int>(art_rows_.size());
    cols_ = 2 * n_ + m_ + k_;
    T_ = Mat::Zero(m_ + 1, cols_ + 1);
    basis_.assign(static_cast<std::size_t>(m_), -1);
    scale_ = 1.0;
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) scale_ = std::max(scale_, std::abs(A(i, j)));
      scale_ = std::max(scale_, std::abs(b(i)));
    }
    int art = 0;
    for (int i = 0; i < m_; ++i) {
      const double sign = b(i) < 0 ? -1.0 : 1.0;
      for (int j = 0; j < n_; ++j) {
        T_(i, j) = sign * A(i, j);
        T_(i, n_ + j) = -sign * A(i, j);
      }
      T_(i, 2 * n_ + i) = sign;
      T_(i, cols_) = sign * b(i);
      if (b(i) < 0) {
        T_(i, 2 * n_ + m_ + art) = 1.0;
        basis_[static_cast<std::size_t>(i)] = 2 * n_ + m_ + art;
        ++art;
      } else {
        basis_[static_cast<std::size_t>(i)] = 2 * n_ + i;
      }
    }
  }

  LpResult solve(const Vec& c) {
    if (k_ > 0) {
      Vec cost = Vec::Zero(cols_);
      for (int a = 0; a < k_; ++a) cost(2 * n_ + m_ + a) = -1.0;
      load_objective(cost);
      if (run(/*allow_artificial=*/true) == LpStatus::unbounded) return {LpStatus::infeasible, 0.0, {}};
      if (T_(m_, cols_) < -feas_tol()) return {LpStatus::infeasible, 0.0, {}};
      drive_out_artificials();
    }
    Vec cost = Vec::Zero(cols_);
    for (int j = 0; j < n_; ++j) {
      cost(j) = c(j);
      cost(n_ + j) = -c(j);
    }
    load_objective(cost);
    if (run(/*allow_artificial=*/false) == LpStatus::unbounded) return {LpStatus::unbounded, 0.0, {}};
    Vec x = Vec::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      const int bj = basis_[static_cast<std::size_t>(i)];
      if (bj < n_)
        x(bj) += T_(i, cols_);
      else if (bj < 2 * n_)
        x(bj - n_) -= T_(i, cols_);
    }
    return {LpStatus::optimal, c.dot(x), x};
  }

 private:
  double pivot_tol() const { return 1e-11 * scale_; }
  double feas_tol() const { return 1e-9 * scale_; }
  bool is_artificial(int j) const { return j >= 2 * n_ + m_; }

  void load_objective(const Vec& cost) {
    for (int j = 0; j <= cols_; ++j) T_(m_, j) = 0.0;
    for (int j = 0; j < cols_; ++j) T_(m_, j) = -cost(j);
    for (int i = 0; i < m_; ++i) {
      const double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) T_.row(m_) += cb * T_.row(i);
    }
  }

  void pivot(int r, int s) {
    const double p = T_(r, s);
    T_.row(r) /= p;
    T_(r, s) = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = T_(i, s);
      if (f != 0.0) {
        T_.row(i) -= f * T_.row(r);
        T_(i, s) = 0.0;
      }
    }
    basis_[static_cast<std::size_t>(r)] = s;
  }

  LpStatus run(bool allow_artificial) {
    const double dtol = 1e-12 * scale_;
    const int max_pivots = 50 * (cols_ + m_ + 10);
    for (int it = 0; it < max_pivots; ++it) {
      int s = -1;
      for (int j = 0; j < cols_; ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (T_(m_, j) < -dtol) {
          s = j;
          break;
        }
      }
      if (s < 0) return LpStatus::optimal;
      int r = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = T_(i, s);
        if (a <= pivot_tol()) continue;
        const double ratio = std::max(0.0, T_(i, cols_)) / a;
        if (r < 0 || ratio < best - 1e-13 * (1.0 + std::abs(best)) ||
            (std::abs(ratio - best) <= 1e-13 * (1.0 + std::abs(best)) &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(r)])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) return LpStatus::unbounded;
      pivot(r, s);
    }
    throw ConvergenceError("simplex pivot limit reached");
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[static_cast<std::size_t>(i)])) continue;
      int best = -1;
      for (int j = 0; j < 2 * n_ + m_; ++j) {
        if (std::abs(T_(i, j)) > pivot_tol() &&
            (best < 0 || std::abs(T_(i, j)) > std::abs(T_(i, best)) * 10.0))
          best = j;
      }
      if (best >= 0) pivot(i, best);
    }
  }

  int m_, n_, k_ = 0, cols_ = 0;
  double scale_ = 1.0;
  Mat T_;
  std::vector<int> basis_;
  std::vector<int> art_rows_;
};

}  // namespace detail

/// Solves `lp`; infeasible and unbounded problems are reported through the
/// status rather than thrown.
inline LpResult lp_max(const LinearProgram& lp) {
  const auto n = lp.objective.size();
  if (lp.normals.cols() != n || lp.normals.rows() != lp.offsets.size())
    throw DimensionError("linear program shape mismatch");
  if (!lp.objective.allFinite() || !lp.normals.allFinite() || !lp.offsets.allFinite())
    throw std::invalid_argument("linear program data must be finite");
  detail::SimplexTableau tab(lp.normals, lp.offsets);
  return tab.solve(lp.objective);
}

inline LpResult lp_max(const Vec& c, const Mat& A, const Vec& b) {
  return lp_max(LinearProgram{c, A, b});
}

/// Any point of {x : A x <= b}, or nothing when the system is infeasible.
inline std::optional<Vec> lp_feasible_point(const Mat& A, const Vec& b) {
  auto r = lp_max(Vec::Zero(A.cols()), A, b);
  if (r.status != LpStatus::optimal) return std::nullopt;
  return r.argmax;
}

namespace detail {

// Tableau for  minimize c.l  subject to  M l = r, l >= 0, with one artificial
// column per row. Wide and short problems stay cheap here because the row
// count is the number of equality constraints.
class StandardTableau {
 public:
  StandardTableau(const Mat& M, const Vec& r) : m_(static_cast<int>(M.rows())), n_(static_cast<int>(M.cols())) {
    T_ = Mat::Zero(m_ + 1, n_ + m_ + 1);
    basis_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      const double sign = r(i) < 0 ? -1.0 : 1.0;
      T_.row(i).head(n_) = sign * M.row(i);
      T_(i, n_ + i) = 1.0;
      T_(i, n_ + m_) = sign * r(i);
      basis_[static_cast<std::size_t>(i)] = n_ + i;
    }
    scale_ = std::max(1.0, T_.topRows(m_).cwiseAbs().maxCoeff());
  }

  LpResult solve(const Vec& c) {
    Vec phase1 = Vec::Zero(n_ + m_);
    phase1.tail(m_).setOnes();
    load(phase1);
    run(n_ + m_);
    if (-T_(m_, n_ + m_) > 1e-9 * scale_) return {LpStatus::infeasible, 0.0, {}};
    for (int i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      Eigen::Index j = 0;
      if (T_.row(i).head(n_).cwiseAbs().maxCoeff(&j) > 1e-11 * scale_) pivot(i, static_cast<int>(j));
    }
    Vec cost = Vec::Zero(n_ + m_);
    cost.head(n_) = c;
    load(cost);
    if (!run(n_)) return {LpStatus::unbounded, 0.0, {}};
    Vec l = Vec::Zero(n_);
    for (int i = 0; i < m_; ++i)
      if (basis_[static_cast<std::size_t>(i)] < n_) l(basis_[static_cast<std::size_t>(i)]) = T_(i, n_ + m_);
    return {LpStatus::optimal, c.dot(l), l};
  }

 private:
  // Bottom row holds reduced costs c_j - c_B B^-1 A_j and minus the value.
  void load(const Vec& cost) {
    T_.row(m_).setZero();
    T_.row(m_).head(n_ + m_) = cost.transpose();
    for (int i = 0; i < m_; ++i) {
      const double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) T_.row(m_) -= cb * T_.row(i);
    }
  }

  void pivot(int r, int s) {
    T_.row(r) /= T_(r, s);
    for (int i = 0; i <= m_; ++i)
      if (i != r && T_(i, s) != 0.0) T_.row(i) -= T_(i, s) * T_.row(r);
    basis_[static_cast<std::size_t>(r)] = s;
  }

  // Dantzig pricing; after a run of degenerate pivots switches to Bland's
  // rule so cycling cannot occur.
  bool run(int active_cols) {
    const double dtol = 1e-12 * scale_;
    int degenerate = 0;
    for (int it = 0; it < 50 * (active_cols + m_ + 10); ++it) {
      int s = -1;
      for (int j = 0; j < active_cols; ++j) {
        if (T_(m_, j) >= -dtol) continue;
        if (s < 0) {
          s = j;
          if (degenerate > 2 * m_) break;
        } else if (T_(m_, j) < T_(m_, s)) {
          s = j;
        }
      }
      if (s < 0) return true;
      int r = -1;
      double best = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = T_(i, s);
        if (a <= 1e-11 * scale_) continue;
        const double ratio = std::max(0.0, T_(i, n_ + m_)) / a;
        if (r < 0 || ratio < best - 1e-13 * (1.0 + best) ||
            (ratio <= best + 1e-13 * (1.0 + best) && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(r)])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) return false;
      degenerate = best <= 1e-13 ? degenerate + 1 : 0;
      pivot(r, s);
    }
    throw ConvergenceError("simplex pivot limit reached");
  }

  int m_, n_;
  double scale_ = 1.0;
  Mat T_;
  std::vector<int> basis_;
};

}  // namespace detail

/// minimize c.l subject to M l = r and l >= 0. Suited to few equality rows
/// and many columns.
inline LpResult lp_min_standard(const Vec& c, const Mat& M, const Vec& r) {
  if (M.cols() != c.size() || M.rows() != r.size()) throw DimensionError("linear program shape mismatch");
  if (!c.allFinite() || !M.allFinite() || !r.allFinite())
    throw std::invalid_argument("linear program data must be finite");
  detail::StandardTableau tab(M, r);
  return tab.solve(c);
}

}  // namespace strongconv
