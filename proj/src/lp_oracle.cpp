#include <cmath>
#include <vector>

#include "transclime/l1_solver.hpp"

namespace transclime {

namespace {

// Dense two-phase tableau simplex in standard form, kept deliberately
// simple: full tableau updates, Dantzig entering rule with smallest-index
// ties, lexicographic ratio-test tie-breaking for anti-cycling.
class Tableau {
 public:
  Tableau(int m, int n) : m_(m), n_(n), t_(Matrix::Zero(m, n)), rhs_(Vector::Zero(m)),
                          basis_(static_cast<std::size_t>(m), -1) {}

  Matrix t_mat() { return t_; }

  int m_, n_;
  Matrix t_;
  Vector rhs_;
  std::vector<int> basis_;

  void pivot(int row, int col) {
    const double piv = t_(row, col);
    t_.row(row) /= piv;
    rhs_(row) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) {
        t_.row(i) -= f * t_.row(row);
        rhs_(i) -= f * rhs_(row);
      }
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // Lexicographically smallest row among min-ratio candidates.
  int ratio_test(int col) const {
    int best = -1;
    for (int i = 0; i < m_; ++i) {
      if (t_(i, col) <= 1e-11) continue;
      if (best == -1) {
        best = i;
        continue;
      }
      const double ri = rhs_(i) / t_(i, col);
      const double rb = rhs_(best) / t_(best, col);
      if (ri < rb - 1e-12) {
        best = i;
      } else if (ri < rb + 1e-12) {
        // lexicographic comparison of the scaled rows
        for (int j = 0; j < n_; ++j) {
          const double a = t_(i, j) / t_(i, col);
          const double b = t_(best, j) / t_(best, col);
          if (a < b - 1e-12) {
            best = i;
            break;
          }
          if (a > b + 1e-12) break;
        }
      }
    }
    return best;
  }

  // Minimizes cost over the current tableau. Returns false on unbounded.
  bool optimize(const Vector& cost, const std::vector<bool>& allowed) {
    for (int guard = 0; guard < 100000; ++guard) {
      Vector cb(m_);
      for (int i = 0; i < m_; ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
      int enter = -1;
      double best = -1e-9;
      for (int j = 0; j < n_; ++j) {
        if (!allowed[static_cast<std::size_t>(j)]) continue;
        const double cbar = cost(j) - cb.dot(t_.col(j));
        if (cbar < best - 1e-15) {
          best = cbar;
          enter = j;
        }
      }
      if (enter == -1) return true;
      const int row = ratio_test(enter);
      if (row == -1) return false;
      pivot(row, enter);
    }
    throw SolverError("lp_oracle: iteration guard exceeded");
  }

  double objective(const Vector& cost) const {
    double obj = 0.0;
    for (int i = 0; i < m_; ++i) obj += cost(basis_[static_cast<std::size_t>(i)]) * rhs_(i);
    return obj;
  }
};

}  // namespace

Vector lp_oracle(const Matrix& a, const Vector& b, double lambda) {
  check_square(a, "lp_oracle");
  const int p = static_cast<int>(a.rows());
  if (p > 12) {
    throw std::invalid_argument("lp_oracle: size cap exceeded (p <= 12)");
  }
  if (b.size() != p) {
    throw std::invalid_argument("lp_oracle: dimension mismatch");
  }
  if (lambda < 0.0) {
    throw std::invalid_argument("lp_oracle: lambda must be >= 0");
  }

  const int m = 2 * p;
  // columns: u (p), v (p), s1 (p), s2 (p), artificials appended
  std::vector<int> art_rows;
  Vector rhs_raw(m);
  for (int i = 0; i < p; ++i) rhs_raw(i) = b(i) + lambda;
  for (int i = 0; i < p; ++i) rhs_raw(p + i) = lambda - b(i);
  for (int i = 0; i < m; ++i) {
    if (rhs_raw(i) < 0.0) art_rows.push_back(i);
  }
  const int n_struct = 4 * p;
  const int n = n_struct + static_cast<int>(art_rows.size());

  Tableau tab(m, n);
  for (int i = 0; i < p; ++i) {
    const double s = rhs_raw(i) < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < p; ++j) {
      tab.t_(i, j) = s * a(i, j);
      tab.t_(i, p + j) = -s * a(i, j);
    }
    tab.t_(i, 2 * p + i) = s;
    tab.rhs_(i) = s * rhs_raw(i);
  }
  for (int i = 0; i < p; ++i) {
    const int row = p + i;
    const double s = rhs_raw(row) < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < p; ++j) {
      tab.t_(row, j) = -s * a(i, j);
      tab.t_(row, p + j) = s * a(i, j);
    }
    tab.t_(row, 3 * p + i) = s;
    tab.rhs_(row) = s * rhs_raw(row);
  }
  // initial basis: slack where the row kept its sign, artificial otherwise
  int art_idx = n_struct;
  for (int i = 0; i < m; ++i) {
    if (rhs_raw(i) < 0.0) {
      tab.t_(i, art_idx) = 1.0;
      tab.basis_[static_cast<std::size_t>(i)] = art_idx;
      ++art_idx;
    } else {
      tab.basis_[static_cast<std::size_t>(i)] = (i < p) ? 2 * p + i : 3 * p + (i - p);
    }
  }

  std::vector<bool> allow_all(static_cast<std::size_t>(n), true);
  if (!art_rows.empty()) {
    Vector phase1_cost = Vector::Zero(n);
    for (int j = n_struct; j < n; ++j) phase1_cost(j) = 1.0;
    if (!tab.optimize(phase1_cost, allow_all)) {
      throw SolverError("lp_oracle: phase 1 unbounded");
    }
    if (tab.objective(phase1_cost) > 1e-8 * (1.0 + rhs_raw.cwiseAbs().maxCoeff())) {
      throw SolverError("lp_oracle: infeasible LP");
    }
    // pivot leftover artificials out of the basis where possible
    for (int i = 0; i < m; ++i) {
      if (tab.basis_[static_cast<std::size_t>(i)] < n_struct) continue;
      for (int j = 0; j < n_struct; ++j) {
        if (std::abs(tab.t_(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  Vector cost = Vector::Zero(n);
  for (int j = 0; j < 2 * p; ++j) cost(j) = 1.0;
  std::vector<bool> allowed(static_cast<std::size_t>(n), true);
  for (int j = n_struct; j < n; ++j) allowed[static_cast<std::size_t>(j)] = false;
  if (!tab.optimize(cost, allowed)) {
    throw SolverError("lp_oracle: phase 2 unbounded");
  }

  Vector val = Vector::Zero(n);
  for (int i = 0; i < m; ++i) val(tab.basis_[static_cast<std::size_t>(i)]) = tab.rhs_(i);
  Vector omega(p);
  for (int j = 0; j < p; ++j) omega(j) = val(j) - val(p + j);
  return omega;
}

}  // namespace transclime
