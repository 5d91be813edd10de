#include "transclime/l1_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace transclime {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarState : unsigned char { Basic, AtLower, AtUpper };

// Bounded-variable revised simplex for
//   min c'x  s.t.  N x = rhs,  lower <= x <= upper
// specialized to the l1/linf column problem: x = (u, v, r, artificials),
// column(u_j) = A_j, column(v_j) = -A_j, column(r_i) = e_i,
// column(art) = sign * e_i.
class ColumnSimplex {
 public:
  ColumnSimplex(const Matrix& a, const Vector& b, const L1SolveConfig& cfg)
      : a_(a), cfg_(cfg), p_(static_cast<int>(a.rows())) {
    rhs_ = b.array() + cfg.lambda;
    two_lambda_ = 2.0 * cfg.lambda;
  }

  ColumnSolution run() {
    init();
    phase_ = 1;
    const bool phase1_done = iterate();
    double infeas = 0.0;
    for (int i = 0; i < p_; ++i) {
      if (basis_[i] >= art_offset_) infeas += beta_[i];
    }
    const double feas_tol = 1e-9 * (1.0 + rhs_.cwiseAbs().maxCoeff());
    if (!phase1_done) {
      return extract(false);
    }
    if (infeas > feas_tol) {
      throw SolverError("solve_l1_linf: infeasible constraints (lambda too small)");
    }
    // artificials are pinned to zero from here on
    for (int k = 0; k < n_art_; ++k) upper_[art_offset_ + k] = 0.0;
    phase_ = 2;
    const bool phase2_done = iterate();
    return extract(phase2_done);
  }

 private:
  double lower_of(int idx) const { return 0.0; (void)idx; }

  double cost_of(int idx) const {
    if (phase_ == 1) return idx >= art_offset_ ? 1.0 : 0.0;
    return idx < 2 * p_ ? 1.0 : 0.0;
  }

  // column of the constraint matrix for variable idx, into scratch_
  const Vector& column_of(int idx) {
    if (idx < p_) {
      scratch_ = a_.col(idx);
    } else if (idx < 2 * p_) {
      scratch_ = -a_.col(idx - p_);
    } else {
      scratch_.setZero(p_);
      if (idx < 3 * p_) {
        scratch_(idx - 2 * p_) = 1.0;
      } else {
        const int k = idx - art_offset_;
        scratch_(art_row_[k]) = art_sign_[k];
      }
    }
    return scratch_;
  }

  void init() {
    n_art_ = 0;
    art_offset_ = 3 * p_;
    basis_.assign(p_, -1);
    state_.assign(static_cast<std::size_t>(3 * p_), VarState::AtLower);
    upper_.assign(static_cast<std::size_t>(3 * p_), kInf);
    for (int i = 0; i < p_; ++i) upper_[2 * p_ + i] = two_lambda_;
    binv_ = Matrix::Identity(p_, p_);
    beta_ = Vector::Zero(p_);
    art_row_.clear();
    art_sign_.clear();
    for (int i = 0; i < p_; ++i) {
      const double v = rhs_(i);
      if (v >= 0.0 && v <= two_lambda_) {
        basis_[i] = 2 * p_ + i;
        state_[2 * p_ + i] = VarState::Basic;
        beta_(i) = v;
      } else if (v > two_lambda_) {
        // slack parked at its upper bound, artificial covers the rest
        state_[2 * p_ + i] = VarState::AtUpper;
        art_row_.push_back(i);
        art_sign_.push_back(1.0);
        basis_[i] = art_offset_ + n_art_;
        beta_(i) = v - two_lambda_;
        ++n_art_;
      } else {
        art_row_.push_back(i);
        art_sign_.push_back(-1.0);
        basis_[i] = art_offset_ + n_art_;
        beta_(i) = -v;
        binv_(i, i) = -1.0;
        ++n_art_;
      }
    }
    state_.resize(static_cast<std::size_t>(3 * p_ + n_art_), VarState::Basic);
    upper_.resize(static_cast<std::size_t>(3 * p_ + n_art_), kInf);
    scratch_.resize(p_);
  }

  double variable_value(int idx) const {
    switch (state_[static_cast<std::size_t>(idx)]) {
      case VarState::AtLower: return 0.0;
      case VarState::AtUpper: return upper_[static_cast<std::size_t>(idx)];
      case VarState::Basic: break;
    }
    for (int i = 0; i < p_; ++i) {
      if (basis_[i] == idx) return beta_(i);
    }
    return 0.0;
  }

  double objective() const {
    double obj = 0.0;
    for (int i = 0; i < p_; ++i) obj += cost_of(basis_[i]) * beta_(i);
    for (std::size_t idx = 0; idx < state_.size(); ++idx) {
      if (state_[idx] == VarState::AtUpper) {
        obj += cost_of(static_cast<int>(idx)) * upper_[idx];
      }
    }
    return obj;
  }

  void refactorize() {
    Matrix basis_mat(p_, p_);
    for (int i = 0; i < p_; ++i) basis_mat.col(i) = column_of(basis_[i]);
    binv_ = basis_mat.partialPivLu().inverse();
    recompute_beta();
  }

  void recompute_beta() {
    Vector net = rhs_;
    for (std::size_t idx = 0; idx < state_.size(); ++idx) {
      if (state_[idx] == VarState::AtUpper && upper_[idx] != 0.0) {
        net -= column_of(static_cast<int>(idx)) * upper_[idx];
      }
    }
    beta_ = binv_ * net;
  }

  // Returns true when the phase reached optimality within the iteration
  // budget, false when max_iter ran out.
  bool iterate() {
    const double ctol = cfg_.dual_tol;
    int stall = 0;
    bool bland = false;
    double last_obj = objective();
    while (true) {
      if (total_iters_ >= cfg_.max_iter) return false;

      // pricing: y = Binv' c_B, reduced cost c_j - y'N_j per nonbasic j
      Vector y = Vector::Zero(p_);
      for (int i = 0; i < p_; ++i) {
        const double c = cost_of(basis_[i]);
        if (c != 0.0) y += c * binv_.row(i).transpose();
      }
      Vector w = a_.transpose() * y;

      int enter = -1;
      double best_score = ctol;
      auto consider = [&](int idx, double cbar) {
        if (upper_[static_cast<std::size_t>(idx)] == 0.0) return;  // pinned
        const VarState st = state_[static_cast<std::size_t>(idx)];
        double viol = 0.0;
        if (st == VarState::AtLower && cbar < -ctol) viol = -cbar;
        else if (st == VarState::AtUpper && cbar > ctol) viol = cbar;
        else return;
        if (bland) {
          if (enter == -1 || idx < enter) { enter = idx; best_score = viol; }
        } else if (viol > best_score) {
          enter = idx;
          best_score = viol;
        }
      };
      const double cu = phase_ == 1 ? 0.0 : 1.0;
      for (int j = 0; j < p_; ++j) {
        consider(j, cu - w(j));
        consider(p_ + j, cu + w(j));
        consider(2 * p_ + j, -y(j));
      }
      if (phase_ == 1) {
        for (int k = 0; k < n_art_; ++k) {
          consider(art_offset_ + k, 1.0 - art_sign_[k] * y(art_row_[k]));
        }
      }
      if (enter == -1) return true;  // optimal

      const double sigma =
          state_[static_cast<std::size_t>(enter)] == VarState::AtLower ? 1.0 : -1.0;
      Vector d = binv_ * column_of(enter);

      // ratio test: basic values move as beta - sigma*t*d
      double t_best = upper_[static_cast<std::size_t>(enter)];  // bound flip
      int leave_row = -1;
      bool leave_at_upper = false;
      double best_pivot = 0.0;
      for (int i = 0; i < p_; ++i) {
        const double sd = sigma * d(i);
        double limit;
        bool hits_upper;
        if (sd > 1e-11) {
          limit = beta_(i) / sd;
          hits_upper = false;
        } else if (sd < -1e-11) {
          const double ub = upper_[static_cast<std::size_t>(basis_[i])];
          if (ub == kInf) continue;
          limit = (ub - beta_(i)) / (-sd);
          hits_upper = true;
        } else {
          continue;
        }
        if (limit < 0.0) limit = 0.0;
        const bool better =
            limit < t_best - 1e-12 ||
            (limit < t_best + 1e-12 && leave_row != -1 &&
             (bland ? basis_[i] < basis_[leave_row] : std::abs(d(i)) > std::abs(best_pivot)));
        if (leave_row == -1 ? limit < t_best - 1e-12 : better) {
          t_best = limit;
          leave_row = i;
          leave_at_upper = hits_upper;
          best_pivot = d(i);
        }
      }

      if (leave_row == -1) {
        if (t_best == kInf) {
          throw SolverError("solve_l1_linf: unbounded LP (should not happen)");
        }
        // entering variable flips to its opposite bound
        beta_ -= sigma * t_best * d;
        state_[static_cast<std::size_t>(enter)] =
            sigma > 0 ? VarState::AtUpper : VarState::AtLower;
      } else {
        beta_ -= sigma * t_best * d;
        const int leaving = basis_[leave_row];
        state_[static_cast<std::size_t>(leaving)] =
            leave_at_upper ? VarState::AtUpper : VarState::AtLower;
        const double enter_base =
            state_[static_cast<std::size_t>(enter)] == VarState::AtLower
                ? 0.0
                : upper_[static_cast<std::size_t>(enter)];
        beta_(leave_row) = enter_base + sigma * t_best;
        basis_[leave_row] = enter;
        state_[static_cast<std::size_t>(enter)] = VarState::Basic;
        // eta update of the explicit inverse
        const double piv = d(leave_row);
        if (std::abs(piv) < 1e-12) {
          refactorize();
        } else {
          Eigen::RowVectorXd pivot_row = binv_.row(leave_row) / piv;
          for (int i = 0; i < p_; ++i) {
            if (i == leave_row) continue;
            const double di = d(i);
            if (di != 0.0) binv_.row(i) -= di * pivot_row;
          }
          binv_.row(leave_row) = pivot_row;
        }
      }

      ++total_iters_;
      if (total_iters_ % 128 == 0) refactorize();

      const double obj = objective();
      if (obj < last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
        stall = 0;
        bland = false;
      } else if (++stall > 64) {
        bland = true;  // anti-cycling
      }
      last_obj = obj;
    }
  }

  ColumnSolution extract(bool optimal) {
    refactorize();
    ColumnSolution sol;
    sol.omega.resize(p_);
    for (int j = 0; j < p_; ++j) {
      sol.omega(j) = variable_value(j) - variable_value(p_ + j);
    }
    sol.iterations = total_iters_;
    sol.l1_norm = sol.omega.cwiseAbs().sum();
    const double resid =
        (a_ * sol.omega - (rhs_.array() - cfg_.lambda).matrix()).cwiseAbs().maxCoeff();
    sol.max_violation = std::max(resid - cfg_.lambda, 0.0);
    sol.converged = optimal && sol.max_violation <= cfg_.primal_tol;
    return sol;
  }

  const Matrix& a_;
  const L1SolveConfig& cfg_;
  int p_;
  Vector rhs_;
  double two_lambda_ = 0.0;
  int phase_ = 1;
  int n_art_ = 0;
  int art_offset_ = 0;
  int total_iters_ = 0;
  std::vector<int> basis_;
  std::vector<VarState> state_;
  std::vector<double> upper_;
  std::vector<int> art_row_;
  std::vector<double> art_sign_;
  Matrix binv_;
  Vector beta_;
  Vector scratch_;
};

ColumnSolution solve_lambda_zero(const Matrix& a, const Vector& b,
                                 const L1SolveConfig& cfg) {
  Eigen::PartialPivLU<Matrix> lu(a);
  ColumnSolution sol;
  sol.omega = lu.solve(b);
  const double resid = (a * sol.omega - b).cwiseAbs().maxCoeff();
  if (!sol.omega.allFinite() || resid > cfg.primal_tol * (1.0 + b.cwiseAbs().maxCoeff())) {
    throw SolverError("solve_l1_linf: lambda = 0 requires an invertible matrix");
  }
  sol.l1_norm = sol.omega.cwiseAbs().sum();
  sol.max_violation = std::max(resid, 0.0);
  sol.iterations = 0;
  sol.converged = true;
  return sol;
}

}  // namespace

ColumnSolution solve_l1_linf(const Matrix& a, const Vector& b,
                             const L1SolveConfig& cfg) {
  check_square(a, "solve_l1_linf");
  if (a.rows() != b.size()) {
    throw std::invalid_argument("solve_l1_linf: dimension mismatch");
  }
  check_finite(a, "solve_l1_linf");
  check_finite(b, "solve_l1_linf");
  if (cfg.lambda < 0.0) {
    throw std::invalid_argument("solve_l1_linf: lambda must be >= 0");
  }
  if (cfg.lambda == 0.0) {
    return solve_lambda_zero(a, b, cfg);
  }
  ColumnSimplex simplex(a, b, cfg);
  return simplex.run();
}

Matrix solve_columns(const Matrix& a, const Matrix& rhs,
                     const L1SolveConfig& cfg, int num_threads) {
  check_square(a, "solve_columns");
  if (a.rows() != rhs.rows()) {
    throw std::invalid_argument("solve_columns: dimension mismatch");
  }
  const int m = static_cast<int>(rhs.cols());
  Matrix out(a.rows(), m);
  if (num_threads <= 0) {
    num_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (num_threads <= 0) num_threads = 1;
  }

  std::mutex err_mutex;
  std::string first_error;
  auto do_column = [&](int j) {
    try {
      ColumnSolution sol = solve_l1_linf(a, rhs.col(j), cfg);
      if (!sol.converged) {
        throw SolverError("column " + std::to_string(j) +
                          ": no convergence after " +
                          std::to_string(sol.iterations) + " iterations");
      }
      out.col(j) = sol.omega;
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (first_error.empty()) {
        first_error = "solve_columns: column " + std::to_string(j) + ": " + e.what();
      }
    }
  };

  if (num_threads == 1 || m <= 1) {
    for (int j = 0; j < m; ++j) do_column(j);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int j = next.fetch_add(1); j < m; j = next.fetch_add(1)) do_column(j);
    };
    std::vector<std::thread> pool;
    const int nw = std::min(num_threads, m);
    pool.reserve(static_cast<std::size_t>(nw));
    for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (!first_error.empty()) throw SolverError(first_error);
  return out;
}

Matrix soft_threshold_matrix(const Matrix& d, double tau) {
  if (tau < 0.0) {
    throw std::invalid_argument("soft_threshold_matrix: tau must be >= 0");
  }
  return d.unaryExpr([tau](double v) {
    const double mag = std::abs(v) - tau;
    return mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
  });
}

}  // namespace transclime
