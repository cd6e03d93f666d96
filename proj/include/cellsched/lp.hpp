#ifndef CELLSCHED_LP_HPP
#define CELLSCHED_LP_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cellsched::lp {

enum class Relation : std::uint8_t { Ge, Le, Eq };
enum class Status : std::uint8_t { Optimal, Infeasible, Unbounded };

/// min c'x  s.t.  A x (rel) b,  x >= 0. Dense row-major A.
struct Problem {
  int rows = 0;
  int cols = 0;
  std::vector<double> cost;     // size cols
  std::vector<double> a;        // size rows*cols, row-major
  std::vector<Relation> rel;    // size rows
  std::vector<double> rhs;      // size rows

  void resize(int r, int c) {
    rows = r;
    cols = c;
    cost.assign(c, 0.0);
    a.assign(static_cast<std::size_t>(r) * c, 0.0);
    rel.assign(r, Relation::Ge);
    rhs.assign(r, 0.0);
  }
  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

/// Duals follow the minimization convention: >= rows have dual >= 0,
/// <= rows have dual <= 0, = rows are free. At an optimum the reduced cost
/// c0 - dual'a of any column is >= -1e-9.
struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> x;        // size cols
  double objective = 0;
  std::vector<double> dual;     // size rows
  std::vector<char> basic;      // size cols, structural variables only
  int iterations = 0;
};

struct SolverOptions {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-7;       // allowed artificial mass at end of phase 1
  int max_iterations = 200000;
  int refactor_every = 64;
};

namespace detail {

/// Two-phase revised simplex over a dense standard form with an explicit
/// basis inverse. Dantzig pricing, switching to Bland's rule permanently
/// after 5*(rows+cols) degenerate pivots.
class SimplexEngine {
 public:
  SimplexEngine(const Problem& p, const SolverOptions& opt) : p_(p), opt_(opt), m_(p.rows) {
    build_standard_form();
  }

  Solution run() {
    Solution sol;
    sol.x.assign(p_.cols, 0.0);
    sol.dual.assign(m_, 0.0);
    sol.basic.assign(p_.cols, 0);

    if (n_art_ > 0) {
      phase_ = 1;
      const Status s1 = iterate();
      if (s1 != Status::Optimal) throw std::runtime_error("lp: phase 1 did not terminate");
      refactor();
      double art_mass = 0;
      for (int i = 0; i < m_; ++i)
        if (is_artificial(basis_[i])) art_mass += xb_[i];
      if (art_mass > opt_.feas_tol) {
        sol.status = Status::Infeasible;
        sol.iterations = iterations_;
        return sol;
      }
      drive_out_artificials();
    }

    phase_ = 2;
    const Status s2 = iterate();
    sol.iterations = iterations_;
    if (s2 == Status::Unbounded) {
      sol.status = Status::Unbounded;
      return sol;
    }
    refactor();
    compute_duals();
    for (int i = 0; i < m_; ++i) {
      const int v = basis_[i];
      if (v < p_.cols) {
        sol.x[v] = xb_[i] < 0 && xb_[i] > -1e-9 ? 0.0 : xb_[i];
        sol.basic[v] = 1;
      }
    }
    sol.objective = 0;
    for (int j = 0; j < p_.cols; ++j) sol.objective += p_.cost[j] * sol.x[j];
    for (int r = 0; r < m_; ++r) sol.dual[r] = flip_[r] ? -y_[r] : y_[r];
    sol.status = Status::Optimal;
    return sol;
  }

 private:
  static constexpr double kDegenStep = 1e-12;
  static constexpr double kRatioTie = 1e-12;

  const Problem& p_;
  SolverOptions opt_;
  int m_;                        // rows
  int n_total_ = 0;              // structural + slack/surplus + artificial
  int n_art_ = 0;
  int first_art_ = 0;
  std::vector<double> astd_;     // column-major standard form, n_total_ x m_
  std::vector<double> b_;        // rhs after sign normalization
  std::vector<char> flip_;       // rows multiplied by -1
  std::vector<double> cost2_;    // phase-2 costs per standard-form column
  std::vector<int> basis_;       // size m_
  std::vector<char> in_basis_;   // size n_total_
  std::vector<char> banned_;     // artificials that left the basis
  std::vector<double> binv_;     // m_ x m_, row-major
  std::vector<double> xb_;       // size m_
  std::vector<double> y_;        // size m_
  std::vector<double> u_;        // size m_ work vector
  int phase_ = 1;
  int iterations_ = 0;
  int pivots_since_refactor_ = 0;
  int degenerate_pivots_ = 0;
  bool bland_ = false;

  double* col(int j) { return &astd_[static_cast<std::size_t>(j) * m_]; }
  bool is_artificial(int j) const { return j >= first_art_; }

  void build_standard_form() {
    flip_.assign(m_, 0);
    b_.resize(m_);
    std::vector<Relation> rel(m_);
    for (int r = 0; r < m_; ++r) {
      if (p_.rhs[r] < 0) {
        flip_[r] = 1;
        b_[r] = -p_.rhs[r];
        rel[r] = p_.rel[r] == Relation::Ge   ? Relation::Le
                 : p_.rel[r] == Relation::Le ? Relation::Ge
                                             : Relation::Eq;
      } else {
        b_[r] = p_.rhs[r];
        rel[r] = p_.rel[r];
      }
    }
    int n_slack = 0;
    for (int r = 0; r < m_; ++r)
      if (rel[r] != Relation::Eq) ++n_slack;
    for (int r = 0; r < m_; ++r)
      if (rel[r] != Relation::Le) ++n_art_;
    first_art_ = p_.cols + n_slack;
    n_total_ = first_art_ + n_art_;

    astd_.assign(static_cast<std::size_t>(n_total_) * m_, 0.0);
    cost2_.assign(n_total_, 0.0);
    for (int j = 0; j < p_.cols; ++j) {
      cost2_[j] = p_.cost[j];
      double* cj = col(j);
      for (int r = 0; r < m_; ++r) {
        const double v = p_.at(r, j);
        cj[r] = flip_[r] ? -v : v;
      }
    }
    basis_.assign(m_, -1);
    in_basis_.assign(n_total_, 0);
    banned_.assign(n_total_, 0);
    int slack_idx = p_.cols;
    int art_idx = first_art_;
    for (int r = 0; r < m_; ++r) {
      if (rel[r] == Relation::Le) {
        col(slack_idx)[r] = 1.0;
        basis_[r] = slack_idx;
        ++slack_idx;
      } else if (rel[r] == Relation::Ge) {
        col(slack_idx)[r] = -1.0;  // surplus
        ++slack_idx;
        col(art_idx)[r] = 1.0;
        basis_[r] = art_idx;
        ++art_idx;
      } else {
        col(art_idx)[r] = 1.0;
        basis_[r] = art_idx;
        ++art_idx;
      }
    }
    for (int r = 0; r < m_; ++r) in_basis_[basis_[r]] = 1;
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) binv_[static_cast<std::size_t>(r) * m_ + r] = 1.0;
    xb_ = b_;
    y_.assign(m_, 0.0);
    u_.assign(m_, 0.0);
  }

  double phase_cost(int j) const {
    if (phase_ == 1) return is_artificial(j) ? 1.0 : 0.0;
    return cost2_[j];
  }

  void compute_duals() {
    for (int k = 0; k < m_; ++k) {
      double acc = 0;
      for (int i = 0; i < m_; ++i)
        acc += phase_cost(basis_[i]) * binv_[static_cast<std::size_t>(i) * m_ + k];
      y_[k] = acc;
    }
  }

  double reduced_cost(int j) {
    const double* cj = col(j);
    double acc = phase_cost(j);
    for (int i = 0; i < m_; ++i) acc -= y_[i] * cj[i];
    return acc;
  }

  int choose_entering() {
    compute_duals();
    int best = -1;
    double best_d = -opt_.pivot_tol;
    for (int j = 0; j < n_total_; ++j) {
      if (in_basis_[j] || banned_[j]) continue;
      if (phase_ == 2 && is_artificial(j)) continue;
      const double d = reduced_cost(j);
      if (d < best_d) {
        if (bland_) return j;  // lowest index with negative reduced cost
        best_d = d;
        best = j;
      }
    }
    return best;
  }

  int choose_leaving(int enter) {
    const double* cj = col(enter);
    for (int i = 0; i < m_; ++i) {
      double acc = 0;
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) acc += row[k] * cj[k];
      u_[i] = acc;
    }
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m_; ++i) {
      if (u_[i] <= opt_.pivot_tol) continue;
      const double ratio = std::max(xb_[i], 0.0) / u_[i];
      if (ratio < best_ratio - kRatioTie) {
        best_ratio = ratio;
        leave = i;
      } else if (leave >= 0 && std::abs(ratio - best_ratio) <= kRatioTie &&
                 basis_[i] < basis_[leave]) {
        leave = i;
      }
    }
    return leave;
  }

  void pivot(int leave, int enter) {
    const double piv = u_[leave];
    const double step = xb_[leave] / piv;
    if (step < kDegenStep) {
      if (++degenerate_pivots_ > 5 * (p_.rows + p_.cols)) bland_ = true;
    }
    double* lrow = &binv_[static_cast<std::size_t>(leave) * m_];
    for (int k = 0; k < m_; ++k) lrow[k] /= piv;
    xb_[leave] = step;
    for (int i = 0; i < m_; ++i) {
      if (i == leave || u_[i] == 0.0) continue;
      double* irow = &binv_[static_cast<std::size_t>(i) * m_];
      const double f = u_[i];
      for (int k = 0; k < m_; ++k) irow[k] -= f * lrow[k];
      xb_[i] -= f * step;
      if (xb_[i] < 0 && xb_[i] > -1e-11) xb_[i] = 0;
    }
    const int old = basis_[leave];
    in_basis_[old] = 0;
    if (is_artificial(old)) banned_[old] = 1;
    basis_[leave] = enter;
    in_basis_[enter] = 1;
    if (++pivots_since_refactor_ >= opt_.refactor_every) refactor();
  }

  Status iterate() {
    while (true) {
      if (++iterations_ > opt_.max_iterations)
        throw std::runtime_error("lp: iteration limit exceeded");
      const int enter = choose_entering();
      if (enter < 0) return Status::Optimal;
      const int leave = choose_leaving(enter);
      if (leave < 0) {
        if (phase_ == 1) throw std::runtime_error("lp: unbounded phase-1 problem");
        return Status::Unbounded;
      }
      pivot(leave, enter);
    }
  }

  /// Rebuilds the basis inverse by Gauss-Jordan with partial pivoting and
  /// refreshes the basic solution, bounding drift from repeated updates.
  void refactor() {
    pivots_since_refactor_ = 0;
    const int m = m_;
    std::vector<double> work(static_cast<std::size_t>(m) * 2 * m, 0.0);
    auto w = [&](int r, int c) -> double& { return work[static_cast<std::size_t>(r) * 2 * m + c]; };
    for (int i = 0; i < m; ++i) {
      const double* cj = col(basis_[i]);
      for (int r = 0; r < m; ++r) w(r, i) = cj[r];
      w(i, m + i) = 1.0;
    }
    for (int c = 0; c < m; ++c) {
      int piv_row = c;
      double piv_val = std::abs(w(c, c));
      for (int r = c + 1; r < m; ++r) {
        if (std::abs(w(r, c)) > piv_val) {
          piv_val = std::abs(w(r, c));
          piv_row = r;
        }
      }
      if (piv_val < 1e-13) throw std::runtime_error("lp: singular basis");
      if (piv_row != c)
        for (int k = 0; k < 2 * m; ++k) std::swap(w(c, k), w(piv_row, k));
      const double inv = 1.0 / w(c, c);
      for (int k = 0; k < 2 * m; ++k) w(c, k) *= inv;
      for (int r = 0; r < m; ++r) {
        if (r == c) continue;
        const double f = w(r, c);
        if (f == 0.0) continue;
        for (int k = 0; k < 2 * m; ++k) w(r, k) -= f * w(c, k);
      }
    }
    for (int r = 0; r < m; ++r)
      for (int k = 0; k < m; ++k) binv_[static_cast<std::size_t>(r) * m + k] = w(r, m + k);
    for (int r = 0; r < m; ++r) {
      double acc = 0;
      const double* row = &binv_[static_cast<std::size_t>(r) * m];
      for (int k = 0; k < m; ++k) acc += row[k] * b_[k];
      xb_[r] = (acc < 0 && acc > -1e-11) ? 0.0 : acc;
    }
  }

  /// Pivots zero-valued artificials out of the basis where a structural or
  /// slack column can replace them; rows with no candidate are redundant and
  /// keep their artificial at value zero.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (int j = 0; j < first_art_; ++j) {
        if (in_basis_[j]) continue;
        const double* cj = col(j);
        double uij = 0;
        const double* row = &binv_[static_cast<std::size_t>(i) * m_];
        for (int k = 0; k < m_; ++k) uij += row[k] * cj[k];
        if (std::abs(uij) > opt_.pivot_tol) {
          const double* c2 = col(j);
          for (int r = 0; r < m_; ++r) {
            double acc = 0;
            const double* rrow = &binv_[static_cast<std::size_t>(r) * m_];
            for (int k = 0; k < m_; ++k) acc += rrow[k] * c2[k];
            u_[r] = acc;
          }
          xb_[i] = 0;  // artificial sits at zero after a feasible phase 1
          pivot(i, j);
          break;
        }
      }
    }
  }
};

}  // namespace detail

/// Solves the problem to a basic optimal solution with exact dual prices.
/// Deterministic: identical inputs give identical outputs.
inline Solution solve(const Problem& p, const SolverOptions& opt = {}) {
  if (p.rows <= 0 || p.cols <= 0) throw std::invalid_argument("lp: empty problem");
  if (static_cast<int>(p.cost.size()) != p.cols ||
      static_cast<int>(p.rhs.size()) != p.rows ||
      static_cast<int>(p.rel.size()) != p.rows ||
      p.a.size() != static_cast<std::size_t>(p.rows) * p.cols)
    throw std::invalid_argument("lp: inconsistent problem dimensions");
  detail::SimplexEngine engine(p, opt);
  return engine.run();
}

}  // namespace cellsched::lp

#endif  // CELLSCHED_LP_HPP
