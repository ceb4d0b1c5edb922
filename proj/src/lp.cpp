#include "chowforge/lp.hpp"

#include "chowforge/error.hpp"

namespace chowforge::lp {

namespace {

// Tableau over the structural and slack columns only. Artificial variables
// exist solely as basis labels (cols + row index): they never re-enter the
// basis and their values are never read, so their columns are not stored.
struct Tableau {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> rhs;
  std::vector<Rational> obj;
  Rational obj_rhs;
  std::vector<int> basis;
};

void pivot(Tableau& t, int prow, int pcol) {
  Rational inv = Rational(1) / t.a[prow][pcol];
  for (int j = 0; j < t.cols; j++) t.a[prow][j] *= inv;
  t.rhs[prow] *= inv;
  for (int i = 0; i < t.rows; i++) {
    if (i == prow || t.a[i][pcol] == 0) continue;
    Rational f = t.a[i][pcol];
    for (int j = 0; j < t.cols; j++) {
      if (t.a[prow][j] != 0) t.a[i][j] -= f * t.a[prow][j];
    }
    t.rhs[i] -= f * t.rhs[prow];
  }
  if (t.obj[pcol] != 0) {
    Rational f = t.obj[pcol];
    for (int j = 0; j < t.cols; j++) {
      if (t.a[prow][j] != 0) t.obj[j] -= f * t.a[prow][j];
    }
    t.obj_rhs -= f * t.rhs[prow];
  }
  t.basis[prow] = pcol;
}

}  // namespace

Result solve_feasibility(const Problem& p) {
  int m = static_cast<int>(p.rows.size());
  auto var_is_free = [&](int j) {
    return !p.is_free.empty() && p.is_free[j];
  };

  std::vector<int> col_of(p.num_vars);
  int next = 0;
  for (int j = 0; j < p.num_vars; j++) {
    col_of[j] = next;
    next += var_is_free(j) ? 2 : 1;
  }
  int struct_cols = next;
  int slack_cols = 0;
  for (const Row& r : p.rows) {
    if (r.rel != Relation::Equal) slack_cols++;
  }
  int cols = struct_cols + slack_cols;

  Tableau t;
  t.rows = m;
  t.cols = cols;
  t.a.assign(m, std::vector<Rational>(cols, Rational(0)));
  t.rhs.assign(m, Rational(0));
  t.obj.assign(cols, Rational(0));
  t.basis.assign(m, -1);

  // Orient each row so its right side is nonnegative, preferring the
  // orientation whose slack can start basic: a <= row with rhs >= 0 needs
  // no artificial variable at all.
  int slack_at = struct_cols;
  bool any_artificial = false;
  for (int i = 0; i < m; i++) {
    const Row& r = p.rows[i];
    if (static_cast<int>(r.coeffs.size()) != p.num_vars) {
      throw Error(ErrorCode::Internal, "lp row width mismatch");
    }
    bool flip;
    if (r.rhs != 0) {
      flip = r.rhs < 0;
    } else {
      flip = (r.rel == Relation::GreaterEq);
    }
    Rational sign(flip ? -1 : 1);
    for (int j = 0; j < p.num_vars; j++) {
      Rational v = r.coeffs[j] * sign;
      t.a[i][col_of[j]] = v;
      if (var_is_free(j)) t.a[i][col_of[j] + 1] = -v;
    }
    t.rhs[i] = r.rhs * sign;
    if (r.rel != Relation::Equal) {
      bool surplus = (r.rel == Relation::GreaterEq) != flip;
      t.a[i][slack_at] = Rational(surplus ? -1 : 1);
      if (!surplus) {
        t.basis[i] = slack_at;
      }
      slack_at++;
    }
    if (t.basis[i] < 0) {
      t.basis[i] = cols + i;
      any_artificial = true;
      for (int j = 0; j < cols; j++) t.obj[j] += t.a[i][j];
      t.obj_rhs += t.rhs[i];
    }
  }

  // Minimize the artificial sum. Dantzig's rule drives the usual case;
  // after a run of degenerate pivots switch to Bland's rule, which cannot
  // cycle, until the objective strictly drops again.
  if (any_artificial) {
    int stalled = 0;
    bool bland = false;
    while (t.obj_rhs > 0) {
      int enter = -1;
      if (bland) {
        for (int j = 0; j < cols && enter < 0; j++) {
          if (t.obj[j] > 0) enter = j;
        }
      } else {
        for (int j = 0; j < cols; j++) {
          if (t.obj[j] > 0 && (enter < 0 || t.obj[j] > t.obj[enter])) {
            enter = j;
          }
        }
      }
      if (enter < 0) break;
      int leave = -1;
      Rational best;
      for (int i = 0; i < m; i++) {
        if (t.a[i][enter] <= 0) continue;
        Rational ratio = t.rhs[i] / t.a[i][enter];
        if (leave < 0 || ratio < best ||
            (ratio == best && t.basis[i] < t.basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) {
        throw Error(ErrorCode::Internal, "unbounded phase-one objective");
      }
      Rational before = t.obj_rhs;
      pivot(t, leave, enter);
      if (t.obj_rhs < before) {
        stalled = 0;
        bland = false;
      } else if (++stalled > 40) {
        bland = true;
      }
    }
  }

  Result res;
  res.feasible = (t.obj_rhs == 0);
  if (!res.feasible) return res;

  res.point.assign(p.num_vars, Rational(0));
  std::vector<Rational> col_val(cols, Rational(0));
  for (int i = 0; i < m; i++) {
    if (t.basis[i] < cols) col_val[t.basis[i]] = t.rhs[i];
  }
  for (int j = 0; j < p.num_vars; j++) {
    res.point[j] = col_val[col_of[j]];
    if (var_is_free(j)) res.point[j] -= col_val[col_of[j] + 1];
  }
  return res;
}

}  // namespace chowforge::lp
