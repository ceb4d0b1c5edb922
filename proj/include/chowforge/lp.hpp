#pragma once

#include <vector>

#include "chowforge/rational.hpp"

namespace chowforge::lp {

enum class Relation { LessEq, Equal, GreaterEq };

struct Row {
  std::vector<Rational> coeffs;
  Relation rel = Relation::Equal;
  Rational rhs;
};

// A pure feasibility problem. Variables are nonnegative unless marked free.
struct Problem {
  int num_vars = 0;
  std::vector<bool> is_free;  // empty means all nonnegative
  std::vector<Row> rows;
};

struct Result {
  bool feasible = false;
  std::vector<Rational> point;  // one value per variable when feasible
};

// Phase-one simplex over exact rationals with Bland's rule. Deterministic.
Result solve_feasibility(const Problem& p);

}  // namespace chowforge::lp
