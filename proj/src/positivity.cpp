#include "chowforge/positivity.hpp"

#include <algorithm>

#include "chowforge/lp.hpp"

namespace chowforge {

namespace {

// Coefficient of x_F in the j-th linear relation, j in [1, n).
Rational move_coeff(Subset mask, int j) {
  int v = 0;
  if (mask & 1) v += 1;
  if (mask & (Subset(1) << j)) v -= 1;
  return Rational(v);
}

// All chains of proper flats, as increasing id sequences. Ids are ordered
// by (rank, mask), so nesting always increases the id.
std::vector<std::vector<int>> all_chains(const Matroid& m) {
  const auto& flats = m.proper_flats();
  int nf = static_cast<int>(flats.size());
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto extend = [&](auto&& self, int last) -> void {
    out.push_back(cur);
    for (int f = last + 1; f < nf; f++) {
      if (last >= 0) {
        Subset prev = flats[last].mask;
        if ((prev & flats[f].mask) != prev) continue;
      }
      cur.push_back(f);
      self(self, f);
      cur.pop_back();
    }
  };
  extend(extend, -1);
  return out;
}

// Chains with no interior rank gap. The strict (ample) sweep is limited to
// these: across a two-rank gap, a modular pair of middle flats F, G with
// union and intersection on the chain satisfies c_F + c_G = 0 for every
// representative, so demanding strict positivity there rejects the whole
// divisor space rather than testing the class.
bool saturated(const Matroid& m, const std::vector<int>& chain) {
  const auto& flats = m.proper_flats();
  for (size_t i = 1; i < chain.size(); i++) {
    if (flats[chain[i]].rank != flats[chain[i - 1]].rank + 1) return false;
  }
  return true;
}

std::vector<char> insertable_flats(const Matroid& m,
                                   const std::vector<int>& chain) {
  const auto& flats = m.proper_flats();
  int nf = static_cast<int>(flats.size());
  std::vector<char> ins(nf, 1);
  for (int member : chain) ins[member] = 0;
  for (int f = 0; f < nf; f++) {
    if (!ins[f]) continue;
    for (int member : chain) {
      Subset a = flats[f].mask;
      Subset b = flats[member].mask;
      if ((a & b) != a && (a & b) != b) {
        ins[f] = 0;
        break;
      }
    }
  }
  return ins;
}

enum class FlagMode { Nonneg, NonnegAll, Strict };

// One flag subproblem: find a representative c = d + J-moves (scaled by an
// extra variable in strict mode) vanishing on the chain and bounded below
// on the selected flats. Returns the representative of d on success.
std::optional<std::vector<Rational>> solve_flag(const ChowRing& ring,
                                                const DivisorClass& d,
                                                const std::vector<int>& chain,
                                                FlagMode mode) {
  const Matroid& m = ring.matroid();
  const auto& flats = m.proper_flats();
  int nf = static_cast<int>(flats.size());
  int nt = m.n() - 1;
  bool strict = (mode == FlagMode::Strict);

  lp::Problem p;
  p.num_vars = nt + (strict ? 1 : 0);
  p.is_free.assign(p.num_vars, true);
  if (strict) p.is_free[nt] = false;

  std::vector<char> in_chain(nf, 0);
  for (int f : chain) in_chain[f] = 1;
  std::vector<char> bounded = (mode == FlagMode::NonnegAll)
                                  ? std::vector<char>(nf, 1)
                                  : insertable_flats(m, chain);

  auto flat_row = [&](int f) {
    lp::Row row;
    row.coeffs.assign(p.num_vars, Rational(0));
    for (int j = 1; j <= nt; j++) {
      row.coeffs[j - 1] = move_coeff(flats[f].mask, j);
    }
    if (strict) {
      row.coeffs[nt] = d.coeffs[f];
    } else {
      row.rhs = -d.coeffs[f];
    }
    return row;
  };

  for (int f = 0; f < nf; f++) {
    if (in_chain[f]) {
      lp::Row row = flat_row(f);
      row.rel = lp::Relation::Equal;
      p.rows.push_back(std::move(row));
    } else if (bounded[f]) {
      lp::Row row = flat_row(f);
      row.rel = lp::Relation::GreaterEq;
      if (strict) row.rhs = 1;
      p.rows.push_back(std::move(row));
    }
  }
  if (strict) {
    lp::Row row;
    row.coeffs.assign(p.num_vars, Rational(0));
    row.coeffs[nt] = 1;
    row.rel = lp::Relation::GreaterEq;
    row.rhs = 1;
    p.rows.push_back(std::move(row));
  }

  lp::Result res = lp::solve_feasibility(p);
  if (!res.feasible) return std::nullopt;

  Rational scale = strict ? res.point[nt] : Rational(1);
  std::vector<Rational> c(nf);
  for (int f = 0; f < nf; f++) {
    Rational v = d.coeffs[f] * scale;
    for (int j = 1; j <= nt; j++) {
      v += res.point[j - 1] * move_coeff(flats[f].mask, j);
    }
    c[f] = v / scale;
  }
  return c;
}

PositivityResult flag_sweep(const ChowRing& ring, const DivisorClass& d,
                            FlagMode mode, const std::string& property) {
  ring.element_of(d);  // validates the divisor belongs to this ring
  PositivityResult out;
  NefCertificate cert;
  cert.property = property;
  for (const auto& chain : all_chains(ring.matroid())) {
    if (mode == FlagMode::Strict && !saturated(ring.matroid(), chain)) {
      continue;
    }
    auto c = solve_flag(ring, d, chain, mode);
    if (!c) return out;
    cert.entries.emplace_back(chain, std::move(*c));
  }
  out.ok = true;
  out.certificate = std::move(cert);
  return out;
}

void check_arity(const ChowRing& ring, size_t got) {
  size_t want = static_cast<size_t>(ring.top_degree());
  if (got != want) {
    throw Error(ErrorCode::Rank, "expected " + std::to_string(want) +
                                     " factors, got " + std::to_string(got));
  }
}

void check_subsets(const Matroid& m, const std::vector<Subset>& sets) {
  Subset ground = full_set(m.n());
  for (Subset s : sets) {
    if (s == 0 || (s | ground) != ground) {
      throw Error(ErrorCode::Parse, "subsets must be nonempty and within E");
    }
  }
}

}  // namespace

PositivityResult check_P3(const ChowRing& ring, const DivisorClass& d) {
  return flag_sweep(ring, d, FlagMode::Nonneg, "P3");
}

PositivityResult check_P2(const ChowRing& ring, const DivisorClass& d) {
  return flag_sweep(ring, d, FlagMode::NonnegAll, "P2");
}

PositivityResult check_ample(const ChowRing& ring, const DivisorClass& d) {
  return flag_sweep(ring, d, FlagMode::Strict, "ample");
}

LiftResult check_P1(const ChowRing& ring, const DivisorClass& d) {
  ring.element_of(d);
  const Matroid& m = ring.matroid();
  int n = m.n();
  if (n > 10) {
    throw Error(ErrorCode::Capacity,
                "submodular lift needs 2^n variables; n > 10 not supported");
  }
  Subset ground = full_set(n);
  int nt = n - 1;

  // Variables: the J-moves, then one free value per proper non-flat subset.
  std::vector<int> var_of(ground + 1, -1);
  int nv = nt;
  for (Subset s = 1; s < ground; s++) {
    if (!m.is_flat(s)) var_of[s] = nv++;
  }

  lp::Problem p;
  p.num_vars = nv;
  p.is_free.assign(nv, true);

  // value(s) = constant + linear form in the variables
  auto accumulate = [&](lp::Row& row, Subset s, int sign) {
    if (s == 0 || s == ground) return;
    Rational sg(sign);
    if (var_of[s] >= 0) {
      row.coeffs[var_of[s]] += sg;
      return;
    }
    int f = *m.proper_flat_id(s);
    for (int j = 1; j <= nt; j++) {
      row.coeffs[j - 1] += sg * move_coeff(s, j);
    }
    row.rhs -= sg * d.coeffs[f];
  };

  for (Subset s = 0; s <= ground; s++) {
    for (int a = 0; a < n; a++) {
      if (s & (Subset(1) << a)) continue;
      for (int b = a + 1; b < n; b++) {
        if (s & (Subset(1) << b)) continue;
        Subset sa = s | (Subset(1) << a);
        Subset sb = s | (Subset(1) << b);
        lp::Row row;
        row.coeffs.assign(nv, Rational(0));
        row.rel = lp::Relation::GreaterEq;
        accumulate(row, sa, 1);
        accumulate(row, sb, 1);
        accumulate(row, sa | sb, -1);
        accumulate(row, s, -1);
        p.rows.push_back(std::move(row));
      }
    }
  }

  LiftResult out;
  lp::Result res = lp::solve_feasibility(p);
  if (!res.feasible) return out;

  SubmodularLift lift;
  lift.n = n;
  lift.values.assign(size_t(1) << n, Rational(0));
  for (Subset s = 1; s < ground; s++) {
    if (var_of[s] >= 0) {
      lift.values[s] = res.point[var_of[s]];
    } else {
      int f = *m.proper_flat_id(s);
      Rational v = d.coeffs[f];
      for (int j = 1; j <= nt; j++) {
        v += res.point[j - 1] * move_coeff(s, j);
      }
      lift.values[s] = v;
    }
  }
  out.ok = true;
  out.lift = std::move(lift);
  return out;
}

bool is_big_and_nef(const ChowRing& ring, const DivisorClass& d) {
  if (!check_P3(ring, d).ok) return false;
  ChowElement top = ring.pow(ring.element_of(d), ring.top_degree());
  return ring.degree_top(top) > 0;
}

std::map<std::vector<int>, Rational> nef_product_expand(
    const ChowRing& ring, const std::vector<DivisorClass>& factors) {
  if (static_cast<int>(factors.size()) > ring.top_degree()) {
    throw Error(ErrorCode::Rank, "more factors than the top degree");
  }
  std::map<std::vector<int>, Rational> terms;
  terms[{}] = Rational(1);
  const auto& flats = ring.matroid().proper_flats();
  int nf = static_cast<int>(flats.size());
  for (const DivisorClass& d : factors) {
    PositivityResult p3 = check_P3(ring, d);
    if (!p3.ok) {
      throw Error(ErrorCode::InfeasiblePrecondition,
                  "a factor is not nef; flag expansion needs nef factors");
    }
    std::map<std::vector<int>, std::vector<Rational>> cert;
    for (auto& [chain, c] : p3.certificate->entries) {
      cert.emplace(chain, std::move(c));
    }
    std::map<std::vector<int>, Rational> next;
    for (const auto& [chain, coeff] : terms) {
      const std::vector<Rational>& c = cert.at(chain);
      std::vector<char> ins = insertable_flats(ring.matroid(), chain);
      for (int f = 0; f < nf; f++) {
        if (!ins[f] || c[f] == 0) continue;
        std::vector<int> longer = chain;
        longer.insert(std::upper_bound(longer.begin(), longer.end(), f), f);
        next[longer] += coeff * c[f];
      }
    }
    terms = std::move(next);
  }
  for (auto it = terms.begin(); it != terms.end();) {
    it = (it->second == 0) ? terms.erase(it) : std::next(it);
  }
  return terms;
}

bool fake_effective_probe(const ChowRing& ring, const DivisorClass& d,
                          const std::vector<DivisorClass>& generators) {
  int len = ring.top_degree() - 1;
  if (len < 0) return true;
  ChowElement base = ring.element_of(d);
  int ng = static_cast<int>(generators.size());
  std::vector<ChowElement> gens;
  gens.reserve(ng);
  for (const DivisorClass& g : generators) gens.push_back(ring.element_of(g));

  bool ok = true;
  auto scan = [&](auto&& self, int depth, int start,
                  const ChowElement& acc) -> void {
    if (!ok) return;
    if (depth == len) {
      if (ring.degree_top(acc) < 0) ok = false;
      return;
    }
    for (int g = start; g < ng && ok; g++) {
      self(self, depth + 1, g, ring.multiply(acc, gens[g]));
    }
  };
  scan(scan, 0, 0, base);
  return ok;
}

Rational mixed_degree(const ChowRing& ring,
                      const std::vector<DivisorClass>& factors) {
  check_arity(ring, factors.size());
  ChowElement acc = ring.one();
  for (const DivisorClass& d : factors) {
    acc = ring.multiply(acc, ring.element_of(d));
  }
  return ring.degree_top(acc);
}

Rational volume_polynomial(const ChowRing& ring,
                           const std::vector<DivisorClass>& factors,
                           const std::vector<int>& exponents) {
  if (factors.size() != exponents.size()) {
    throw Error(ErrorCode::Parse, "one exponent per factor expected");
  }
  std::vector<DivisorClass> expanded;
  Rational scale(1);
  for (size_t i = 0; i < factors.size(); i++) {
    if (exponents[i] < 0) {
      throw Error(ErrorCode::Parse, "exponents must be nonnegative");
    }
    for (int k = 0; k < exponents[i]; k++) {
      expanded.push_back(factors[i]);
      scale *= Rational(k + 1);
    }
  }
  return mixed_degree(ring, expanded) / scale;
}

int numerical_dimension(const ChowRing& ring, const DivisorClass& d) {
  ChowElement e = ring.element_of(d);
  ChowElement acc = ring.one();
  for (int t = 1; t <= ring.top_degree(); t++) {
    acc = ring.multiply(acc, e);
    if (acc.is_zero()) return t - 1;
  }
  return ring.top_degree();
}

Integer deg_alpha_product(const ChowRing& ring,
                          const std::vector<Subset>& sets) {
  check_arity(ring, sets.size());
  check_subsets(ring.matroid(), sets);
  bool dhr = ring.matroid().dragon_hall_rado(sets);
  ChowElement acc = ring.one();
  for (Subset s : sets) acc = ring.multiply(acc, ring.alpha_S(s));
  Rational deg = ring.degree_top(acc);
  if (deg != Rational(dhr ? 1 : 0)) {
    throw Error(ErrorCode::Internal,
                "alpha_S product degree disagrees with dragon-Hall-Rado");
  }
  return Integer(dhr ? 1 : 0);
}

bool beta_product_positive(const ChowRing& ring,
                           const std::vector<Subset>& sets) {
  Integer dhr = deg_alpha_product(ring, sets);
  ChowElement acc = ring.one();
  for (Subset s : sets) acc = ring.multiply(acc, ring.beta_S(s));
  Rational deg = ring.degree_top(acc);
  bool positive = deg > 0;
  if (positive != (dhr == 1)) {
    throw Error(ErrorCode::Internal,
                "beta_S product positivity disagrees with dragon-Hall-Rado");
  }
  return positive;
}

KvReport kv_weak_scan(const KTheory& kt, const DivisorClass& d) {
  const ChowRing& ring = kt.ring();
  ChowElement z = kt.zeta(d * Rational(-1));
  int r = ring.matroid().rank();
  Rational value = Rational((r - 1) % 2 == 0 ? 1 : -1) * ring.degree_top(z);
  return {value >= 0, value};
}

KvReport kv_strong_scan(const KTheory& kt, const DivisorClass& d) {
  const ChowRing& ring = kt.ring();
  int r = ring.matroid().rank();
  Rational value = Rational((r - 1) % 2 == 0 ? 1 : -1) *
                   kt.chi_hrr_line(d * Rational(-1));
  return {value >= 0, value};
}

Rank3Kv rank3_kv_ingredients(const ChowRing& ring, const DivisorClass& d) {
  if (ring.matroid().rank() != 3) {
    throw Error(ErrorCode::Rank, "decomposition is specific to rank 3");
  }
  ChowElement e = ring.element_of(d);
  Rank3Kv out;
  out.a = ring.degree_top(ring.multiply(ring.alpha(), e));
  Rational rhs = out.a * (out.a - 1);
  const auto& flats = ring.matroid().proper_flats();
  for (int f = 0; f < static_cast<int>(flats.size()); f++) {
    if (flats[f].rank != 2) continue;
    Rational bf = ring.degree_top(ring.multiply(e, ring.x(flats[f].mask)));
    out.b.emplace_back(f, bf);
    rhs -= bf * (bf - 1);
  }
  out.value =
      ring.degree_top(ring.multiply(e, e - ring.alpha() + ring.S_k(1)));
  if (out.value != rhs) {
    throw Error(ErrorCode::Internal,
                "rank-3 decomposition identity failed; input may not be nef");
  }
  return out;
}

}  // namespace chowforge
