#include "chowforge/identities.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "chowforge/chow.hpp"
#include "chowforge/io.hpp"
#include "chowforge/ktheory.hpp"
#include "chowforge/maps.hpp"
#include "chowforge/positivity.hpp"

namespace chowforge {

namespace {

struct Suite {
  const Matroid& m;
  const IdentityOptions& opt;
  ChowRing ring;
  KTheory kt;
  std::mt19937_64 rng;
  std::vector<IdentityResult> out;

  Suite(const Matroid& matroid, const IdentityOptions& options)
      : m(matroid), opt(options), ring(matroid), kt(ring), rng(options.seed) {}

  int rnd(int lo, int hi) {
    return lo + static_cast<int>(rng() % uint64_t(hi - lo + 1));
  }

  DivisorClass random_divisor() {
    DivisorClass d = ring.divisor_zero();
    for (auto& c : d.coeffs) c = Rational(rnd(-2, 2));
    return d;
  }

  Subset random_nonempty_subset() {
    Subset full = full_set(m.n());
    Subset s = 0;
    while (s == 0) s = Subset(rng()) & full;
    return s;
  }

  // Nonnegative combinations of alpha_S and beta_S classes; these satisfy
  // every positivity level and seed the nef side of the sampled checks.
  DivisorClass random_nef() {
    DivisorClass d = ring.divisor_zero();
    int picks = rnd(1, 3);
    for (int i = 0; i < picks; i++) {
      Subset s = random_nonempty_subset();
      Rational c(rnd(0, 2));
      d = d + (rng() % 2 ? ring.divisor_alpha_S(s) : ring.divisor_beta_S(s)) * c;
    }
    return d;
  }

  void record(const std::string& name, bool pass, const std::string& witness) {
    out.push_back({name, pass, pass ? std::string() : witness});
  }

  // Runs `body`, which returns a witness string on failure and "" on pass;
  // library errors count as failures with the message as witness.
  void identity(const std::string& name,
                const std::function<std::string()>& body) {
    try {
      std::string w = body();
      record(name, w.empty(), w);
    } catch (const Error& e) {
      record(name, false, std::string(e.code_name()) + ": " + e.what());
    }
  }
};

std::string subset_witness(Subset s) { return subset_to_string(s); }

std::string rank_submodularity(Suite& s) {
  const Matroid& m = s.m;
  Subset full = full_set(m.n());
  auto check = [&](Subset a, Subset b) -> std::string {
    if (m.rank_of(a) + m.rank_of(b) <
        m.rank_of(a | b) + m.rank_of(a & b)) {
      return "rk" + subset_witness(a) + " + rk" + subset_witness(b) +
             " < rk(union) + rk(intersection)";
    }
    return "";
  };
  if (m.n() <= 8) {
    for (Subset a = 0; a <= full; a++) {
      for (Subset b = a; b <= full; b++) {
        if (auto w = check(a, b); !w.empty()) return w;
      }
    }
  } else {
    for (int t = 0; t < 4000; t++) {
      if (auto w = check(Subset(s.rng()) & full, Subset(s.rng()) & full);
          !w.empty()) {
        return w;
      }
    }
  }
  return "";
}

std::string closure_axioms(const Matroid& m) {
  Subset full = full_set(m.n());
  for (Subset a = 0; a <= full; a++) {
    Subset c = m.closure(a);
    if (!subset_le(a, c)) return "closure drops " + subset_witness(a);
    if (m.closure(c) != c) return "closure not idempotent at " + subset_witness(a);
    if (m.rank_of(c) != m.rank_of(a)) {
      return "closure changes rank of " + subset_witness(a);
    }
  }
  return "";
}

std::string flat_lattice(const Matroid& m) {
  const auto& fl = m.flats();
  for (const FlatInfo& a : fl) {
    for (const FlatInfo& b : fl) {
      Subset meet = a.mask & b.mask;
      if (m.closure(meet) != meet) {
        return "intersection of flats " + subset_witness(a.mask) + ", " +
               subset_witness(b.mask) + " is not a flat";
      }
    }
  }
  if (m.is_uniform()) {
    for (int k = 0; k < m.rank(); k++) {
      Integer expect = binomial(m.n(), k);
      if (Integer(m.flats_of_rank(k).size()) != expect) {
        return "uniform rank-" + std::to_string(k) + " flat count is " +
               std::to_string(m.flats_of_rank(k).size());
      }
    }
  }
  return "";
}

std::string minor_composition(Suite& s) {
  const Matroid& m = s.m;
  if (m.rank() < 2) return "";
  int checked = 0;
  for (const FlatInfo& f1 : m.flats()) {
    for (const FlatInfo& f2 : m.flats()) {
      if (!subset_le(f1.mask, f2.mask) || f1.mask == f2.mask) continue;
      if (popcount(f2.mask & ~f1.mask) == 0) continue;
      Minor inner = m.minor(f1.mask, f2.mask);
      const Matroid& im = *inner.matroid();
      for (const FlatInfo& g1 : im.flats()) {
        for (const FlatInfo& g2 : im.flats()) {
          if (!subset_le(g1.mask, g2.mask) || g1.mask == g2.mask) continue;
          if (popcount(g2.mask & ~g1.mask) == 0) continue;
          if (++checked > 40) return "";
          Minor second = im.minor(g1.mask, g2.mask);
          Subset contract_total = f1.mask | inner.lift(g1.mask);
          int base = m.rank_of(contract_total);
          Subset ground2 = full_set(second.matroid()->n());
          for (Subset t = 0; t <= ground2; t++) {
            Subset orig = inner.lift(second.lift(t));
            int want = m.rank_of(orig | contract_total) - base;
            if (second.matroid()->rank_of(t) != want) {
              return "composed minor at " + subset_witness(f1.mask) + "," +
                     subset_witness(f2.mask) + " then " +
                     subset_witness(inner.lift(g1.mask)) + "," +
                     subset_witness(inner.lift(g2.mask)) + " disagrees at " +
                     subset_witness(orig);
            }
          }
        }
      }
    }
  }
  return "";
}

std::string counting_lemma(const Matroid& m) {
  for (int d = 1; d < m.rank(); d++) {
    std::vector<Integer> rhs_terms;
    Integer rhs = 0;
    std::vector<int> ranks;
    // Subsets of [d] as masks over bits 0..d-1; bit i is rank i+1.
    for (Subset i = 0; i < (Subset(1) << d); i++) {
      ranks.clear();
      for (int b = 0; b < d; b++) {
        if (i & (Subset(1) << b)) ranks.push_back(b + 1);
      }
      Integer sign = (popcount(i) % 2) ? -1 : 1;
      rhs += sign * m.count_flags({}, ranks);
    }
    for (int e = 0; e < m.n(); e++) {
      Integer lhs = 0;
      for (Subset i = 0; i < (Subset(1) << d); i++) {
        if (!(i & (Subset(1) << (d - 1)))) continue;
        ranks.clear();
        for (int b = 0; b < d; b++) {
          if (i & (Subset(1) << b)) ranks.push_back(b + 1);
        }
        Integer sign = (popcount(i) % 2) ? -1 : 1;
        lhs += sign * m.count_flags({}, ranks, e);
      }
      if (lhs != rhs) {
        return "d = " + std::to_string(d) + ", element " + std::to_string(e + 1);
      }
    }
  }
  return "";
}

std::string degree_normalization(Suite& s) {
  int top = s.ring.top_degree();
  if (s.ring.degree(s.ring.pow(s.ring.alpha(), top)) != 1) {
    return "deg(alpha^" + std::to_string(top) + ") != 1";
  }
  if (s.ring.degree(s.ring.pow(s.ring.beta(), top)) <= 0) {
    return "deg(beta^" + std::to_string(top) + ") <= 0";
  }
  return "";
}

std::string flat_power_vanishing(Suite& s) {
  for (const FlatInfo& f : s.m.proper_flats()) {
    ChowElement x = s.ring.x(f.mask);
    if (!s.ring
             .multiply(x, s.ring.pow(s.ring.alpha(), s.m.rank() - f.rank))
             .is_zero()) {
      return "x_F alpha^{r-rk F} != 0 at F = " + subset_witness(f.mask);
    }
    if (!s.ring.multiply(x, s.ring.pow(s.ring.beta(), f.rank)).is_zero()) {
      return "x_F beta^{rk F} != 0 at F = " + subset_witness(f.mask);
    }
  }
  return "";
}

std::string between_flats_vanishing(Suite& s) {
  const Matroid& m = s.m;
  int budget = 4000;
  for (const FlatInfo& lo : m.flats()) {
    for (const FlatInfo& hi : m.flats()) {
      if (!subset_le(lo.mask, hi.mask) || lo.mask == hi.mask) continue;
      bool lo_proper = m.is_proper_nonempty_flat(lo.mask);
      bool hi_proper = m.is_proper_nonempty_flat(hi.mask);
      if (!lo_proper && !hi_proper) continue;
      int gap = hi.rank - lo.rank;
      std::vector<Subset> between;
      for (const FlatInfo& g : m.proper_flats()) {
        if (subset_le(lo.mask, g.mask) && subset_le(g.mask, hi.mask) &&
            g.mask != lo.mask && g.mask != hi.mask) {
          between.push_back(g.mask);
        }
      }
      // Chains in the open interval with exponents summing to exactly gap.
      std::vector<std::pair<Subset, int>> factors;
      if (lo_proper) factors.push_back({lo.mask, 1});
      std::function<std::string(size_t, int)> rec =
          [&](size_t from, int left) -> std::string {
        if (left == 0) {
          if (--budget < 0) return "";
          auto probe = factors;
          if (hi_proper) probe.push_back({hi.mask, 1});
          if (!s.ring.reduce_product(probe).is_zero()) {
            std::string w = "nonzero product through [" + subset_witness(lo.mask) +
                            ", " + subset_witness(hi.mask) + "]";
            return w;
          }
          return "";
        }
        for (size_t i = from; i < between.size() && budget > 0; i++) {
          if (!factors.empty() && factors.back().first != lo.mask &&
              !subset_le(factors.back().first, between[i])) {
            continue;
          }
          for (int e = 1; e <= left; e++) {
            factors.push_back({between[i], e});
            std::string w = rec(i + 1, left - e);
            factors.pop_back();
            if (!w.empty()) return w;
          }
        }
        return "";
      };
      std::string w = rec(0, gap);
      if (!w.empty()) return w;
      if (budget <= 0) return "";
    }
  }
  return "";
}

std::string degree_routes(Suite& s) {
  const Matroid& m = s.m;
  int top = s.ring.top_degree();
  int budget = 3000;
  for (const Flag& flag : m.all_flags()) {
    if (static_cast<int>(flag.size()) > top) continue;
    std::vector<std::pair<Subset, int>> chain(flag.size());
    for (size_t i = 0; i < flag.size(); i++) chain[i] = {flag[i], 1};
    // Distribute the remaining degree over beta, the chain, and alpha.
    std::function<std::string(size_t, int)> rec =
        [&](size_t at, int left) -> std::string {
      if (at == chain.size()) {
        for (int b = 0; b <= left; b++) {
          if (--budget < 0) return "";
          int a = left - b;
          Integer direct = degree_recursive(m, b, chain, a);
          std::vector<std::pair<Subset, int>> probe = chain;
          ChowElement e = s.ring.reduce_product(probe);
          e = s.ring.multiply(e, s.ring.pow(s.ring.beta(), b));
          e = s.ring.multiply(e, s.ring.pow(s.ring.alpha(), a));
          if (s.ring.degree(e) != Rational(direct)) {
            std::ostringstream w;
            w << "beta^" << b;
            for (auto& [f, ex] : chain) {
              w << " x" << subset_witness(f) << "^" << ex;
            }
            w << " alpha^" << a;
            return w.str();
          }
        }
        return "";
      }
      for (int extra = 0; extra <= left; extra++) {
        chain[at].second = 1 + extra;
        std::string w = rec(at + 1, left - extra);
        chain[at].second = 1;
        if (!w.empty() || budget < 0) return w;
      }
      return "";
    };
    std::string w = rec(0, top - static_cast<int>(flag.size()));
    if (!w.empty()) return w;
    if (budget < 0) return "";
  }
  return "";
}

std::string key_valuative(Suite& s) {
  const Matroid& m = s.m;
  int r = m.rank();
  for (int d = 0; d < r; d++) {
    Integer sum = 0;
    std::vector<int> ranks;
    for (Subset i = 0; i < (Subset(1) << d); i++) {
      ranks.clear();
      for (int b = 0; b < d; b++) {
        if (i & (Subset(1) << b)) ranks.push_back(b + 1);
      }
      Integer sign = (popcount(i) % 2) ? -1 : 1;
      sum += sign * m.count_flags({}, ranks);
    }
    if (d % 2) sum = -sum;
    Rational lhs = s.ring.degree(s.ring.multiply(
        s.ring.pow(s.ring.alpha(), r - 1 - d), s.ring.pow(s.ring.beta(), d)));
    if (lhs != Rational(sum)) {
      return "d = " + std::to_string(d) + ": deg = " + rational_to_string(lhs) +
             ", alternating flag count = " + sum.str();
    }
  }
  return "";
}

std::string pairing_nonsingular(Suite& s) {
  int top = s.ring.top_degree();
  for (int d = 0; d + d <= top; d++) {
    auto g = s.ring.pairing_matrix(d);
    size_t nr = g.size();
    if (nr != size_t(s.ring.dim(d)) || (nr && g[0].size() != nr)) {
      return "pairing matrix at degree " + std::to_string(d) + " is not square";
    }
    // Rank by Gaussian elimination.
    size_t rank = 0;
    for (size_t col = 0; col < nr && rank < nr; col++) {
      size_t piv = rank;
      while (piv < nr && g[piv][col] == 0) piv++;
      if (piv == nr) continue;
      std::swap(g[piv], g[rank]);
      for (size_t i = rank + 1; i < nr; i++) {
        if (g[i][col] == 0) continue;
        Rational f = g[i][col] / g[rank][col];
        for (size_t j = col; j < nr; j++) g[i][j] -= f * g[rank][j];
      }
      rank++;
    }
    if (rank != nr) {
      return "degenerate pairing at degree " + std::to_string(d);
    }
  }
  return "";
}

std::string pushforward_pullback(Suite& s) {
  const auto& flats = s.m.proper_flats();
  if (flats.empty()) return "";
  for (int t = 0; t < std::min(3, static_cast<int>(flats.size())); t++) {
    Subset f = flats[s.rnd(0, static_cast<int>(flats.size()) - 1)].mask;
    FlatStar star(s.ring, f);
    ChowElement a = s.ring.element_of(s.random_divisor());
    a = a + s.ring.one();
    if (star.pushforward(star.pullback(a)) !=
        s.ring.multiply(a, s.ring.x(f))) {
      return "pushforward(pullback(a)) != a x_F at F = " + subset_witness(f);
    }
    TensorElement tens = star.tensor(star.contraction_ring().one(),
                                     star.restriction_ring().one());
    TensorElement round = star.pullback(star.pushforward(tens));
    if (round != star.multiply(tens, star.pullback(s.ring.x(f)))) {
      return "pullback(pushforward(t)) != t pullback(x_F) at F = " +
             subset_witness(f);
    }
  }
  return "";
}

std::string chern_routes(Suite& s) {
  ChernData a = s.kt.chern_tangent();
  ChernData b = s.kt.chern_tangent_recursive();
  if (a.rank != b.rank || !(a.total == b.total)) {
    return "filtration product and polynomial recursion disagree";
  }
  return "";
}

std::string todd_dual(Suite& s) {
  for (const ChernData& data : {s.kt.chern_tangent(), s.kt.chern_quotient()}) {
    ChowElement ch = s.kt.ch_of(data);
    ChowElement td = s.kt.todd_of_ch(ch);
    ChowElement c1 = data.total.graded_part(1);
    if (!(s.ring.multiply(td, s.ring.exp(-c1)) == td.alternate_signs())) {
      return "td exp(-c1) != dual todd for a rank-" +
             std::to_string(data.rank) + " class";
    }
  }
  return "";
}

std::string tail_elimination(Suite& s) {
  int r = s.m.rank();
  if (r < 2) return "";
  ChowElement full = s.ring.alpha();
  for (int k = 1; k <= r - 1; k++) full -= s.ring.S_k(k);
  ChowElement shorter = s.ring.alpha();
  for (int k = 1; k <= r - 2; k++) shorter -= s.ring.S_k(k);
  ChowElement lhs = s.ring.multiply(s.ring.one() + s.ring.S_k(r - 1),
                                    s.ring.one() + full);
  if (!(lhs == s.ring.one() + shorter)) {
    return "(1 + S_{r-1})(1 + alpha - sum S) != 1 + alpha - partial sum";
  }
  return "";
}

std::string zeta_closed_forms(Suite& s) {
  for (const FlatInfo& f : s.m.proper_flats()) {
    if (f.rank == 1) {
      DivisorClass d = s.ring.divisor_x(f.mask) * Rational(-1);
      if (!(s.kt.zeta(d) == s.ring.one() - s.ring.x(f.mask))) {
        return "zeta(-x_F) != 1 - x_F at F = " + subset_witness(f.mask);
      }
    }
    if (f.rank == s.m.rank() - 1) {
      DivisorClass d = s.ring.divisor_x(f.mask);
      if (!(s.kt.zeta(d) == s.ring.one() + s.ring.x(f.mask))) {
        return "zeta(x_F) != 1 + x_F at F = " + subset_witness(f.mask);
      }
    }
  }
  return "";
}

std::string chi_flat_vanishing(Suite& s) {
  for (const FlatInfo& f : s.m.proper_flats()) {
    DivisorClass d = s.ring.divisor_x(f.mask) * Rational(-1);
    if (s.kt.chi_zeta(d) != 0 || s.kt.chi_hrr_line(d) != 0) {
      return "chi(-x_F) != 0 at F = " + subset_witness(f.mask);
    }
  }
  return "";
}

std::string chi_routes(Suite& s) {
  for (int t = 0; t < s.opt.trials; t++) {
    DivisorClass d = s.random_divisor();
    Rational a = s.kt.chi_zeta(d);
    Rational b = s.kt.chi_hrr_line(d);
    if (a != b) {
      return "D = " + io::render_divisor(d) + ": zeta route " +
             rational_to_string(a) + ", Riemann-Roch route " +
             rational_to_string(b);
    }
  }
  return "";
}

std::string serre_duality(Suite& s) {
  DivisorClass k = s.kt.canonical_divisor();
  Rational sign((s.m.rank() - 1) % 2 ? -1 : 1);
  for (int t = 0; t < s.opt.trials; t++) {
    DivisorClass d = s.random_divisor();
    if (s.kt.chi_zeta(d) != sign * s.kt.chi_zeta(k - d)) {
      return "chi(D) != (-1)^{r-1} chi(K - D) at D = " + io::render_divisor(d);
    }
  }
  return "";
}

std::string chow_polynomial_dims(Suite& s) {
  std::vector<Integer> from_chi = s.kt.chow_polynomial();
  std::vector<Integer> dims = s.ring.graded_dims();
  if (from_chi != dims) return "exterior-power route differs from rank count";
  return "";
}

std::string beta_restriction_chi(Suite& s) {
  const Matroid& m = s.m;
  if (m.rank() < 2) return "";
  for (int t = 0; t < 4; t++) {
    Subset sub = s.random_nonempty_subset();
    if (m.rank_of(sub) < 1 || popcount(sub) == m.n()) continue;
    // Restrict to sub by deleting the complement, highest element first.
    Matroid restricted = m;
    for (int e = m.n() - 1; e >= 0; e--) {
      if (sub & (Subset(1) << e)) continue;
      restricted = *restricted.delete_element(e).matroid();
    }
    ChowRing rring(restricted);
    KTheory rkt(rring);
    for (int k = -2; k <= 2; k++) {
      Rational lhs = s.kt.chi_zeta(s.ring.divisor_beta_S(sub) * Rational(k));
      Rational rhs = rkt.chi_zeta(rring.divisor_beta() * Rational(k));
      if (lhs != rhs) {
        return "chi(" + std::to_string(k) + " beta_S) at S = " +
               subset_witness(sub);
      }
    }
  }
  return "";
}

std::string deletion_contraction_chi(Suite& s) {
  const Matroid& m = s.m;
  if (m.n() < 2 || m.rank() < 2) return "";
  for (int e = 0; e < m.n(); e++) {
    Subset single = Subset(1) << e;
    if (m.is_coloop(e) || !m.is_flat(single)) continue;
    ChowRing dring(*m.delete_element(e).matroid());
    KTheory dkt(dring);
    ChowRing cring(*m.contraction(single).matroid());
    KTheory ckt(cring);
    for (int j = 1; j <= 4; j++) {
      Rational lhs = s.kt.chi_zeta(s.ring.divisor_beta() * Rational(-j));
      Rational rhs = dkt.chi_zeta(dring.divisor_beta() * Rational(-j));
      for (int k = 1; k <= j; k++) {
        rhs -= ckt.chi_zeta(cring.divisor_beta() * Rational(-k));
      }
      if (lhs != rhs) {
        return "element " + std::to_string(e + 1) + ", j = " + std::to_string(j);
      }
    }
    return "";
  }
  return "";
}

std::string b_decomposition_chi(Suite& s) {
  const Matroid& m = s.m;
  Subset ground = full_set(m.n());
  std::vector<std::pair<Subset, int>> parts;
  for (const FlatInfo& f : m.proper_flats()) {
    if (f.rank != 1) continue;
    if (m.rank_of(ground & ~f.mask) != m.rank()) continue;
    parts.push_back({f.mask, 1 + static_cast<int>(parts.size() % 2)});
    if (parts.size() == 2) break;
  }
  if (parts.empty()) return "";
  int n_coeff = 2;
  DivisorClass b = s.ring.divisor_beta() * Rational(n_coeff);
  Rational rhs = s.kt.chi_zeta(s.ring.divisor_beta() * Rational(-n_coeff));
  for (auto& [f, a] : parts) {
    b = b - s.ring.divisor_x(f) * Rational(a);
    rhs -= s.kt.chi_zeta(s.ring.divisor_beta() * Rational(-a));
    rhs += s.kt.chi_zeta(s.ring.divisor_beta_S(ground & ~f) * Rational(-a));
  }
  if (s.kt.chi_zeta(b * Rational(-1)) != rhs) {
    return "B = " + io::render_divisor(b);
  }
  return "";
}

std::string nef_implications(Suite& s) {
  bool p1_available = s.m.n() <= 10;
  for (int t = 0; t < s.opt.trials; t++) {
    DivisorClass d = t % 2 ? s.random_nef() : s.random_divisor();
    bool p3 = check_P3(s.ring, d).ok;
    bool p2 = check_P2(s.ring, d).ok;
    bool p1 = p1_available && check_P1(s.ring, d).ok;
    if ((p1 && !p2) || (p2 && !p3)) {
      return "chain broken at D = " + io::render_divisor(d);
    }
  }
  return "";
}

std::string nef_product_nonneg(Suite& s) {
  int top = s.ring.top_degree();
  if (top < 1) return "";
  for (int t = 0; t < std::max(4, s.opt.trials / 2); t++) {
    std::vector<DivisorClass> factors;
    for (int i = 0; i < top; i++) factors.push_back(s.random_nef());
    Rational v = mixed_degree(s.ring, factors);
    if (v < 0) {
      std::string w = "negative degree for";
      for (auto& f : factors) w += " [" + io::render_divisor(f) + "]";
      return w;
    }
  }
  return "";
}

std::string big_nef_factor(Suite& s) {
  int top = s.ring.top_degree();
  if (top < 1) return "";
  std::vector<DivisorClass> big = {s.ring.divisor_alpha(),
                                   s.ring.divisor_beta(),
                                   s.ring.divisor_alpha() +
                                       s.ring.divisor_beta()};
  for (const DivisorClass& lead : big) {
    if (!is_big_and_nef(s.ring, lead)) continue;
    for (int t = 0; t < 6; t++) {
      ChowElement prod = s.ring.element_of(lead);
      ChowElement rest = s.ring.one();
      for (int i = 0; i < s.rnd(0, top - 1); i++) {
        ChowElement f = s.ring.element_of(s.random_nef());
        prod = s.ring.multiply(prod, f);
        rest = s.ring.multiply(rest, f);
      }
      if (prod.is_zero() && !rest.is_zero()) {
        return "dropping the big factor from a vanishing product left it "
               "nonzero";
      }
    }
  }
  return "";
}

std::string termwise_positivity(Suite& s) {
  int top = s.ring.top_degree();
  if (top < 1) return "";
  const auto& flats = s.m.proper_flats();
  for (int t = 0; t < s.opt.trials; t++) {
    std::vector<Rational> coeffs(flats.size());
    for (auto& c : coeffs) c = Rational(s.rnd(0, 2));
    std::vector<DivisorClass> tail;
    for (int i = 0; i < s.rnd(0, top - 1); i++) tail.push_back(s.random_nef());
    ChowElement prod = s.ring.one();
    for (auto& f : tail) prod = s.ring.multiply(prod, s.ring.element_of(f));
    ChowElement sum = s.ring.zero();
    bool each_zero = true;
    for (size_t i = 0; i < flats.size(); i++) {
      if (coeffs[i] == 0) continue;
      ChowElement term =
          s.ring.multiply(s.ring.x(flats[i].mask), prod) * coeffs[i];
      sum += term;
      if (!term.is_zero()) each_zero = false;
    }
    if (sum.is_zero() != each_zero) {
      return "a nonnegative flat combination vanished against a nef product "
             "without vanishing termwise";
    }
  }
  return "";
}

std::string beta_dhr(Suite& s) {
  const Matroid& m = s.m;
  int top = s.ring.top_degree();
  if (top < 1) return "";
  Subset full = full_set(m.n());
  auto check = [&](const std::vector<Subset>& sets) -> std::string {
    bool dhr = m.dragon_hall_rado(sets);
    ChowElement prod = s.ring.one();
    for (Subset x : sets) prod = s.ring.multiply(prod, s.ring.beta_S(x));
    bool positive = s.ring.degree(prod) > 0;
    if (dhr != positive) {
      std::string w = "beta product positivity vs covering condition at";
      for (Subset x : sets) w += " " + subset_witness(x);
      return w;
    }
    return "";
  };
  if (top == 2 && m.n() <= 5) {
    for (Subset a = 1; a <= full; a++) {
      for (Subset b = a; b <= full; b++) {
        if (auto w = check({a, b}); !w.empty()) return w;
      }
    }
    return "";
  }
  for (int t = 0; t < 2 * s.opt.trials; t++) {
    std::vector<Subset> sets;
    for (int i = 0; i < top; i++) sets.push_back(s.random_nonempty_subset());
    if (auto w = check(sets); !w.empty()) return w;
  }
  return "";
}

}  // namespace

std::vector<IdentityResult> run_identity_suite(const Matroid& m,
                                               const IdentityOptions& opt) {
  Suite s(m, opt);
  s.identity("rank-submodularity", [&] { return rank_submodularity(s); });
  s.identity("closure-axioms", [&] { return closure_axioms(m); });
  s.identity("flat-lattice", [&] { return flat_lattice(m); });
  s.identity("minor-composition", [&] { return minor_composition(s); });
  s.identity("counting-lemma", [&] { return counting_lemma(m); });
  s.identity("degree-normalization", [&] { return degree_normalization(s); });
  s.identity("flat-power-vanishing", [&] { return flat_power_vanishing(s); });
  s.identity("between-flats-vanishing",
             [&] { return between_flats_vanishing(s); });
  s.identity("degree-routes-agree", [&] { return degree_routes(s); });
  s.identity("key-valuative", [&] { return key_valuative(s); });
  s.identity("poincare-pairing-nonsingular",
             [&] { return pairing_nonsingular(s); });
  s.identity("pushforward-pullback", [&] { return pushforward_pullback(s); });
  s.identity("chern-routes-agree", [&] { return chern_routes(s); });
  s.identity("todd-dual-identity", [&] { return todd_dual(s); });
  s.identity("tail-elimination", [&] { return tail_elimination(s); });
  s.identity("zeta-closed-forms", [&] { return zeta_closed_forms(s); });
  s.identity("chi-flat-vanishing", [&] { return chi_flat_vanishing(s); });
  s.identity("chi-routes-agree", [&] { return chi_routes(s); });
  s.identity("serre-duality", [&] { return serre_duality(s); });
  s.identity("chow-polynomial-dims", [&] { return chow_polynomial_dims(s); });
  s.identity("beta-restriction-chi", [&] { return beta_restriction_chi(s); });
  s.identity("deletion-contraction-chi",
             [&] { return deletion_contraction_chi(s); });
  s.identity("b-decomposition-chi", [&] { return b_decomposition_chi(s); });
  s.identity("nef-implication-chain", [&] { return nef_implications(s); });
  s.identity("nef-product-nonnegativity",
             [&] { return nef_product_nonneg(s); });
  s.identity("big-nef-factor-cancellation", [&] { return big_nef_factor(s); });
  s.identity("termwise-positivity", [&] { return termwise_positivity(s); });
  s.identity("beta-dhr-equivalence", [&] { return beta_dhr(s); });
  return s.out;
}

}  // namespace chowforge
