#include <doctest.h>

#include <random>

#include "chowforge/chow.hpp"
#include "test_util.hpp"

using namespace chowforge;
using testutil::DenseChowOracle;
using testutil::DenseRref;

namespace {

Subset mask_of(std::initializer_list<int> elems) {
  return subset_from_elements(std::vector<int>(elems), kMaxGroundSize);
}

// All (beta exponent, chain monomial, alpha exponent) triples of total
// degree rank-1, the chain part drawn from the ring's monomial universe.
struct MixedMonomial {
  int beta_exp;
  std::vector<std::pair<Subset, int>> chain;
  int alpha_exp;
};

std::vector<MixedMonomial> all_mixed_monomials(const ChowRing& ring) {
  const auto& flats = ring.matroid().proper_flats();
  std::vector<MixedMonomial> out;
  int top = ring.top_degree();
  for (int d = 0; d <= top; d++) {
    for (int col = 0; col < ring.universe_size(d); col++) {
      const ChainMonomial& mono = ring.universe_monomial(d, col);
      std::vector<std::pair<Subset, int>> chain;
      for (auto& [id, e] : mono.factors) chain.push_back({flats[id].mask, e});
      for (int b = 0; b + d <= top; b++) {
        out.push_back({b, chain, top - d - b});
      }
    }
  }
  return out;
}

Rational ring_degree_of(const ChowRing& ring, const MixedMonomial& m) {
  ChowElement el = ring.reduce_product(m.chain);
  el = ring.multiply(el, ring.pow(ring.beta(), m.beta_exp));
  el = ring.multiply(el, ring.alpha_power(m.alpha_exp));
  return ring.degree(el);
}

Rational oracle_degree_of(const DenseChowOracle& oracle,
                          const ChowRing& ring, const MixedMonomial& m) {
  auto poly = oracle.unit();
  for (int i = 0; i < m.beta_exp; i++) {
    poly = oracle.mul_form(poly, oracle.beta_form());
  }
  for (auto& [mask, e] : m.chain) {
    int id = *ring.matroid().proper_flat_id(mask);
    for (int i = 0; i < e; i++) {
      poly = oracle.mul_form(poly, oracle.var_form(id));
    }
  }
  for (int i = 0; i < m.alpha_exp; i++) {
    poly = oracle.mul_form(poly, oracle.alpha_form());
  }
  return oracle.degree(poly);
}

}  // namespace

TEST_SUITE("chow") {
  TEST_CASE("graded dimensions match a dense ideal model") {
    std::vector<Matroid> ms = {
        Matroid::uniform(2, 3),  Matroid::uniform(2, 4),
        Matroid::uniform(2, 5),  Matroid::uniform(3, 4),
        Matroid::uniform(3, 5),  Matroid::boolean(3),
        testutil::random_matrix_matroid(1, 3, 5)};
    for (const Matroid& m : ms) {
      CAPTURE(m.n());
      CAPTURE(m.rank());
      ChowRing ring(m);
      DenseChowOracle oracle(m);
      REQUIRE(ring.dim(0) == 1);
      REQUIRE(ring.dim(ring.top_degree()) == 1);
      for (int d = 0; d <= ring.top_degree(); d++) {
        CHECK(ring.dim(d) == oracle.dim(d));
        CHECK(ring.dim(d) == ring.dim(ring.top_degree() - d));
      }
    }

    ChowRing u34(Matroid::uniform(3, 4));
    CHECK(u34.graded_dims() == std::vector<Integer>{1, 7, 1});
    ChowRing u24(Matroid::uniform(2, 4));
    CHECK(u24.graded_dims() == std::vector<Integer>{1, 1});

    // Eulerian numbers for the full boolean lattice on 4 elements.
    Matroid b4 = Matroid::boolean(4);
    ChowRing rb4(b4);
    CHECK(rb4.graded_dims() == std::vector<Integer>{1, 11, 11, 1});
    DenseChowOracle partial(b4, 2);
    CHECK(rb4.dim(1) == partial.dim(1));
    CHECK(rb4.dim(2) == partial.dim(2));
  }

  TEST_CASE("degree agrees with the dense model and the flag recursion") {
    std::vector<Matroid> ms = {
        Matroid::uniform(2, 3), Matroid::uniform(2, 4),
        Matroid::uniform(3, 4), Matroid::uniform(3, 5),
        Matroid::boolean(3),    testutil::random_matrix_matroid(2, 3, 5)};
    for (const Matroid& m : ms) {
      CAPTURE(m.n());
      CAPTURE(m.rank());
      ChowRing ring(m);
      DenseChowOracle oracle(m);
      for (const MixedMonomial& mono : all_mixed_monomials(ring)) {
        CAPTURE(mono.beta_exp);
        CAPTURE(mono.alpha_exp);
        Rational via_ring = ring_degree_of(ring, mono);
        Rational via_oracle = oracle_degree_of(oracle, ring, mono);
        Integer via_recursion =
            degree_recursive(m, mono.beta_exp, mono.chain, mono.alpha_exp);
        CHECK(via_ring == via_oracle);
        CHECK(via_ring == Rational(via_recursion));
      }
    }
  }

  TEST_CASE("degree matches the flag recursion on larger matroids") {
    std::vector<Matroid> ms = {Matroid::boolean(4), Matroid::uniform(4, 5),
                               testutil::random_matrix_matroid(3, 4, 6)};
    for (const Matroid& m : ms) {
      CAPTURE(m.n());
      CAPTURE(m.rank());
      ChowRing ring(m);
      for (const MixedMonomial& mono : all_mixed_monomials(ring)) {
        Rational via_ring = ring_degree_of(ring, mono);
        Integer via_recursion =
            degree_recursive(m, mono.beta_exp, mono.chain, mono.alpha_exp);
        CHECK(via_ring == Rational(via_recursion));
      }
    }
  }

  TEST_CASE("classical degree values") {
    Matroid u34 = Matroid::uniform(3, 4);
    ChowRing r34(u34);
    Subset f12 = mask_of({1, 2});
    Subset f1 = mask_of({1});
    CHECK(r34.degree(r34.alpha_power(2)) == 1);
    CHECK(r34.degree(r34.multiply(r34.alpha(), r34.beta())) == 3);
    CHECK(r34.degree(r34.pow(r34.beta(), 2)) == 3);
    CHECK(r34.degree(r34.pow(r34.x(f12), 2)) == -1);
    CHECK(r34.degree(r34.multiply(r34.x(f12), r34.alpha())) == 0);
    CHECK(r34.degree(r34.multiply(r34.x(f12), r34.beta())) == 1);
    CHECK(r34.degree(r34.pow(r34.x(f1), 2)) == -2);

    ChowRing r23(Matroid::uniform(2, 3));
    CHECK(r23.degree(r23.alpha()) == 1);
    CHECK(r23.degree(r23.beta()) == 2);
    ChowRing r25(Matroid::uniform(2, 5));
    CHECK(r25.degree(r25.beta()) == 4);
  }

  TEST_CASE("alpha and beta kill small powers of each flat") {
    std::vector<Matroid> ms = {Matroid::uniform(3, 4), Matroid::uniform(3, 5),
                               Matroid::uniform(4, 5), Matroid::boolean(4)};
    for (const Matroid& m : ms) {
      ChowRing ring(m);
      int top = ring.top_degree();
      for (const FlatInfo& f : m.proper_flats()) {
        for (int k = 1; k <= top; k++) {
          ChowElement xk = ring.pow(ring.x(f.mask), k);
          if (k < f.rank) {
            CHECK(ring.degree(ring.multiply(xk, ring.alpha_power(top - k))) ==
                  0);
          }
          if (k < m.rank() - f.rank) {
            CHECK(ring.degree(ring.multiply(
                      xk, ring.pow(ring.beta(), top - k))) == 0);
          }
        }
      }
    }
  }

  TEST_CASE("Poincare pairing is nonsingular") {
    std::vector<Matroid> ms = {Matroid::uniform(3, 4), Matroid::uniform(3, 5),
                               Matroid::uniform(4, 5), Matroid::boolean(4),
                               testutil::random_matrix_matroid(4, 3, 6),
                               testutil::random_matrix_matroid(5, 4, 6)};
    for (const Matroid& m : ms) {
      CAPTURE(m.n());
      CAPTURE(m.rank());
      ChowRing ring(m);
      for (int d = 0; d <= ring.top_degree(); d++) {
        auto gram = ring.pairing_matrix(d);
        REQUIRE(static_cast<int>(gram.size()) == ring.dim(d));
        REQUIRE(static_cast<int>(gram[0].size()) ==
                ring.dim(ring.top_degree() - d));
        DenseRref rref(static_cast<int>(gram[0].size()));
        for (auto& row : gram) rref.add_row(row);
        CHECK(rref.rank() == ring.dim(d));
      }
    }
  }

  TEST_CASE("distinguished classes") {
    std::vector<Matroid> ms = {
        Matroid::uniform(3, 4), Matroid::uniform(4, 5), Matroid::boolean(4),
        testutil::random_matrix_matroid(6, 3, 6),
        Matroid::from_bases(3, {mask_of({1, 2}), mask_of({1, 3})})};
    for (const Matroid& m : ms) {
      CAPTURE(m.n());
      CAPTURE(m.rank());
      ChowRing ring(m);
      Subset ground = full_set(m.n());

      ChowElement sum_sk = ring.zero();
      for (int k = 1; k < m.rank(); k++) sum_sk += ring.S_k(k);
      CHECK(ring.alpha() + ring.beta() == sum_sk);

      CHECK(ring.alpha_S(ground) == ring.alpha());
      CHECK(ring.beta_S(ground) == ring.beta());

      for (const FlatInfo& f : m.proper_flats()) {
        if (f.rank == 1) {
          CHECK(ring.alpha_S(f.mask).is_zero());
        }
        if (f.rank == m.rank() - 1) {
          CHECK(ring.x(f.mask) == ring.alpha() - ring.alpha_S(f.mask));
        }
      }
    }

    // Representative with a different base element, same class.
    Matroid u34 = Matroid::uniform(3, 4);
    ChowRing ring(u34);
    DivisorClass other = ring.divisor_zero();
    const auto& flats = u34.proper_flats();
    for (size_t f = 0; f < flats.size(); f++) {
      if (flats[f].mask & mask_of({3})) other.coeffs[f] = 1;
    }
    CHECK(other.coeffs != ring.divisor_alpha().coeffs);
    CHECK(ring.divisors_equal(other, ring.divisor_alpha()));

    // alpha_S sees only the closure of S.
    Matroid para = Matroid::from_bases(3, {mask_of({1, 2}), mask_of({1, 3})});
    ChowRing rp(para);
    CHECK(rp.divisor_alpha_S(mask_of({2})).coeffs ==
          rp.divisor_alpha_S(mask_of({2, 3})).coeffs);
  }

  TEST_CASE("alpha expression round trip") {
    std::vector<Matroid> ms = {
        Matroid::uniform(3, 4), Matroid::boolean(4), Matroid::uniform(3, 5),
        testutil::random_matrix_matroid(7, 3, 5),
        Matroid::from_bases(3, {mask_of({1, 2}), mask_of({1, 3})})};
    std::mt19937_64 rng(20240815);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (const Matroid& m : ms) {
      CAPTURE(m.n());
      CAPTURE(m.rank());
      ChowRing ring(m);
      const auto& flats = m.proper_flats();
      for (int trial = 0; trial < 8; trial++) {
        DivisorClass d = ring.divisor_zero();
        for (size_t f = 0; f < flats.size(); f++) d.coeffs[f] = coeff(rng);
        AlphaExpr e = ring.alpha_expression(d);
        CHECK(e.is_integral());
        ChowElement rebuilt = ring.alpha() * e.alpha_coeff;
        for (size_t f = 0; f < flats.size(); f++) {
          if (e.flat_coeffs[f] == 0) continue;
          rebuilt += ring.alpha_S(flats[f].mask) * e.flat_coeffs[f];
        }
        CHECK(rebuilt == ring.element_of(d));
      }
      DivisorClass half = ring.divisor_x(flats[0].mask) * Rational(1, 2);
      AlphaExpr e = ring.alpha_expression(half);
      CHECK_FALSE(e.is_integral());
      CHECK(half.is_integral() == false);
    }
  }

  TEST_CASE("ring operations") {
    Matroid u45 = Matroid::uniform(4, 5);
    ChowRing ring(u45);
    ChowElement d = ring.alpha() - ring.x(mask_of({1, 2})) * Rational(2);
    CHECK(ring.multiply(ring.exp(d), ring.exp(-d)) == ring.one());
    ChowElement u = ring.one() + d + ring.pow(d, 3) * Rational(1, 6);
    CHECK(ring.multiply(ring.invert_unit(u), u) == ring.one());
    CHECK(ring.pow(d, 3) ==
          ring.multiply(d, ring.multiply(d, d)));

    std::mt19937_64 rng(99);
    for (const Matroid& m :
         {Matroid::uniform(3, 4), Matroid::boolean(4)}) {
      ChowRing r(m);
      for (int trial = 0; trial < 6; trial++) {
        ChowElement a = testutil::random_ring_element(r, rng);
        ChowElement b = testutil::random_ring_element(r, rng);
        ChowElement c = testutil::random_ring_element(r, rng);
        CHECK(r.multiply(a, b) == r.multiply(b, a));
        CHECK(r.multiply(r.multiply(a, b), c) ==
              r.multiply(a, r.multiply(b, c)));
        CHECK(r.multiply(a, b + c) ==
              r.multiply(a, b) + r.multiply(a, c));
      }
    }

    ChowElement parts = ring.zero();
    ChowElement mixed = ring.one() + ring.alpha() + ring.pow(d, 2);
    for (int k = 0; k <= ring.top_degree(); k++) {
      parts += mixed.graded_part(k);
      CHECK(mixed.graded_part(k).is_homogeneous(k));
    }
    CHECK(parts == mixed);
    ChowElement flipped = mixed.alternate_signs();
    CHECK(flipped.graded_part(0) == mixed.graded_part(0));
    CHECK(flipped.graded_part(1) == -mixed.graded_part(1));
    CHECK(flipped.graded_part(2) == mixed.graded_part(2));
  }

  TEST_CASE("recursive degree standalone") {
    Matroid u34 = Matroid::uniform(3, 4);
    Subset f12 = mask_of({1, 2});
    CHECK(degree_recursive(u34, 0, {{f12, 2}}, 0) == -1);
    CHECK(degree_recursive(u34, 0, {{f12, 1}}, 1) == 0);
    CHECK(degree_recursive(u34, 1, {{f12, 1}}, 0) == 1);
    CHECK(degree_recursive(u34, 2, {}, 0) == 3);
    CHECK(degree_recursive(u34, 1, {}, 1) == 3);
    CHECK(degree_recursive(u34, 0, {}, 2) == 1);
    CHECK(degree_recursive(Matroid::uniform(2, 3), 1, {}, 0) == 2);

    CHECK_THROWS_AS(degree_recursive(u34, 0, {}, 1), Error);
    CHECK_THROWS_AS(degree_recursive(u34, 0, {{mask_of({1, 2, 3, 4}), 2}}, 0),
                    Error);
    CHECK_THROWS_AS(
        degree_recursive(u34, 0, {{f12, 1}, {mask_of({1}), 1}}, 0), Error);
    CHECK_THROWS_AS(degree_recursive(u34, -1, {}, 3), Error);
  }

  TEST_CASE("validation errors") {
    Matroid para = Matroid::from_bases(3, {mask_of({1, 2}), mask_of({1, 3})});
    ChowRing rp(para);
    CHECK_THROWS_WITH_AS(rp.x(mask_of({2})), doctest::Contains("not a proper"),
                         Error);

    Matroid u34 = Matroid::uniform(3, 4);
    ChowRing ring(u34);
    CHECK_THROWS_AS(ring.x(full_set(4)), Error);
    CHECK_THROWS_AS(ring.S_k(0), Error);
    CHECK_THROWS_AS(ring.S_k(3), Error);
    CHECK_THROWS_AS(ring.degree(ring.alpha()), Error);
    CHECK_THROWS_AS(ring.exp(ring.one()), Error);
    CHECK_THROWS_AS(ring.invert_unit(ring.alpha()), Error);

    try {
      ChowRing::Options opt;
      opt.max_monomials_per_degree = 5;
      ChowRing capped(Matroid::uniform(3, 6), opt);
      FAIL("capacity limit not enforced");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Capacity);
    }

    try {
      rp.x(mask_of({2}));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotAFlat);
    }
  }
}
