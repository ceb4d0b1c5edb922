#include <doctest.h>

#include <set>

#include "chowforge/matroid.hpp"
#include "test_util.hpp"

using namespace chowforge;
using testutil::oracle_count_flags;
using testutil::random_matrix_matroid;

namespace {

Subset S(std::initializer_list<int> elems_1based) {
  Subset s = 0;
  for (int e : elems_1based) s |= Subset(1) << (e - 1);
  return s;
}

void check_rank_axioms(const Matroid& m) {
  Subset ground = full_set(m.n());
  for (Subset a = 0; a <= ground; a++) {
    int ra = m.rank_of(a);
    REQUIRE(ra >= 0);
    REQUIRE(ra <= popcount(a));
    for (int e = 0; e < m.n(); e++) {
      Subset ae = a | (Subset(1) << e);
      int rae = m.rank_of(ae);
      REQUIRE(rae >= ra);
      REQUIRE(rae <= ra + 1);
    }
  }
  for (Subset a = 0; a <= ground; a++) {
    for (Subset b = a; b <= ground; b++) {
      REQUIRE(m.rank_of(a | b) + m.rank_of(a & b) <=
              m.rank_of(a) + m.rank_of(b));
    }
  }
}

void check_closure_axioms(const Matroid& m) {
  Subset ground = full_set(m.n());
  for (Subset a = 0; a <= ground; a++) {
    Subset c = m.closure(a);
    REQUIRE(subset_le(a, c));
    REQUIRE(m.rank_of(c) == m.rank_of(a));
    REQUIRE(m.closure(c) == c);
  }
}

}  // namespace

TEST_SUITE_BEGIN("matroid");

TEST_CASE("uniform matroid basics") {
  Matroid m = Matroid::uniform(3, 4);
  CHECK(m.n() == 4);
  CHECK(m.rank() == 3);
  CHECK(m.rank_of(S({1, 2})) == 2);
  CHECK(m.rank_of(S({1, 2, 3, 4})) == 3);
  CHECK(m.closure(S({1, 2})) == S({1, 2}));
  CHECK(m.closure(S({1, 2, 3})) == S({1, 2, 3, 4}));
  CHECK(m.is_flat(S({1})));
  CHECK(!m.is_flat(S({1, 2, 3})));
  CHECK(m.proper_flats().size() == 10);
  CHECK(m.flats_of_rank(1).size() == 4);
  CHECK(m.flats_of_rank(2).size() == 6);
  CHECK(m.flats_of_rank(3).size() == 1);
  for (int e = 0; e < 4; e++) CHECK(!m.is_coloop(e));
}

TEST_CASE("uniform flats are the small subsets plus the ground set") {
  for (int n = 1; n <= 6; n++) {
    for (int r = 1; r <= n; r++) {
      Matroid m = Matroid::uniform(r, n);
      for (Subset s = 0; s <= full_set(n); s++) {
        bool expected = popcount(s) < r || s == full_set(n);
        CHECK(m.is_flat(s) == expected);
      }
    }
  }
}

TEST_CASE("rank and closure axioms hold") {
  check_rank_axioms(Matroid::uniform(3, 5));
  check_rank_axioms(Matroid::boolean(4));
  check_closure_axioms(Matroid::uniform(3, 5));
  check_closure_axioms(Matroid::boolean(4));
  for (uint64_t seed = 1; seed <= 6; seed++) {
    Matroid m = random_matrix_matroid(seed, 3, 6);
    check_rank_axioms(m);
    check_closure_axioms(m);
  }
}

TEST_CASE("bases-defined matroids validate their input") {
  CHECK_THROWS_AS(Matroid::from_bases(3, {S({1, 2})}), Error);  // 3 is a loop
  CHECK_THROWS_AS(Matroid::from_bases(3, {S({1, 2}), S({3})}), Error);
  // Exchange fails: {1,2},{3,4} with no mixed bases.
  CHECK_THROWS_AS(Matroid::from_bases(4, {S({1, 2}), S({3, 4})}), Error);
  CHECK_THROWS_AS(Matroid::from_bases(13, {S({1})}), Error);

  Matroid m = Matroid::from_bases(3, {S({1, 2}), S({1, 3})});
  CHECK(m.rank() == 2);
  CHECK(m.is_coloop(0));
  CHECK(!m.is_coloop(1));
  CHECK(m.rank_of(S({2, 3})) == 1);   // 2 and 3 are parallel
  CHECK(!m.is_flat(S({2})));
  CHECK(m.closure(S({2})) == S({2, 3}));
}

TEST_CASE("parallel elements: singleton need not be a flat") {
  Matroid m = Matroid::from_bases(3, {S({1, 2}), S({1, 3})});
  CHECK(m.is_proper_nonempty_flat(S({1})));
  CHECK(!m.is_proper_nonempty_flat(S({2})));
  CHECK(m.is_proper_nonempty_flat(S({2, 3})));
}

TEST_CASE("count_flags reference values") {
  Matroid m = Matroid::uniform(3, 4);
  CHECK(m.count_flags({}, {1, 2}) == 12);
  CHECK(m.count_flags({S({1})}, {2}) == 3);
  CHECK(m.count_flags({}, {2}, /*avoid=*/0) == 3);
  CHECK(m.count_flags({}, {}) == 1);
  CHECK(m.count_flags({S({1, 2})}, {1}) == 2);
  CHECK(m.count_flags({S({1, 2})}, {2}) == 0);
}

TEST_CASE("count_flags matches the brute-force oracle") {
  std::vector<Matroid> ms;
  ms.push_back(Matroid::uniform(2, 3));
  ms.push_back(Matroid::uniform(3, 4));
  ms.push_back(Matroid::uniform(3, 5));
  ms.push_back(Matroid::boolean(4));
  ms.push_back(random_matrix_matroid(11, 3, 5));
  ms.push_back(random_matrix_matroid(12, 4, 6));
  for (const Matroid& m : ms) {
    int r = m.rank();
    std::vector<Flag> flags = m.all_flags();
    // Empty flag plus a sample of longer ones.
    std::vector<Flag> sample;
    for (size_t i = 0; i < flags.size(); i += (flags.size() / 12 + 1)) {
      sample.push_back(flags[i]);
    }
    sample.push_back({});
    for (const Flag& flag : sample) {
      for (uint32_t mask = 0; mask < (uint32_t(1) << (r - 1)); mask++) {
        std::vector<int> ranks;
        for (int k = 1; k <= r - 1; k++) {
          if (mask & (uint32_t(1) << (k - 1))) ranks.push_back(k);
        }
        for (int avoid = -1; avoid < m.n(); avoid += (m.n() + 1) / 2) {
          Integer got = m.count_flags(flag, ranks, avoid);
          long want = oracle_count_flags(m, flag, ranks, avoid);
          CHECK(got == want);
        }
      }
    }
  }
}

TEST_CASE("counting identity relating avoidance to unrestricted flags") {
  // For every element s and every 0 < d < r:
  //   sum_{I subset of [d], d in I} (-1)^{|I|} N_{empty,I,s}
  // = sum_{I subset of [d]} (-1)^{|I|} N_{empty,I}.
  std::vector<Matroid> ms = {Matroid::uniform(3, 4), Matroid::uniform(4, 5),
                             Matroid::boolean(4),
                             random_matrix_matroid(21, 3, 6)};
  for (const Matroid& m : ms) {
    int r = m.rank();
    for (int d = 1; d < r; d++) {
      Integer rhs = 0;
      for (uint32_t mask = 0; mask < (uint32_t(1) << d); mask++) {
        std::vector<int> ranks;
        for (int k = 1; k <= d; k++) {
          if (mask & (uint32_t(1) << (k - 1))) ranks.push_back(k);
        }
        Integer term = m.count_flags({}, ranks);
        rhs += (std::popcount(mask) % 2 == 0) ? term : -term;
      }
      for (int s = 0; s < m.n(); s++) {
        Integer lhs = 0;
        for (uint32_t mask = 0; mask < (uint32_t(1) << d); mask++) {
          if (!(mask & (uint32_t(1) << (d - 1)))) continue;
          std::vector<int> ranks;
          for (int k = 1; k <= d; k++) {
            if (mask & (uint32_t(1) << (k - 1))) ranks.push_back(k);
          }
          Integer term = m.count_flags({}, ranks, s);
          lhs += (std::popcount(mask) % 2 == 0) ? term : -term;
        }
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("minors") {
  Matroid m = Matroid::uniform(3, 4);

  Minor contr = m.contraction(S({1}));
  CHECK(contr.matroid()->n() == 3);
  CHECK(contr.matroid()->rank() == 2);
  CHECK(*contr.matroid() == Matroid::uniform(2, 3));

  Minor restr = m.restriction(S({1, 2}));
  CHECK(*restr.matroid() == Matroid::boolean(2));
  CHECK(restr.lift(Subset(0b01)) == S({1}));
  CHECK(restr.compress(S({2})) == Subset(0b10));

  CHECK_THROWS_AS(m.minor(S({1, 2, 3}), full_set(4)), Error);  // not a flat
  CHECK_THROWS_AS(m.minor(S({1, 2}), S({1, 2})), Error);
  CHECK_THROWS_AS(m.minor(S({1, 2}), S({1})), Error);
}

TEST_CASE("contraction by a flat keeps the minor loopless") {
  std::vector<Matroid> ms = {Matroid::uniform(3, 5), Matroid::boolean(4),
                             random_matrix_matroid(31, 3, 6)};
  for (const Matroid& m : ms) {
    for (const FlatInfo& f : m.proper_flats()) {
      Minor mm = m.contraction(f.mask);
      for (int e = 0; e < mm.matroid()->n(); e++) {
        CHECK(mm.matroid()->rank_of(Subset(1) << e) == 1);
      }
    }
  }
}

TEST_CASE("minor composition") {
  std::vector<Matroid> ms = {Matroid::uniform(4, 6), Matroid::boolean(5),
                             random_matrix_matroid(41, 4, 6)};
  for (const Matroid& m : ms) {
    for (const FlatInfo& f1 : m.proper_flats()) {
      for (const FlatInfo& f2 : m.proper_flats()) {
        if (!(subset_le(f1.mask, f2.mask)) || f1.mask == f2.mask) continue;
        if (f2.rank - f1.rank < 2) continue;
        Minor inner = m.minor(f1.mask, f2.mask);
        const Matroid& nm = *inner.matroid();
        for (const FlatInfo& g : nm.proper_flats()) {
          // Double minor equals the single minor with lifted bounds.
          Minor a = nm.minor(0, g.mask);
          Minor b = m.minor(f1.mask, inner.lift(g.mask) | f1.mask);
          CHECK(*a.matroid() == *b.matroid());
          Minor c = nm.minor(g.mask, full_set(nm.n()));
          Minor d = m.minor(inner.lift(g.mask) | f1.mask, f2.mask);
          CHECK(*c.matroid() == *d.matroid());
        }
      }
    }
  }
}

TEST_CASE("delete_element") {
  Matroid m = Matroid::uniform(3, 5);
  Minor del = m.delete_element(4);
  CHECK(*del.matroid() == Matroid::uniform(3, 4));

  Matroid pair = Matroid::from_bases(3, {S({1, 2}), S({1, 3})});
  Minor del2 = pair.delete_element(2);  // removes one of the parallel pair
  CHECK(*del2.matroid() == Matroid::boolean(2));

  CHECK_THROWS_AS(Matroid::uniform(1, 1).delete_element(0), Error);
}

TEST_CASE("dragon Hall-Rado") {
  Matroid m = Matroid::uniform(3, 4);
  CHECK(m.dragon_hall_rado({S({1, 2}), S({1, 3})}));
  CHECK(!m.dragon_hall_rado({S({1}), S({1})}));
  CHECK(!m.dragon_hall_rado({S({1}), S({2})}));  // singletons have rank 1
  CHECK(m.dragon_hall_rado({S({1, 2}), S({3, 4})}));
  CHECK(m.dragon_hall_rado({S({1, 2, 3, 4})}));
  CHECK_THROWS_AS(m.dragon_hall_rado({}), Error);
  CHECK_THROWS_AS(m.dragon_hall_rado({Subset(0)}), Error);

  // Rank-2 union can only support one set.
  Matroid u25 = Matroid::uniform(2, 5);
  CHECK(u25.dragon_hall_rado({S({1, 2, 3})}));
  CHECK(!u25.dragon_hall_rado({S({1, 2}), S({3, 4})}));
}

TEST_CASE("all_flags enumerates chains") {
  Matroid m = Matroid::uniform(3, 4);
  std::vector<Flag> flags = m.all_flags();
  // 1 empty + 10 singletons + 12 full flags.
  CHECK(flags.size() == 23);
  std::set<Flag> unique(flags.begin(), flags.end());
  CHECK(unique.size() == flags.size());
  for (const Flag& f : flags) m.validate_flag(f);
}

TEST_CASE("capacity and validation errors") {
  CHECK_THROWS_AS(Matroid::uniform(3, 13), Error);
  CHECK_THROWS_AS(Matroid::uniform(0, 3), Error);
  CHECK_THROWS_AS(Matroid::uniform(4, 3), Error);
  Matroid m = Matroid::uniform(3, 4);
  CHECK_THROWS_AS(m.count_flags({}, {3}), Error);       // rank out of range
  CHECK_THROWS_AS(m.count_flags({}, {2, 1}), Error);    // not increasing
  CHECK_THROWS_AS(m.count_flags({S({1, 2, 3})}, {1}), Error);
}

TEST_SUITE_END();
