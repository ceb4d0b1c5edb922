#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chowforge/chow.hpp"
#include "chowforge/ktheory.hpp"

namespace chowforge {

// Witness data for the flag-based positivity properties. Each entry pairs a
// flag (a chain of proper flat ids, possibly empty) with a coefficient
// vector over all proper flats that represents the tested divisor class,
// vanishes on the flag, and meets the property's sign constraints.
struct NefCertificate {
  std::string property;
  std::vector<std::pair<std::vector<int>, std::vector<Rational>>> entries;
};

// A submodular function on the full subset lattice restricting to the
// divisor on flats, with value 0 on the empty set and the ground set.
struct SubmodularLift {
  int n = 0;
  std::vector<Rational> values;  // indexed by subset mask, size 2^n
};

struct PositivityResult {
  bool ok = false;
  std::optional<NefCertificate> certificate;
};

struct LiftResult {
  bool ok = false;
  std::optional<SubmodularLift> lift;
};

// For every flag of proper flats, asks for a representative vanishing on
// the flag and nonnegative on the flats insertable into it.
PositivityResult check_P3(const ChowRing& ring, const DivisorClass& d);

// Same flag sweep, but nonnegativity is demanded on all proper flats.
PositivityResult check_P2(const ChowRing& ring, const DivisorClass& d);

// Asks for a submodular extension of some representative to all subsets.
LiftResult check_P1(const ChowRing& ring, const DivisorClass& d);

// Strict variant of the flag sweep: a scaled representative must be >= 1 on
// every insertable flat. The stored certificate is rescaled back to d.
PositivityResult check_ample(const ChowRing& ring, const DivisorClass& d);

bool is_big_and_nef(const ChowRing& ring, const DivisorClass& d);

// Rewrites a product of nef divisors as a nonnegative combination of flag
// monomials, keyed by the chain of proper flat ids.
std::map<std::vector<int>, Rational> nef_product_expand(
    const ChowRing& ring, const std::vector<DivisorClass>& factors);

// Necessary-condition probe: false when some product against a tuple of the
// supplied nef generators has negative degree. Not a membership test.
bool fake_effective_probe(const ChowRing& ring, const DivisorClass& d,
                          const std::vector<DivisorClass>& generators);

// Degree of a product of exactly rank-1 divisor classes.
Rational mixed_degree(const ChowRing& ring,
                      const std::vector<DivisorClass>& factors);

// Coefficient of the monomial with the given exponents in the volume
// polynomial deg((sum u_i l_i)^(r-1)) / (r-1)!.
Rational volume_polynomial(const ChowRing& ring,
                           const std::vector<DivisorClass>& factors,
                           const std::vector<int>& exponents);

// Largest t with d^t nonzero.
int numerical_dimension(const ChowRing& ring, const DivisorClass& d);

// 1 when the subsets satisfy the dragon-Hall-Rado condition, else 0.
// Cross-checked against the Chow-ring degree of the alpha_S product.
Integer deg_alpha_product(const ChowRing& ring,
                          const std::vector<Subset>& sets);

// Positivity of the beta_S product degree; checked to match the
// dragon-Hall-Rado criterion.
bool beta_product_positive(const ChowRing& ring,
                           const std::vector<Subset>& sets);

struct KvReport {
  bool sign_ok = false;
  Rational value;
};

// (-1)^(r-1) times the top degree of zeta(-d). Caller ensures d is nef.
KvReport kv_weak_scan(const KTheory& kt, const DivisorClass& d);

// (-1)^(r-1) times chi(-d). Caller ensures d is big and nef.
KvReport kv_strong_scan(const KTheory& kt, const DivisorClass& d);

struct Rank3Kv {
  Rational a;                               // deg(alpha * d)
  std::vector<std::pair<int, Rational>> b;  // per corank-1 flat id
  Rational value;                           // deg(d * (d - alpha + S_1))
};

// Rank-3 decomposition data; verifies value = a(a-1) - sum b_i(b_i-1).
Rank3Kv rank3_kv_ingredients(const ChowRing& ring, const DivisorClass& d);

}  // namespace chowforge
