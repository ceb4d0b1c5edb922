#pragma once

#include <optional>
#include <vector>

#include "chowforge/chow.hpp"

namespace chowforge {

// Total Chern class plus the virtual rank of the class it came from.
struct ChernData {
  int rank = 0;
  ChowElement total;
};

// Coefficients 0..len-1 of x/(1 - e^{-x}).
std::vector<Rational> todd_series(int len);
// Coefficients of log of the above; constant term zero.
std::vector<Rational> todd_log_series(int len);

// K-theoretic operations over one Chow ring. K-classes are carried by
// their Chern characters; the degree-0 part is the virtual rank.
class KTheory {
 public:
  explicit KTheory(const ChowRing& ring) : ring_(&ring) {}

  const ChowRing& ring() const { return *ring_; }

  // exp of the divisor class; the Chern character of its line bundle.
  ChowElement ch_line(const DivisorClass& d) const;
  ChowElement tensor(const ChowElement& a, const ChowElement& b) const;
  ChowElement dual(const ChowElement& a) const;
  ChowElement adams(int j, const ChowElement& a) const;
  ChowElement exterior_power(int p, const ChowElement& a) const;
  // Chern character from a total Chern class via Newton's identities.
  ChowElement ch_of(const ChernData& c) const;

  // Tangent class: telescoping product over the rank filtration.
  ChernData chern_tangent() const;
  // Same class through the two-variable polynomial recursion.
  ChernData chern_tangent_recursive() const;
  // Quotient class of rank n - r; inverse product formula.
  ChernData chern_quotient() const;

  // Todd class from a Chern character, through the universal series.
  ChowElement todd_of_ch(const ChowElement& ch) const;
  // Todd class of the tangent class, computed through the universal
  // series and through the root product; the two must agree exactly.
  const ChowElement& todd_tangent() const;

  // zeta transform of an integral divisor: the product of 1/(1 - alpha_F)
  // over its canonical alpha-expression.
  ChowElement zeta(const DivisorClass& d) const;

  // Euler characteristic via the zeta transform against the geometric
  // series in alpha.
  Rational chi_zeta(const DivisorClass& d) const;
  // Euler characteristic via Chern character against the Todd class.
  Rational chi_hrr(const ChowElement& ch) const;
  Rational chi_hrr_line(const DivisorClass& d) const;

  // c_1 of the dualizing class.
  DivisorClass canonical_divisor() const;

  // Coefficient p is (-1)^p chi of the p-th exterior power of the
  // cotangent class, p = 0..r-1.
  std::vector<Integer> chow_polynomial() const;

 private:
  ChowElement eval_series(const std::vector<Rational>& coeffs,
                          const ChowElement& z) const;

  const ChowRing* ring_;
  mutable std::optional<ChowElement> todd_;
};

}  // namespace chowforge
