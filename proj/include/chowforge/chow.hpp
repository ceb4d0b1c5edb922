#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "chowforge/matroid.hpp"
#include "chowforge/rational.hpp"

namespace chowforge {

// Product over a multiset of proper nonempty flats forming a chain.
// Factors are (proper flat id, exponent), sorted by (rank, mask); the empty
// list is the unit monomial.
struct ChainMonomial {
  std::vector<std::pair<int, int>> factors;

  int degree() const {
    int d = 0;
    for (auto& [id, e] : factors) d += e;
    return d;
  }
  bool operator==(const ChainMonomial&) const = default;
};

class ChowRing;

// Element of the graded ring, stored in normal form: dense coefficient
// vectors over the per-degree monomial bases of its ring.
class ChowElement {
 public:
  ChowElement() = default;

  const ChowRing* ring() const { return ring_; }
  bool is_zero() const;
  // Zero outside this degree (true for the zero element).
  bool is_homogeneous(int d) const;
  const std::vector<Rational>& component(int d) const;
  ChowElement graded_part(int d) const;
  // Negates the degree-d component by (-1)^d.
  ChowElement alternate_signs() const;

  ChowElement operator+(const ChowElement& o) const;
  ChowElement operator-(const ChowElement& o) const;
  ChowElement operator-() const;
  ChowElement operator*(const Rational& c) const;
  ChowElement& operator+=(const ChowElement& o);
  ChowElement& operator-=(const ChowElement& o);
  bool operator==(const ChowElement& o) const;

 private:
  friend class ChowRing;
  const ChowRing* ring_ = nullptr;
  std::vector<std::vector<Rational>> comps_;
};

// A divisor given by a coefficient vector over all proper nonempty flats
// (an explicit representative of a degree-1 class; J-moves change the
// vector but not the class).
struct DivisorClass {
  const ChowRing* ring = nullptr;
  std::vector<Rational> coeffs;  // indexed by proper flat id

  bool is_integral() const;
  DivisorClass operator+(const DivisorClass& o) const;
  DivisorClass operator-(const DivisorClass& o) const;
  DivisorClass operator*(const Rational& c) const;
};

// Expression of a divisor as q_E * alpha + sum_F q_F * alpha_F over proper
// nonempty flats F (alpha = alpha_E). Exact for every divisor; integral
// whenever the input coefficient vector is integral.
struct AlphaExpr {
  Rational alpha_coeff;
  std::vector<Rational> flat_coeffs;  // indexed by proper flat id

  bool is_integral() const;
};

class ChowRing {
 public:
  struct Options {
    size_t max_monomials_per_degree = 50000;
  };

  explicit ChowRing(const Matroid& m) : ChowRing(m, Options{}) {}
  ChowRing(const Matroid& m, Options opt);

  const Matroid& matroid() const { return matroid_; }
  int top_degree() const { return matroid_.rank() - 1; }
  int dim(int d) const;
  std::vector<Integer> graded_dims() const;

  // Monomial universe and basis for one degree.
  int universe_size(int d) const;
  const ChainMonomial& universe_monomial(int d, int col) const;
  const std::vector<int>& basis_columns(int d) const;
  const ChainMonomial& basis_monomial(int d, int i) const;

  ChowElement zero() const;
  ChowElement one() const;
  ChowElement scalar(const Rational& c) const;
  // x_F; throws NotAFlat unless F is a proper nonempty flat.
  ChowElement x(Subset flat) const;
  ChowElement alpha() const;
  ChowElement beta() const;
  ChowElement alpha_S(Subset s) const;  // any nonempty S (S = E gives alpha)
  ChowElement beta_S(Subset s) const;
  ChowElement S_k(int k) const;  // sum of x_F over flats of rank r-k, 0<k<r

  DivisorClass divisor_zero() const;
  DivisorClass divisor_x(Subset flat) const;
  DivisorClass divisor_alpha() const;
  DivisorClass divisor_beta() const;
  DivisorClass divisor_alpha_S(Subset s) const;
  DivisorClass divisor_beta_S(Subset s) const;
  DivisorClass divisor_S_k(int k) const;
  ChowElement element_of(const DivisorClass& d) const;
  bool divisors_equal(const DivisorClass& a, const DivisorClass& b) const;
  AlphaExpr alpha_expression(const DivisorClass& d) const;

  // Normal form of a product over arbitrary flat masks with exponents
  // (zero when the support is not a chain or the degree exceeds top).
  ChowElement reduce_product(
      const std::vector<std::pair<Subset, int>>& factors) const;

  ChowElement multiply(const ChowElement& a, const ChowElement& b) const;
  ChowElement pow(const ChowElement& a, int k) const;
  // exp of an element with zero degree-0 part, truncated at top degree.
  ChowElement exp(const ChowElement& a) const;
  // Inverse of an element with unit degree-0 part.
  ChowElement invert_unit(const ChowElement& a) const;

  // Degree map on A^{r-1}; requires a homogeneous of degree r-1.
  Rational degree(const ChowElement& a) const;
  // deg of the top-degree component, ignoring lower parts.
  Rational degree_top(const ChowElement& a) const;

  // Gram matrix deg(b_i * c_j) over the bases of A^d and A^{r-1-d}.
  std::vector<std::vector<Rational>> pairing_matrix(int d) const;

  std::string monomial_to_string(const ChainMonomial& m) const;

  // Cached powers of alpha (geometric series for Euler characteristics).
  const ChowElement& alpha_power(int k) const;
  // Cached powers of alpha_F for a proper flat id.
  const ChowElement& alpha_flat_power(int flat_id, int k) const;

 private:
  struct DegreeSlice {
    std::vector<ChainMonomial> monos;              // sorted by monomial order
    std::unordered_map<std::string, int> id_of;    // encoded key -> column
    std::vector<int> basis_cols;                   // free columns, ascending
    std::vector<int> basis_pos;                    // column -> basis index/-1
    // For pivot columns: normal form over basis positions.
    std::vector<std::vector<std::pair<int, Rational>>> nf;
  };

  void build_slice(int d, const Options& opt);
  void build_degree_map();
  static std::string encode(const ChainMonomial& m);
  // Normal form of a universe column as sparse (basis pos, coeff) pairs.
  const std::vector<std::pair<int, Rational>>& column_nf(int d, int col) const;
  std::optional<ChainMonomial> merge(const ChainMonomial& a,
                                     const ChainMonomial& b) const;
  ChowElement element_from_x_coeffs(const std::vector<Rational>& coeffs) const;
  void check_ring(const ChowElement& a) const;
  const std::vector<std::vector<Rational>>& mobius() const;

  Matroid matroid_;
  std::vector<DegreeSlice> slices_;
  Rational top_basis_degree_;  // deg of the single top-degree basis monomial

  mutable std::vector<ChowElement> alpha_powers_;
  mutable std::unordered_map<uint64_t, ChowElement> alpha_flat_powers_;
  mutable std::vector<std::vector<Rational>> mobius_;  // flats poset, id x id
  // Cache for basis-monomial x basis-monomial products with right degree 1.
  mutable std::unordered_map<uint64_t, std::vector<std::pair<int, Rational>>>
      mult_cache_;
};

// Independent degree evaluation for monomials of the shape
//   beta^{d0} * x_{F_1}^{d_1} * ... * x_{F_k}^{d_k} * alpha^{dTop}
// with F_1 strictly contained in ... strictly contained in F_k proper
// nonempty flats and total degree rank-1. Works by flag counting over
// minors, never touching the ring presentation.
Integer degree_recursive(const Matroid& m, int beta_exp,
                         const std::vector<std::pair<Subset, int>>& chain,
                         int alpha_exp);

}  // namespace chowforge
