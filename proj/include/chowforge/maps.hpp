#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "chowforge/chow.hpp"

namespace chowforge {

// Element of A(M/F) (x) A(M|F), stored as a sum of pure tensors. The left
// factor always lives in the contraction ring, the right factor in the
// restriction ring.
class TensorElement {
 public:
  TensorElement(const ChowRing* contraction, const ChowRing* restriction)
      : cring_(contraction), rring_(restriction) {}

  const ChowRing* contraction_ring() const { return cring_; }
  const ChowRing* restriction_ring() const { return rring_; }
  const std::vector<std::pair<ChowElement, ChowElement>>& terms() const {
    return terms_;
  }

  void add(ChowElement left, ChowElement right);
  TensorElement operator+(const TensorElement& o) const;
  TensorElement operator-(const TensorElement& o) const;
  TensorElement operator*(const Rational& c) const;
  bool operator==(const TensorElement& o) const;
  bool is_zero() const;

  // Coefficients over pairs of basis monomials (d_left, i_left, d_right,
  // i_right); the canonical coordinates used for equality.
  std::map<std::array<int, 4>, Rational> coordinates() const;

 private:
  const ChowRing* cring_;
  const ChowRing* rring_;
  std::vector<std::pair<ChowElement, ChowElement>> terms_;
};

// The two minor rings at a proper nonempty flat together with the
// pullback/pushforward pair between A(M) and A(M/F) (x) A(M|F).
class FlatStar {
 public:
  FlatStar(const ChowRing& ring, Subset flat);

  const ChowRing& ambient() const { return *ring_; }
  Subset flat() const { return flat_; }
  const ChowRing& contraction_ring() const { return *cring_; }
  const ChowRing& restriction_ring() const { return *rring_; }
  const Minor& contraction() const { return contraction_; }
  const Minor& restriction() const { return restriction_; }

  TensorElement tensor_zero() const;
  TensorElement tensor(ChowElement left, ChowElement right) const;

  // Ring map A(M) -> A(M/F) (x) A(M|F).
  TensorElement pullback(const ChowElement& a) const;
  // Module map the other way; pullback then pushforward multiplies by x_F.
  ChowElement pushforward(const TensorElement& t) const;

  TensorElement multiply(const TensorElement& a, const TensorElement& b) const;
  // Product of the two degree maps on the top bidegree component.
  Rational tensor_degree(const TensorElement& t) const;

 private:
  const ChowRing* ring_;
  Subset flat_;
  Minor contraction_;
  Minor restriction_;
  std::unique_ptr<ChowRing> cring_;
  std::unique_ptr<ChowRing> rring_;
  // Images of the ambient generators x_G, indexed by proper flat id.
  std::vector<TensorElement> gen_images_;
};

// Image of a class under the deletion map A(M\i) -> A(M) sending x_K to
// the sum of x over the flats of M among K and K + i. del_ring must be the
// ring of ambient.matroid().delete_element(i).
ChowElement deletion_map(const ChowRing& ambient, int i,
                         const ChowRing& del_ring, const ChowElement& a);

}  // namespace chowforge
