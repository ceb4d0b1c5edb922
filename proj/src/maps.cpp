#include "chowforge/maps.hpp"

#include <array>

namespace chowforge {

void TensorElement::add(ChowElement left, ChowElement right) {
  if (left.ring() != cring_ || right.ring() != rring_) {
    throw Error(ErrorCode::Internal, "tensor factor in the wrong ring");
  }
  if (left.is_zero() || right.is_zero()) return;
  terms_.push_back({std::move(left), std::move(right)});
}

TensorElement TensorElement::operator+(const TensorElement& o) const {
  if (cring_ != o.cring_ || rring_ != o.rring_) {
    throw Error(ErrorCode::Internal, "tensors over different rings");
  }
  TensorElement out = *this;
  for (auto& [l, r] : o.terms_) out.terms_.push_back({l, r});
  return out;
}

TensorElement TensorElement::operator-(const TensorElement& o) const {
  return *this + (o * Rational(-1));
}

TensorElement TensorElement::operator*(const Rational& c) const {
  TensorElement out(cring_, rring_);
  if (c == 0) return out;
  for (auto& [l, r] : terms_) out.terms_.push_back({l * c, r});
  return out;
}

std::map<std::array<int, 4>, Rational> TensorElement::coordinates() const {
  std::map<std::array<int, 4>, Rational> out;
  for (auto& [l, r] : terms_) {
    for (int d1 = 0; d1 <= cring_->top_degree(); d1++) {
      const auto& c1 = l.component(d1);
      for (int i1 = 0; i1 < cring_->dim(d1); i1++) {
        if (c1[i1] == 0) continue;
        for (int d2 = 0; d2 <= rring_->top_degree(); d2++) {
          const auto& c2 = r.component(d2);
          for (int i2 = 0; i2 < rring_->dim(d2); i2++) {
            if (c2[i2] == 0) continue;
            out[{d1, i1, d2, i2}] += c1[i1] * c2[i2];
          }
        }
      }
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    it = (it->second == 0) ? out.erase(it) : std::next(it);
  }
  return out;
}

bool TensorElement::operator==(const TensorElement& o) const {
  if (cring_ != o.cring_ || rring_ != o.rring_) return false;
  return coordinates() == o.coordinates();
}

bool TensorElement::is_zero() const { return coordinates().empty(); }

// ---------------------------------------------------------------------------

FlatStar::FlatStar(const ChowRing& ring, Subset flat)
    : ring_(&ring), flat_(flat) {
  if (!ring.matroid().is_proper_nonempty_flat(flat)) {
    throw Error(ErrorCode::NotAFlat,
                subset_to_string(flat) + " is not a proper nonempty flat");
  }
  contraction_ = ring.matroid().contraction(flat);
  restriction_ = ring.matroid().restriction(flat);
  cring_ = std::make_unique<ChowRing>(*contraction_.matroid());
  rring_ = std::make_unique<ChowRing>(*restriction_.matroid());

  const auto& flats = ring.matroid().proper_flats();
  for (const FlatInfo& g : flats) {
    TensorElement img = tensor_zero();
    if (g.mask == flat_) {
      img.add(cring_->beta() * Rational(-1), rring_->one());
      img.add(cring_->one() * Rational(-1), rring_->alpha());
    } else if (subset_le(g.mask, flat_)) {
      img.add(cring_->one(), rring_->x(restriction_.compress(g.mask)));
    } else if (subset_le(flat_, g.mask)) {
      img.add(cring_->x(contraction_.compress(g.mask)), rring_->one());
    }
    gen_images_.push_back(std::move(img));
  }
}

TensorElement FlatStar::tensor_zero() const {
  return TensorElement(cring_.get(), rring_.get());
}

TensorElement FlatStar::tensor(ChowElement left, ChowElement right) const {
  TensorElement out = tensor_zero();
  out.add(std::move(left), std::move(right));
  return out;
}

TensorElement FlatStar::multiply(const TensorElement& a,
                                 const TensorElement& b) const {
  TensorElement out = tensor_zero();
  for (auto& [l1, r1] : a.terms()) {
    for (auto& [l2, r2] : b.terms()) {
      out.add(cring_->multiply(l1, l2), rring_->multiply(r1, r2));
    }
  }
  return out;
}

TensorElement FlatStar::pullback(const ChowElement& a) const {
  if (a.ring() != ring_) {
    throw Error(ErrorCode::Internal, "element belongs to a different ring");
  }
  TensorElement out = tensor_zero();
  for (int d = 0; d <= ring_->top_degree(); d++) {
    const auto& comp = a.component(d);
    for (int i = 0; i < ring_->dim(d); i++) {
      if (comp[i] == 0) continue;
      TensorElement img = tensor(cring_->one(), rring_->one());
      for (auto& [id, e] : ring_->basis_monomial(d, i).factors) {
        for (int t = 0; t < e; t++) img = multiply(img, gen_images_[id]);
      }
      out = out + img * comp[i];
    }
  }
  return out;
}

ChowElement FlatStar::pushforward(const TensorElement& t) const {
  if (t.contraction_ring() != cring_.get() ||
      t.restriction_ring() != rring_.get()) {
    throw Error(ErrorCode::Internal, "tensor belongs to a different star");
  }
  ChowElement out = ring_->zero();
  const auto& cflats = cring_->matroid().proper_flats();
  const auto& rflats = rring_->matroid().proper_flats();
  for (auto& [l, r] : t.terms()) {
    for (int d1 = 0; d1 <= cring_->top_degree(); d1++) {
      const auto& c1 = l.component(d1);
      for (int i1 = 0; i1 < cring_->dim(d1); i1++) {
        if (c1[i1] == 0) continue;
        std::vector<std::pair<Subset, int>> factors = {{flat_, 1}};
        for (auto& [id, e] : cring_->basis_monomial(d1, i1).factors) {
          factors.push_back({contraction_.lift(cflats[id].mask) | flat_, e});
        }
        for (int d2 = 0; d2 <= rring_->top_degree(); d2++) {
          const auto& c2 = r.component(d2);
          for (int i2 = 0; i2 < rring_->dim(d2); i2++) {
            if (c2[i2] == 0) continue;
            auto full = factors;
            for (auto& [id, e] : rring_->basis_monomial(d2, i2).factors) {
              full.push_back({restriction_.lift(rflats[id].mask), e});
            }
            out += ring_->reduce_product(full) * (c1[i1] * c2[i2]);
          }
        }
      }
    }
  }
  return out;
}

Rational FlatStar::tensor_degree(const TensorElement& t) const {
  Rational out = 0;
  for (auto& [l, r] : t.terms()) {
    out += cring_->degree_top(l) * rring_->degree_top(r);
  }
  return out;
}

// ---------------------------------------------------------------------------

ChowElement deletion_map(const ChowRing& ambient, int i,
                         const ChowRing& del_ring, const ChowElement& a) {
  const Matroid& m = ambient.matroid();
  if (i < 0 || i >= m.n()) {
    throw Error(ErrorCode::Parse, "element index out of range");
  }
  if (a.ring() != &del_ring) {
    throw Error(ErrorCode::Internal, "element belongs to a different ring");
  }
  Minor del = m.delete_element(i);
  if (!(del_ring.matroid() == *del.matroid())) {
    throw Error(ErrorCode::Internal, "ring is not the deletion at " +
                                         std::to_string(i + 1));
  }
  const auto& dflats = del_ring.matroid().proper_flats();

  std::vector<ChowElement> gen_images;
  gen_images.reserve(dflats.size());
  for (const FlatInfo& k : dflats) {
    Subset k0 = del.lift(k.mask);
    ChowElement img = ambient.zero();
    for (Subset c : {k0, k0 | (Subset(1) << i)}) {
      if (m.is_proper_nonempty_flat(c)) img += ambient.x(c);
    }
    gen_images.push_back(std::move(img));
  }

  ChowElement out = ambient.zero();
  for (int d = 0; d <= del_ring.top_degree(); d++) {
    const auto& comp = a.component(d);
    for (int idx = 0; idx < del_ring.dim(d); idx++) {
      if (comp[idx] == 0) continue;
      ChowElement img = ambient.one();
      for (auto& [id, e] : del_ring.basis_monomial(d, idx).factors) {
        for (int t = 0; t < e; t++) img = ambient.multiply(img, gen_images[id]);
      }
      out += img * comp[idx];
    }
  }
  return out;
}

}  // namespace chowforge
