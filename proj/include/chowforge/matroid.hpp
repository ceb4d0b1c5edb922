#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "chowforge/error.hpp"
#include "chowforge/rational.hpp"
#include "chowforge/subset.hpp"

namespace chowforge {

struct FlatInfo {
  Subset mask;
  int rank;
};

// A flag is a strictly increasing chain of proper nonempty flats, possibly
// empty, ordered by inclusion.
using Flag = std::vector<Subset>;

class Matroid;

struct Minor {
  Matroid* matroid() { return m.get(); }
  const Matroid* matroid() const { return m.get(); }
  std::shared_ptr<Matroid> m;
  // elements[i] is the original 0-based element behind minor element i.
  std::vector<int> elements;
  Subset lift(Subset compressed) const;
  Subset compress(Subset original) const;
};

// Loopless matroid on ground set {0, ..., n-1} (rendered 1-based in IO).
// Rank queries are O(1): uniform/boolean matroids use the closed form,
// bases-defined matroids a materialized table over all 2^n subsets.
class Matroid {
 public:
  static Matroid uniform(int r, int n);
  static Matroid boolean(int n);
  // Bases as masks; validates the exchange axiom and looplessness.
  static Matroid from_bases(int n, const std::vector<Subset>& bases);

  int n() const { return n_; }
  int rank() const { return rank_; }
  bool is_uniform() const { return rank_table_.empty(); }

  int rank_of(Subset s) const {
    if (rank_table_.empty()) {
      int c = popcount(s);
      return c < rank_ ? c : rank_;
    }
    return rank_table_[s];
  }

  Subset closure(Subset s) const;
  bool is_flat(Subset s) const { return closure(s) == s; }
  bool is_coloop(int e) const;
  bool is_proper_nonempty_flat(Subset s) const;

  // All flats, sorted by (rank, mask).
  const std::vector<FlatInfo>& flats() const { return flats_; }
  // Proper nonempty flats, sorted by (rank, mask); index = flat id.
  const std::vector<FlatInfo>& proper_flats() const { return proper_flats_; }
  const std::vector<Subset>& flats_of_rank(int k) const;
  // Id into proper_flats(), or nullopt when s is not a proper nonempty flat.
  std::optional<int> proper_flat_id(Subset s) const;

  // Throws Error(Parse) unless flag is a strictly increasing chain of
  // proper nonempty flats.
  void validate_flag(const Flag& flag) const;

  // Number of flags with rank set exactly `ranks` (strictly increasing,
  // values in [1, rank-1]) that stay disjoint from `flag` and merge with it
  // into a flag. When avoid >= 0 the top flat must not contain that element.
  Integer count_flags(const Flag& flag, const std::vector<int>& ranks,
                      int avoid = -1) const;

  // All flags, shortest first, deterministic order.
  std::vector<Flag> all_flags() const;

  // Rank-interval minor: contract the flat `contract`, restrict to the flat
  // `restrict`; ground set restrict \ contract (must be nonempty).
  Minor minor(Subset contract, Subset restrict) const;
  Minor contraction(Subset flat) const { return minor(flat, full_set(n_)); }
  Minor restriction(Subset flat) const { return minor(0, flat); }
  // Deletes a single element (n must be at least 2).
  Minor delete_element(int e) const;

  // Dragon Hall-Rado: rk(union of S_i, i in I) >= 1 + |I| for every
  // nonempty I. Sets must be nonempty subsets of the ground set.
  bool dragon_hall_rado(const std::vector<Subset>& sets) const;

  // Structural equality: same ground set and rank function.
  bool operator==(const Matroid& other) const {
    if (n_ != other.n_ || rank_ != other.rank_) return false;
    for (Subset s = 0; s <= full_set(n_); s++) {
      if (rank_of(s) != other.rank_of(s)) return false;
    }
    return true;
  }

 private:
  Matroid() = default;
  void build_flats();

  int n_ = 0;
  int rank_ = 0;
  std::vector<uint8_t> rank_table_;  // empty for uniform/boolean
  std::vector<FlatInfo> flats_;
  std::vector<FlatInfo> proper_flats_;
  std::vector<std::vector<Subset>> flats_by_rank_;
  std::vector<int> proper_id_;  // 2^n lookup, -1 when not a proper flat
};

}  // namespace chowforge
