#include "chowforge/matroid.hpp"

#include <algorithm>
#include <unordered_set>

namespace chowforge {

namespace {

void check_ground_size(int n) {
  if (n < 1) {
    throw Error(ErrorCode::Rank, "ground set must be nonempty");
  }
  if (n > kMaxGroundSize) {
    throw Error(ErrorCode::Capacity,
                "ground set size " + std::to_string(n) + " exceeds limit " +
                    std::to_string(kMaxGroundSize));
  }
}

}  // namespace

Subset Minor::lift(Subset compressed) const {
  Subset out = 0;
  for (size_t i = 0; i < elements.size(); i++) {
    if (compressed & (Subset(1) << i)) out |= Subset(1) << elements[i];
  }
  return out;
}

Subset Minor::compress(Subset original) const {
  Subset out = 0;
  for (size_t i = 0; i < elements.size(); i++) {
    if (original & (Subset(1) << elements[i])) out |= Subset(1) << i;
  }
  return out;
}

Matroid Matroid::uniform(int r, int n) {
  check_ground_size(n);
  if (r < 1 || r > n) {
    throw Error(ErrorCode::Rank, "uniform matroid needs 1 <= r <= n, got r=" +
                                     std::to_string(r) +
                                     " n=" + std::to_string(n));
  }
  Matroid m;
  m.n_ = n;
  m.rank_ = r;
  m.build_flats();
  return m;
}

Matroid Matroid::boolean(int n) { return uniform(n, n); }

Matroid Matroid::from_bases(int n, const std::vector<Subset>& bases) {
  check_ground_size(n);
  if (bases.empty()) {
    throw Error(ErrorCode::Rank, "bases list must be nonempty");
  }
  Subset ground = full_set(n);
  int r = popcount(bases[0]);
  if (r < 1) {
    throw Error(ErrorCode::Rank, "bases must be nonempty sets");
  }
  std::unordered_set<Subset> basis_set;
  Subset covered = 0;
  for (Subset b : bases) {
    if ((b & ~ground) != 0) {
      throw Error(ErrorCode::Parse, "basis " + subset_to_string(b) +
                                        " not contained in the ground set");
    }
    if (popcount(b) != r) {
      throw Error(ErrorCode::Rank, "bases must all have the same size");
    }
    basis_set.insert(b);
    covered |= b;
  }
  if (covered != ground) {
    throw Error(ErrorCode::Rank,
                "matroid has a loop: element " +
                    std::to_string(std::countr_zero(Subset(~covered & ground)) +
                                   1) +
                    " lies in no basis");
  }
  // Basis exchange: for B1, B2 and x in B1\B2 there is y in B2\B1 with
  // B1 - x + y again a basis.
  for (Subset b1 : basis_set) {
    for (Subset b2 : basis_set) {
      if (b1 == b2) continue;
      Subset only1 = b1 & ~b2;
      Subset only2 = b2 & ~b1;
      for (int x : subset_elements(only1)) {
        bool found = false;
        for (int y : subset_elements(only2)) {
          Subset cand = (b1 & ~(Subset(1) << x)) | (Subset(1) << y);
          if (basis_set.count(cand)) {
            found = true;
            break;
          }
        }
        if (!found) {
          throw Error(ErrorCode::Rank,
                      "bases violate the exchange axiom between " +
                          subset_to_string(b1) + " and " +
                          subset_to_string(b2));
        }
      }
    }
  }
  Matroid m;
  m.n_ = n;
  m.rank_ = r;
  m.rank_table_.assign(size_t(1) << n, 0);
  for (Subset s = 0; s <= ground; s++) {
    int best = 0;
    for (Subset b : basis_set) {
      int c = popcount(b & s);
      if (c > best) best = c;
    }
    m.rank_table_[s] = static_cast<uint8_t>(best);
  }
  m.build_flats();
  return m;
}

Subset Matroid::closure(Subset s) const {
  int rs = rank_of(s);
  Subset out = s;
  Subset rest = full_set(n_) & ~s;
  for (int e : subset_elements(rest)) {
    if (rank_of(s | (Subset(1) << e)) == rs) out |= Subset(1) << e;
  }
  return out;
}

bool Matroid::is_coloop(int e) const {
  return rank_of(full_set(n_) & ~(Subset(1) << e)) < rank_;
}

bool Matroid::is_proper_nonempty_flat(Subset s) const {
  return s != 0 && s != full_set(n_) && is_flat(s);
}

void Matroid::build_flats() {
  Subset ground = full_set(n_);
  proper_id_.assign(size_t(1) << n_, -1);
  flats_by_rank_.assign(rank_ + 1, {});
  for (Subset s = 0; s <= ground; s++) {
    if (closure(s) == s) flats_by_rank_[rank_of(s)].push_back(s);
  }
  for (int k = 0; k <= rank_; k++) {
    std::sort(flats_by_rank_[k].begin(), flats_by_rank_[k].end());
    for (Subset f : flats_by_rank_[k]) {
      flats_.push_back({f, k});
      if (f != 0 && f != ground) {
        proper_id_[f] = static_cast<int>(proper_flats_.size());
        proper_flats_.push_back({f, k});
      }
    }
  }
  if (flats_by_rank_[0] != std::vector<Subset>{0}) {
    throw Error(ErrorCode::Rank, "matroid has loops");
  }
}

const std::vector<Subset>& Matroid::flats_of_rank(int k) const {
  static const std::vector<Subset> empty;
  if (k < 0 || k > rank_) return empty;
  return flats_by_rank_[k];
}

std::optional<int> Matroid::proper_flat_id(Subset s) const {
  if (s > full_set(n_)) return std::nullopt;
  int id = proper_id_[s];
  if (id < 0) return std::nullopt;
  return id;
}

void Matroid::validate_flag(const Flag& flag) const {
  for (size_t i = 0; i < flag.size(); i++) {
    if (!is_proper_nonempty_flat(flag[i])) {
      throw Error(ErrorCode::NotAFlat,
                  subset_to_string(flag[i]) +
                      " is not a proper nonempty flat");
    }
    if (i > 0 && !(subset_le(flag[i - 1], flag[i]) && flag[i - 1] != flag[i])) {
      throw Error(ErrorCode::Parse, "flag is not strictly increasing");
    }
  }
}

Integer Matroid::count_flags(const Flag& flag, const std::vector<int>& ranks,
                             int avoid) const {
  validate_flag(flag);
  for (size_t i = 0; i < ranks.size(); i++) {
    if (ranks[i] < 1 || ranks[i] > rank_ - 1) {
      throw Error(ErrorCode::Rank,
                  "flag rank " + std::to_string(ranks[i]) + " outside [1," +
                      std::to_string(rank_ - 1) + "]");
    }
    if (i > 0 && ranks[i] <= ranks[i - 1]) {
      throw Error(ErrorCode::Parse, "rank set must be strictly increasing");
    }
  }
  if (ranks.empty()) return 1;

  auto compatible = [&](Subset g) {
    for (Subset f : flag) {
      if (g == f || !comparable(g, f)) return false;
    }
    return true;
  };

  std::vector<Subset> prev_flats;
  std::vector<Integer> prev_ways;
  for (size_t t = 0; t < ranks.size(); t++) {
    bool top = (t + 1 == ranks.size());
    std::vector<Subset> cur_flats;
    std::vector<Integer> cur_ways;
    for (Subset g : flats_of_rank(ranks[t])) {
      if (!compatible(g)) continue;
      if (top && avoid >= 0 && (g & (Subset(1) << avoid))) continue;
      Integer ways = 0;
      if (t == 0) {
        ways = 1;
      } else {
        for (size_t j = 0; j < prev_flats.size(); j++) {
          if (subset_le(prev_flats[j], g) && prev_flats[j] != g) {
            ways += prev_ways[j];
          }
        }
      }
      if (ways != 0) {
        cur_flats.push_back(g);
        cur_ways.push_back(ways);
      }
    }
    prev_flats = std::move(cur_flats);
    prev_ways = std::move(cur_ways);
  }
  Integer total = 0;
  for (const Integer& w : prev_ways) total += w;
  return total;
}

std::vector<Flag> Matroid::all_flags() const {
  std::vector<Flag> out;
  Flag current;
  // Extends `current` with flats strictly above its top, id-ordered, which
  // with (rank, mask)-sorted proper flats yields chains in increasing order.
  auto extend = [&](auto&& self, int min_id) -> void {
    out.push_back(current);
    for (int id = min_id; id < static_cast<int>(proper_flats_.size()); id++) {
      Subset f = proper_flats_[id].mask;
      if (!current.empty()) {
        Subset top = current.back();
        if (!(subset_le(top, f) && top != f)) continue;
      }
      current.push_back(f);
      self(self, id + 1);
      current.pop_back();
    }
  };
  extend(extend, 0);
  std::stable_sort(out.begin(), out.end(),
                   [](const Flag& a, const Flag& b) {
                     return a.size() < b.size();
                   });
  return out;
}

Minor Matroid::minor(Subset contract, Subset restrict) const {
  Subset ground = full_set(n_);
  if (contract != 0 && !is_flat(contract)) {
    throw Error(ErrorCode::NotAFlat,
                subset_to_string(contract) + " is not a flat");
  }
  if (restrict != ground && !is_flat(restrict)) {
    throw Error(ErrorCode::NotAFlat,
                subset_to_string(restrict) + " is not a flat");
  }
  if (!subset_le(contract, restrict) || contract == restrict) {
    throw Error(ErrorCode::Rank,
                "minor needs contract strictly contained in restrict");
  }
  Subset window = restrict & ~contract;
  Minor out;
  out.elements = subset_elements(window);
  int nn = static_cast<int>(out.elements.size());
  int base = rank_of(contract);
  Matroid mm;
  mm.n_ = nn;
  mm.rank_ = rank_of(restrict) - base;
  mm.rank_table_.assign(size_t(1) << nn, 0);
  for (Subset s = 0; s < (Subset(1) << nn); s++) {
    Subset lifted = 0;
    for (int i = 0; i < nn; i++) {
      if (s & (Subset(1) << i)) lifted |= Subset(1) << out.elements[i];
    }
    mm.rank_table_[s] = static_cast<uint8_t>(rank_of(lifted | contract) - base);
  }
  mm.build_flats();
  out.m = std::make_shared<Matroid>(std::move(mm));
  return out;
}

Minor Matroid::delete_element(int e) const {
  if (n_ < 2) {
    throw Error(ErrorCode::Rank, "cannot delete from a singleton ground set");
  }
  if (e < 0 || e >= n_) {
    throw Error(ErrorCode::Parse, "element out of range");
  }
  Subset window = full_set(n_) & ~(Subset(1) << e);
  Minor out;
  out.elements = subset_elements(window);
  int nn = n_ - 1;
  Matroid mm;
  mm.n_ = nn;
  mm.rank_ = rank_of(window);
  mm.rank_table_.assign(size_t(1) << nn, 0);
  for (Subset s = 0; s < (Subset(1) << nn); s++) {
    Subset lifted = 0;
    for (int i = 0; i < nn; i++) {
      if (s & (Subset(1) << i)) lifted |= Subset(1) << out.elements[i];
    }
    mm.rank_table_[s] = static_cast<uint8_t>(rank_of(lifted));
  }
  mm.build_flats();
  out.m = std::make_shared<Matroid>(std::move(mm));
  return out;
}

bool Matroid::dragon_hall_rado(const std::vector<Subset>& sets) const {
  if (sets.empty()) {
    throw Error(ErrorCode::Parse, "dragon Hall-Rado needs at least one set");
  }
  for (Subset s : sets) {
    if (s == 0 || s > full_set(n_)) {
      throw Error(ErrorCode::Parse,
                  "sets must be nonempty subsets of the ground set");
    }
  }
  int m = static_cast<int>(sets.size());
  for (uint32_t mask = 1; mask < (uint32_t(1) << m); mask++) {
    Subset uni = 0;
    for (int i = 0; i < m; i++) {
      if (mask & (uint32_t(1) << i)) uni |= sets[i];
    }
    if (rank_of(uni) < 1 + std::popcount(mask)) return false;
  }
  return true;
}

}  // namespace chowforge
