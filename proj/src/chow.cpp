#include "chowforge/chow.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace chowforge {

namespace {

// Compares chain monomials by expanded rank vector, then expanded mask
// vector, both lexicographically. Factor ids are (rank, mask)-sorted, so
// expansion in factor order is already sorted.
bool monomial_less(const ChainMonomial& a, const ChainMonomial& b,
                   const std::vector<FlatInfo>& flats) {
  auto expand = [&](const ChainMonomial& m, auto&& get) {
    std::vector<uint32_t> out;
    for (auto& [id, e] : m.factors) {
      for (int t = 0; t < e; t++) out.push_back(get(flats[id]));
    }
    return out;
  };
  auto ra = expand(a, [](const FlatInfo& f) { return uint32_t(f.rank); });
  auto rb = expand(b, [](const FlatInfo& f) { return uint32_t(f.rank); });
  if (ra != rb) return ra < rb;
  auto ma = expand(a, [](const FlatInfo& f) { return uint32_t(f.mask); });
  auto mb = expand(b, [](const FlatInfo& f) { return uint32_t(f.mask); });
  return ma < mb;
}

}  // namespace

// ---------------------------------------------------------------------------
// ChowElement

bool ChowElement::is_zero() const {
  for (const auto& comp : comps_) {
    for (const Rational& c : comp) {
      if (c != 0) return false;
    }
  }
  return true;
}

bool ChowElement::is_homogeneous(int d) const {
  for (int k = 0; k < static_cast<int>(comps_.size()); k++) {
    if (k == d) continue;
    for (const Rational& c : comps_[k]) {
      if (c != 0) return false;
    }
  }
  return true;
}

const std::vector<Rational>& ChowElement::component(int d) const {
  if (!ring_ || d < 0 || d >= static_cast<int>(comps_.size())) {
    throw Error(ErrorCode::Internal, "component degree out of range");
  }
  return comps_[d];
}

ChowElement ChowElement::graded_part(int d) const {
  ChowElement out = ring_->zero();
  if (d >= 0 && d < static_cast<int>(comps_.size())) out.comps_[d] = comps_[d];
  return out;
}

ChowElement ChowElement::alternate_signs() const {
  ChowElement out = *this;
  for (size_t d = 1; d < out.comps_.size(); d += 2) {
    for (Rational& c : out.comps_[d]) c = -c;
  }
  return out;
}

ChowElement ChowElement::operator+(const ChowElement& o) const {
  ChowElement out = *this;
  out += o;
  return out;
}

ChowElement ChowElement::operator-(const ChowElement& o) const {
  ChowElement out = *this;
  out -= o;
  return out;
}

ChowElement ChowElement::operator-() const {
  ChowElement out = *this;
  for (auto& comp : out.comps_) {
    for (Rational& c : comp) c = -c;
  }
  return out;
}

ChowElement ChowElement::operator*(const Rational& c) const {
  ChowElement out = *this;
  for (auto& comp : out.comps_) {
    for (Rational& v : comp) v *= c;
  }
  return out;
}

ChowElement& ChowElement::operator+=(const ChowElement& o) {
  if (ring_ != o.ring_) {
    throw Error(ErrorCode::Internal, "elements belong to different rings");
  }
  for (size_t d = 0; d < comps_.size(); d++) {
    for (size_t i = 0; i < comps_[d].size(); i++) comps_[d][i] += o.comps_[d][i];
  }
  return *this;
}

ChowElement& ChowElement::operator-=(const ChowElement& o) {
  if (ring_ != o.ring_) {
    throw Error(ErrorCode::Internal, "elements belong to different rings");
  }
  for (size_t d = 0; d < comps_.size(); d++) {
    for (size_t i = 0; i < comps_[d].size(); i++) comps_[d][i] -= o.comps_[d][i];
  }
  return *this;
}

bool ChowElement::operator==(const ChowElement& o) const {
  if (ring_ != o.ring_) return false;
  return comps_ == o.comps_;
}

// ---------------------------------------------------------------------------
// DivisorClass / AlphaExpr

bool DivisorClass::is_integral() const {
  for (const Rational& c : coeffs) {
    if (!chowforge::is_integral(c)) return false;
  }
  return true;
}

DivisorClass DivisorClass::operator+(const DivisorClass& o) const {
  if (ring != o.ring) {
    throw Error(ErrorCode::Internal, "divisors belong to different rings");
  }
  DivisorClass out = *this;
  for (size_t i = 0; i < coeffs.size(); i++) out.coeffs[i] += o.coeffs[i];
  return out;
}

DivisorClass DivisorClass::operator-(const DivisorClass& o) const {
  if (ring != o.ring) {
    throw Error(ErrorCode::Internal, "divisors belong to different rings");
  }
  DivisorClass out = *this;
  for (size_t i = 0; i < coeffs.size(); i++) out.coeffs[i] -= o.coeffs[i];
  return out;
}

DivisorClass DivisorClass::operator*(const Rational& c) const {
  DivisorClass out = *this;
  for (Rational& v : out.coeffs) v *= c;
  return out;
}

bool AlphaExpr::is_integral() const {
  if (!chowforge::is_integral(alpha_coeff)) return false;
  for (const Rational& c : flat_coeffs) {
    if (!chowforge::is_integral(c)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// ChowRing construction

ChowRing::ChowRing(const Matroid& m, Options opt) : matroid_(m) {
  slices_.resize(top_degree() + 1);
  for (int d = 0; d <= top_degree(); d++) build_slice(d, opt);
  build_degree_map();
}

std::string ChowRing::encode(const ChainMonomial& m) {
  std::string key;
  key.reserve(m.factors.size() * 3);
  for (auto& [id, e] : m.factors) {
    key.push_back(static_cast<char>(id & 0xff));
    key.push_back(static_cast<char>((id >> 8) & 0xff));
    key.push_back(static_cast<char>(e));
  }
  return key;
}

void ChowRing::build_slice(int d, const Options& opt) {
  DegreeSlice& slice = slices_[d];
  const auto& flats = matroid_.proper_flats();
  int nflats = static_cast<int>(flats.size());

  if (d == 0) {
    slice.monos.push_back(ChainMonomial{});
    slice.id_of[encode(slice.monos[0])] = 0;
    slice.basis_cols = {0};
    slice.basis_pos = {0};
    slice.nf.resize(1);
    return;
  }

  // Strict supersets of each proper flat, by id (ids are (rank, mask)
  // sorted, so supersets always have larger ids).
  std::vector<std::vector<int>> supersets(nflats);
  for (int i = 0; i < nflats; i++) {
    for (int j = i + 1; j < nflats; j++) {
      if (subset_le(flats[i].mask, flats[j].mask)) supersets[i].push_back(j);
    }
  }

  // Universe: all chain monomials of degree d.
  std::vector<std::pair<int, int>> current;
  auto gen = [&](auto&& self, int last_id, int remaining) -> void {
    if (remaining == 0) {
      slice.monos.push_back(ChainMonomial{current});
      if (slice.monos.size() > opt.max_monomials_per_degree) {
        throw Error(ErrorCode::Capacity,
                    "chain monomial universe at degree " + std::to_string(d) +
                        " exceeds limit " +
                        std::to_string(opt.max_monomials_per_degree));
      }
      return;
    }
    if (last_id < 0) {
      for (int j = 0; j < nflats; j++) {
        for (int e = 1; e <= remaining; e++) {
          current.push_back({j, e});
          self(self, j, remaining - e);
          current.pop_back();
        }
      }
    } else {
      for (int j : supersets[last_id]) {
        for (int e = 1; e <= remaining; e++) {
          current.push_back({j, e});
          self(self, j, remaining - e);
          current.pop_back();
        }
      }
    }
  };
  gen(gen, -1, d);

  std::sort(slice.monos.begin(), slice.monos.end(),
            [&](const ChainMonomial& a, const ChainMonomial& b) {
              return monomial_less(a, b, flats);
            });
  for (int i = 0; i < static_cast<int>(slice.monos.size()); i++) {
    slice.id_of[encode(slice.monos[i])] = i;
  }
  int ncols = static_cast<int>(slice.monos.size());

  // Relation rows: each linear generator sum_{F contains e_0} x_F -
  // sum_{F contains e_j} x_F times each chain monomial of degree d-1,
  // projected to the chain-monomial span.
  const DegreeSlice& below = slices_[d - 1];

  // Incremental reduced row echelon form. Pivot rows always carry their
  // pivot column with coefficient 1 plus free columns only.
  std::vector<std::map<int, Rational>> pivot_rows;
  std::vector<int> pivot_of_col(ncols, -1);
  std::unordered_map<int, std::vector<int>> col_to_rows;

  std::vector<Rational> val(ncols, Rational(0));
  std::vector<int> touched;
  auto add_to_val = [&](int col, const Rational& c) {
    if (val[col] == 0 && c != 0) touched.push_back(col);
    val[col] += c;
  };

  auto insert_row = [&](const std::vector<std::pair<int, Rational>>& row) {
    touched.clear();
    for (auto& [col, c] : row) add_to_val(col, c);
    // Eliminate pivot-column entries; pivot rows only introduce free
    // columns, so one pass over the original columns suffices.
    size_t initial = touched.size();
    for (size_t idx = 0; idx < initial; idx++) {
      int col = touched[idx];
      int pr = pivot_of_col[col];
      if (pr < 0 || val[col] == 0) continue;
      Rational factor = val[col];
      for (auto& [c2, v2] : pivot_rows[pr]) add_to_val(c2, -factor * v2);
    }
    int lead = -1;
    for (int col : touched) {
      if (val[col] != 0 && (lead < 0 || col < lead)) lead = col;
    }
    if (lead < 0) {
      for (int col : touched) val[col] = 0;
      return;
    }
    std::map<int, Rational> newrow;
    Rational leadval = val[lead];
    for (int col : touched) {
      if (val[col] != 0) newrow[col] = val[col] / leadval;
      val[col] = 0;
    }
    int rid = static_cast<int>(pivot_rows.size());
    pivot_rows.push_back(std::move(newrow));
    pivot_of_col[lead] = rid;
    // The lead column was free until now: clear it from older pivot rows.
    auto it = col_to_rows.find(lead);
    if (it != col_to_rows.end()) {
      for (int other : it->second) {
        auto entry = pivot_rows[other].find(lead);
        if (entry == pivot_rows[other].end() || entry->second == 0) continue;
        Rational factor = entry->second;
        for (auto& [c2, v2] : pivot_rows[rid]) {
          if (c2 == lead) continue;
          Rational& slot = pivot_rows[other][c2];
          bool was_zero = (slot == 0);
          slot -= factor * v2;
          if (was_zero && slot != 0) col_to_rows[c2].push_back(other);
        }
        pivot_rows[other].erase(entry);
      }
      col_to_rows.erase(it);
    }
    for (auto& [c2, v2] : pivot_rows[rid]) {
      if (c2 != lead) col_to_rows[c2].push_back(rid);
    }
  };

  std::vector<std::pair<int, Rational>> row;
  for (int j = 1; j < matroid_.n(); j++) {
    for (const ChainMonomial& m : below.monos) {
      row.clear();
      std::map<int, Rational> acc;
      for (int fid = 0; fid < nflats; fid++) {
        bool has0 = (flats[fid].mask & 1) != 0;
        bool hasj = (flats[fid].mask & (Subset(1) << j)) != 0;
        if (has0 == hasj) continue;
        ChainMonomial single{{{fid, 1}}};
        auto merged = merge(m, single);
        if (!merged) continue;
        auto it = slice.id_of.find(encode(*merged));
        if (it == slice.id_of.end()) {
          throw Error(ErrorCode::Internal, "merged monomial missing");
        }
        acc[it->second] += has0 ? 1 : -1;
      }
      for (auto& [col, c] : acc) {
        if (c != 0) row.push_back({col, c});
      }
      if (!row.empty()) insert_row(row);
    }
  }

  slice.basis_pos.assign(ncols, -1);
  for (int col = 0; col < ncols; col++) {
    if (pivot_of_col[col] < 0) {
      slice.basis_pos[col] = static_cast<int>(slice.basis_cols.size());
      slice.basis_cols.push_back(col);
    }
  }
  slice.nf.resize(ncols);
  for (int col = 0; col < ncols; col++) {
    int pr = pivot_of_col[col];
    if (pr < 0) continue;
    for (auto& [c2, v2] : pivot_rows[pr]) {
      if (c2 == col || v2 == 0) continue;
      if (slice.basis_pos[c2] < 0) {
        throw Error(ErrorCode::Internal, "pivot row not fully reduced");
      }
      slice.nf[col].push_back({slice.basis_pos[c2], -v2});
    }
  }
}

void ChowRing::build_degree_map() {
  int top = top_degree();
  if (dim(top) != 1) {
    throw Error(ErrorCode::Internal,
                "top graded piece has dimension " + std::to_string(dim(top)));
  }
  if (top == 0) {
    top_basis_degree_ = 1;
    return;
  }
  // Complete flags: one flat of each rank 1..r-1. All their monomials must
  // share a normal form, which is the image of 1 under the degree map.
  std::vector<int> chain;
  bool have = false;
  std::vector<std::pair<int, Rational>> reference;
  auto dfs = [&](auto&& self, int depth) -> void {
    if (depth == top) {
      ChainMonomial mono;
      for (int id : chain) mono.factors.push_back({id, 1});
      auto it = slices_[top].id_of.find(encode(mono));
      if (it == slices_[top].id_of.end()) {
        throw Error(ErrorCode::Internal, "complete flag monomial missing");
      }
      auto nf = column_nf(top, it->second);
      if (!have) {
        reference.assign(nf.begin(), nf.end());
        have = true;
      } else if (!std::equal(reference.begin(), reference.end(), nf.begin(),
                             nf.end(),
                             [](auto& a, auto& b) { return a == b; })) {
        throw Error(ErrorCode::Internal,
                    "complete flag monomials disagree in the top degree");
      }
      return;
    }
    const auto& flats = matroid_.proper_flats();
    for (int id = 0; id < static_cast<int>(flats.size()); id++) {
      if (flats[id].rank != depth + 1) continue;
      if (depth > 0 &&
          !subset_le(flats[chain[depth - 1]].mask, flats[id].mask)) {
        continue;
      }
      chain.push_back(id);
      self(self, depth + 1);
      chain.pop_back();
    }
  };
  dfs(dfs, 0);
  if (!have || reference.size() != 1) {
    throw Error(ErrorCode::Internal, "no complete flag normal form");
  }
  // Normalization: every complete flag monomial has degree one.
  top_basis_degree_ = Rational(1) / reference[0].second;
}

// ---------------------------------------------------------------------------
// Accessors

int ChowRing::dim(int d) const {
  if (d < 0 || d > top_degree()) return 0;
  return static_cast<int>(slices_[d].basis_cols.size());
}

std::vector<Integer> ChowRing::graded_dims() const {
  std::vector<Integer> out;
  for (int d = 0; d <= top_degree(); d++) out.push_back(dim(d));
  return out;
}

int ChowRing::universe_size(int d) const {
  if (d < 0 || d > top_degree()) return 0;
  return static_cast<int>(slices_[d].monos.size());
}

const ChainMonomial& ChowRing::universe_monomial(int d, int col) const {
  return slices_[d].monos[col];
}

const std::vector<int>& ChowRing::basis_columns(int d) const {
  return slices_[d].basis_cols;
}

const ChainMonomial& ChowRing::basis_monomial(int d, int i) const {
  return slices_[d].monos[slices_[d].basis_cols[i]];
}

const std::vector<std::pair<int, Rational>>& ChowRing::column_nf(
    int d, int col) const {
  const DegreeSlice& slice = slices_[d];
  if (slice.basis_pos[col] >= 0) {
    // Unit normal form, materialized on demand.
    static thread_local std::vector<std::pair<int, Rational>> unit;
    unit.assign(1, {slice.basis_pos[col], Rational(1)});
    return unit;
  }
  return slice.nf[col];
}

// ---------------------------------------------------------------------------
// Elements

void ChowRing::check_ring(const ChowElement& a) const {
  if (a.ring() != this) {
    throw Error(ErrorCode::Internal, "element belongs to a different ring");
  }
}

ChowElement ChowRing::zero() const {
  ChowElement out;
  out.ring_ = this;
  out.comps_.resize(top_degree() + 1);
  for (int d = 0; d <= top_degree(); d++) {
    out.comps_[d].assign(dim(d), Rational(0));
  }
  return out;
}

ChowElement ChowRing::one() const { return scalar(1); }

ChowElement ChowRing::scalar(const Rational& c) const {
  ChowElement out = zero();
  out.comps_[0][0] = c;
  return out;
}

ChowElement ChowRing::x(Subset flat) const {
  auto id = matroid_.proper_flat_id(flat);
  if (!id) {
    throw Error(ErrorCode::NotAFlat,
                subset_to_string(flat) + " is not a proper nonempty flat");
  }
  return reduce_product({{flat, 1}});
}

ChowElement ChowRing::element_from_x_coeffs(
    const std::vector<Rational>& coeffs) const {
  ChowElement out = zero();
  if (top_degree() < 1) return out;
  const auto& flats = matroid_.proper_flats();
  for (size_t fid = 0; fid < flats.size(); fid++) {
    if (coeffs[fid] == 0) continue;
    ChainMonomial mono{{{static_cast<int>(fid), 1}}};
    auto it = slices_[1].id_of.find(encode(mono));
    if (it == slices_[1].id_of.end()) {
      throw Error(ErrorCode::Internal, "missing degree-1 monomial");
    }
    for (auto& [pos, v] : column_nf(1, it->second)) {
      out.comps_[1][pos] += coeffs[fid] * v;
    }
  }
  return out;
}

DivisorClass ChowRing::divisor_zero() const {
  DivisorClass d;
  d.ring = this;
  d.coeffs.assign(matroid_.proper_flats().size(), Rational(0));
  return d;
}

DivisorClass ChowRing::divisor_x(Subset flat) const {
  auto id = matroid_.proper_flat_id(flat);
  if (!id) {
    throw Error(ErrorCode::NotAFlat,
                subset_to_string(flat) + " is not a proper nonempty flat");
  }
  DivisorClass d = divisor_zero();
  d.coeffs[*id] = 1;
  return d;
}

DivisorClass ChowRing::divisor_alpha() const {
  // Representative: flats containing the first element.
  DivisorClass d = divisor_zero();
  const auto& flats = matroid_.proper_flats();
  for (size_t fid = 0; fid < flats.size(); fid++) {
    if (flats[fid].mask & 1) d.coeffs[fid] = 1;
  }
  return d;
}

DivisorClass ChowRing::divisor_beta() const {
  DivisorClass d = divisor_zero();
  const auto& flats = matroid_.proper_flats();
  for (size_t fid = 0; fid < flats.size(); fid++) {
    if (!(flats[fid].mask & 1)) d.coeffs[fid] = 1;
  }
  return d;
}

DivisorClass ChowRing::divisor_alpha_S(Subset s) const {
  if (s == 0 || s > full_set(matroid_.n())) {
    throw Error(ErrorCode::Parse, "alpha_S needs a nonempty subset of E");
  }
  DivisorClass d = divisor_alpha();
  const auto& flats = matroid_.proper_flats();
  for (size_t fid = 0; fid < flats.size(); fid++) {
    if (subset_le(s, flats[fid].mask)) d.coeffs[fid] -= 1;
  }
  return d;
}

DivisorClass ChowRing::divisor_beta_S(Subset s) const {
  if (s == 0 || s > full_set(matroid_.n())) {
    throw Error(ErrorCode::Parse, "beta_S needs a nonempty subset of E");
  }
  Subset complement = full_set(matroid_.n()) & ~s;
  DivisorClass d = divisor_beta();
  const auto& flats = matroid_.proper_flats();
  for (size_t fid = 0; fid < flats.size(); fid++) {
    if (subset_le(flats[fid].mask, complement)) d.coeffs[fid] -= 1;
  }
  return d;
}

DivisorClass ChowRing::divisor_S_k(int k) const {
  int r = matroid_.rank();
  if (k <= 0 || k >= r) {
    throw Error(ErrorCode::Rank,
                "S_k needs 0 < k < rank, got k=" + std::to_string(k));
  }
  DivisorClass d = divisor_zero();
  const auto& flats = matroid_.proper_flats();
  for (size_t fid = 0; fid < flats.size(); fid++) {
    if (flats[fid].rank == r - k) d.coeffs[fid] = 1;
  }
  return d;
}

ChowElement ChowRing::alpha() const { return element_of(divisor_alpha()); }
ChowElement ChowRing::beta() const { return element_of(divisor_beta()); }
ChowElement ChowRing::alpha_S(Subset s) const {
  return element_of(divisor_alpha_S(s));
}
ChowElement ChowRing::beta_S(Subset s) const {
  return element_of(divisor_beta_S(s));
}
ChowElement ChowRing::S_k(int k) const { return element_of(divisor_S_k(k)); }

ChowElement ChowRing::element_of(const DivisorClass& d) const {
  if (d.ring != this) {
    throw Error(ErrorCode::Internal, "divisor belongs to a different ring");
  }
  return element_from_x_coeffs(d.coeffs);
}

bool ChowRing::divisors_equal(const DivisorClass& a,
                              const DivisorClass& b) const {
  return element_of(a) == element_of(b);
}

const std::vector<std::vector<Rational>>& ChowRing::mobius() const {
  if (!mobius_.empty()) return mobius_;
  const auto& flats = matroid_.proper_flats();
  int nf = static_cast<int>(flats.size());
  mobius_.assign(nf, std::vector<Rational>(nf, Rational(0)));
  for (int f = 0; f < nf; f++) {
    mobius_[f][f] = 1;
    for (int g = f + 1; g < nf; g++) {
      if (!subset_le(flats[f].mask, flats[g].mask)) continue;
      Rational sum = 0;
      for (int h = f; h < g; h++) {
        if (subset_le(flats[f].mask, flats[h].mask) &&
            subset_le(flats[h].mask, flats[g].mask)) {
          sum += mobius_[f][h];
        }
      }
      mobius_[f][g] = -sum;
    }
  }
  return mobius_;
}

AlphaExpr ChowRing::alpha_expression(const DivisorClass& d) const {
  if (d.ring != this) {
    throw Error(ErrorCode::Internal, "divisor belongs to a different ring");
  }
  // x_F = sum_{flats G >= F} mu(F,G) (alpha - alpha_G); Mobius inversion of
  // alpha - alpha_F = sum_{proper flats G >= F} x_G.
  const auto& mu = mobius();
  int nf = static_cast<int>(d.coeffs.size());
  AlphaExpr out;
  out.alpha_coeff = 0;
  out.flat_coeffs.assign(nf, Rational(0));
  for (int f = 0; f < nf; f++) {
    if (d.coeffs[f] == 0) continue;
    for (int g = f; g < nf; g++) {
      if (mu[f][g] == 0) continue;
      Rational w = d.coeffs[f] * mu[f][g];
      out.alpha_coeff += w;
      out.flat_coeffs[g] -= w;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Products

std::optional<ChainMonomial> ChowRing::merge(const ChainMonomial& a,
                                             const ChainMonomial& b) const {
  const auto& flats = matroid_.proper_flats();
  ChainMonomial out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    std::pair<int, int> next;
    if (j >= b.factors.size() ||
        (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
      next = a.factors[i++];
    } else if (i >= a.factors.size() ||
               b.factors[j].first < a.factors[i].first) {
      next = b.factors[j++];
    } else {
      next = {a.factors[i].first, a.factors[i].second + b.factors[j].second};
      i++;
      j++;
    }
    if (!out.factors.empty()) {
      Subset prev = flats[out.factors.back().first].mask;
      Subset cur = flats[next.first].mask;
      if (!subset_le(prev, cur) || prev == cur) return std::nullopt;
    }
    out.factors.push_back(next);
  }
  return out;
}

ChowElement ChowRing::reduce_product(
    const std::vector<std::pair<Subset, int>>& factors) const {
  std::vector<std::pair<int, int>> ids;
  int total = 0;
  for (auto& [mask, e] : factors) {
    if (e < 0) {
      throw Error(ErrorCode::Parse, "negative exponent");
    }
    if (e == 0) continue;
    auto id = matroid_.proper_flat_id(mask);
    if (!id) {
      throw Error(ErrorCode::NotAFlat,
                  subset_to_string(mask) + " is not a proper nonempty flat");
    }
    ids.push_back({*id, e});
    total += e;
  }
  if (total > top_degree()) return zero();
  std::sort(ids.begin(), ids.end());
  ChainMonomial mono;
  for (auto& [id, e] : ids) {
    if (!mono.factors.empty()) {
      if (mono.factors.back().first == id) {
        mono.factors.back().second += e;
        continue;
      }
      Subset prev = matroid_.proper_flats()[mono.factors.back().first].mask;
      Subset cur = matroid_.proper_flats()[id].mask;
      if (!subset_le(prev, cur)) return zero();
    }
    mono.factors.push_back({id, e});
  }
  auto it = slices_[total].id_of.find(encode(mono));
  if (it == slices_[total].id_of.end()) {
    throw Error(ErrorCode::Internal, "chain monomial missing from universe");
  }
  ChowElement out = zero();
  for (auto& [pos, v] : column_nf(total, it->second)) {
    out.comps_[total][pos] += v;
  }
  return out;
}

ChowElement ChowRing::multiply(const ChowElement& a,
                               const ChowElement& b) const {
  check_ring(a);
  check_ring(b);
  int top = top_degree();
  ChowElement out = zero();
  for (int da = 0; da <= top; da++) {
    bool a_nonzero = false;
    for (const Rational& c : a.comps_[da]) {
      if (c != 0) {
        a_nonzero = true;
        break;
      }
    }
    if (!a_nonzero) continue;
    for (int db = 0; db + da <= top; db++) {
      int target = da + db;
      if (da == 0) {
        const Rational& c = a.comps_[0][0];
        for (int i = 0; i < dim(db); i++) {
          out.comps_[target][i] += c * b.comps_[db][i];
        }
        continue;
      }
      if (db == 0) {
        const Rational& c = b.comps_[0][0];
        for (int i = 0; i < dim(da); i++) {
          out.comps_[target][i] += c * a.comps_[da][i];
        }
        continue;
      }
      // Orient so the degree-1 factor (if any) is on the right for caching.
      const std::vector<Rational>* left = &a.comps_[da];
      const std::vector<Rational>* right = &b.comps_[db];
      int dl = da, dr = db;
      if (da == 1 && db != 1) {
        std::swap(left, right);
        std::swap(dl, dr);
      }
      for (int il = 0; il < dim(dl); il++) {
        if ((*left)[il] == 0) continue;
        for (int ir = 0; ir < dim(dr); ir++) {
          if ((*right)[ir] == 0) continue;
          Rational coeff = (*left)[il] * (*right)[ir];
          if (dr == 1) {
            uint64_t key = (uint64_t(dl) << 42) | (uint64_t(il) << 21) |
                           uint64_t(ir);
            auto it = mult_cache_.find(key);
            if (it == mult_cache_.end()) {
              std::vector<std::pair<int, Rational>> nfrow;
              auto merged =
                  merge(basis_monomial(dl, il), basis_monomial(1, ir));
              if (merged) {
                auto lookup = slices_[target].id_of.find(encode(*merged));
                if (lookup == slices_[target].id_of.end()) {
                  throw Error(ErrorCode::Internal, "product monomial missing");
                }
                const auto& nf = column_nf(target, lookup->second);
                nfrow.assign(nf.begin(), nf.end());
              }
              it = mult_cache_.emplace(key, std::move(nfrow)).first;
            }
            for (auto& [pos, v] : it->second) {
              out.comps_[target][pos] += coeff * v;
            }
          } else {
            auto merged = merge(basis_monomial(dl, il), basis_monomial(dr, ir));
            if (!merged) continue;
            auto lookup = slices_[target].id_of.find(encode(*merged));
            if (lookup == slices_[target].id_of.end()) {
              throw Error(ErrorCode::Internal, "product monomial missing");
            }
            for (auto& [pos, v] : column_nf(target, lookup->second)) {
              out.comps_[target][pos] += coeff * v;
            }
          }
        }
      }
    }
  }
  return out;
}

ChowElement ChowRing::pow(const ChowElement& a, int k) const {
  check_ring(a);
  if (k < 0) throw Error(ErrorCode::Parse, "negative power");
  ChowElement out = one();
  for (int i = 0; i < k; i++) out = multiply(out, a);
  return out;
}

ChowElement ChowRing::exp(const ChowElement& a) const {
  check_ring(a);
  if (a.comps_[0][0] != 0) {
    throw Error(ErrorCode::Parse, "exp needs vanishing degree-0 part");
  }
  ChowElement out = one();
  ChowElement power = one();
  Rational fact = 1;
  for (int k = 1; k <= top_degree(); k++) {
    power = multiply(power, a);
    fact *= k;
    out += power * (Rational(1) / fact);
  }
  return out;
}

ChowElement ChowRing::invert_unit(const ChowElement& a) const {
  check_ring(a);
  const Rational& c = a.comps_[0][0];
  if (c == 0) {
    throw Error(ErrorCode::Parse, "cannot invert: degree-0 part vanishes");
  }
  // a = c (1 - m) with m of positive degree; a^{-1} = (1/c) sum m^k.
  ChowElement m = (a * (Rational(-1) / c));
  m.comps_[0][0] = 0;
  ChowElement out = one();
  ChowElement power = one();
  for (int k = 1; k <= top_degree(); k++) {
    power = multiply(power, m);
    out += power;
  }
  return out * (Rational(1) / c);
}

// ---------------------------------------------------------------------------
// Degree map

Rational ChowRing::degree(const ChowElement& a) const {
  check_ring(a);
  if (!a.is_homogeneous(top_degree())) {
    throw Error(ErrorCode::Rank,
                "degree needs a homogeneous top-degree element");
  }
  return degree_top(a);
}

Rational ChowRing::degree_top(const ChowElement& a) const {
  check_ring(a);
  return a.comps_[top_degree()][0] * top_basis_degree_;
}

std::vector<std::vector<Rational>> ChowRing::pairing_matrix(int d) const {
  int top = top_degree();
  if (d < 0 || d > top) {
    throw Error(ErrorCode::Rank, "pairing degree out of range");
  }
  int e = top - d;
  std::vector<std::vector<Rational>> out(
      dim(d), std::vector<Rational>(dim(e), Rational(0)));
  for (int i = 0; i < dim(d); i++) {
    for (int j = 0; j < dim(e); j++) {
      auto merged = merge(basis_monomial(d, i), basis_monomial(e, j));
      if (!merged) continue;
      auto it = slices_[top].id_of.find(encode(*merged));
      if (it == slices_[top].id_of.end()) {
        throw Error(ErrorCode::Internal, "pairing monomial missing");
      }
      const auto& nf = column_nf(top, it->second);
      if (!nf.empty()) out[i][j] = nf[0].second * top_basis_degree_;
    }
  }
  return out;
}

std::string ChowRing::monomial_to_string(const ChainMonomial& m) const {
  if (m.factors.empty()) return "1";
  std::ostringstream oss;
  bool first = true;
  for (auto& [id, e] : m.factors) {
    if (!first) oss << "*";
    oss << "x" << subset_to_string(matroid_.proper_flats()[id].mask) << "^"
        << e;
    first = false;
  }
  return oss.str();
}

const ChowElement& ChowRing::alpha_power(int k) const {
  if (alpha_powers_.empty()) {
    alpha_powers_.push_back(one());
  }
  while (static_cast<int>(alpha_powers_.size()) <= k) {
    alpha_powers_.push_back(
        multiply(alpha_powers_.back(), alpha()));
  }
  return alpha_powers_[k];
}

const ChowElement& ChowRing::alpha_flat_power(int flat_id, int k) const {
  uint64_t key = (uint64_t(flat_id) << 8) | uint64_t(k);
  auto it = alpha_flat_powers_.find(key);
  if (it != alpha_flat_powers_.end()) return it->second;
  ChowElement value = zero();
  if (k == 0) {
    value = one();
  } else if (k == 1) {
    value = alpha_S(matroid_.proper_flats()[flat_id].mask);
  } else {
    value = multiply(alpha_flat_power(flat_id, k - 1),
                     alpha_flat_power(flat_id, 1));
  }
  return alpha_flat_powers_.emplace(key, std::move(value)).first->second;
}

// ---------------------------------------------------------------------------
// Recursive degree

Integer degree_recursive(const Matroid& m, int beta_exp,
                         const std::vector<std::pair<Subset, int>>& chain,
                         int alpha_exp) {
  int r = m.rank();
  if (beta_exp < 0 || alpha_exp < 0) {
    throw Error(ErrorCode::Parse, "negative exponent");
  }
  int total = beta_exp + alpha_exp;
  for (size_t i = 0; i < chain.size(); i++) {
    auto& [mask, e] = chain[i];
    if (e < 1) throw Error(ErrorCode::Parse, "chain exponents must be >= 1");
    if (!m.is_proper_nonempty_flat(mask)) {
      throw Error(ErrorCode::NotAFlat,
                  subset_to_string(mask) + " is not a proper nonempty flat");
    }
    if (i > 0 && !(subset_le(chain[i - 1].first, mask) &&
                   chain[i - 1].first != mask)) {
      throw Error(ErrorCode::Parse, "chain must be strictly nested");
    }
    total += e;
  }
  if (total != r - 1) {
    throw Error(ErrorCode::Rank, "monomial degree must equal rank-1");
  }

  if (chain.empty()) {
    // deg(alpha^{r-1-d} beta^d) as an alternating flag-count sum.
    int d = beta_exp;
    Integer sum = 0;
    for (uint32_t mask = 0; mask < (uint32_t(1) << d); mask++) {
      std::vector<int> ranks;
      for (int k = 1; k <= d; k++) {
        if (mask & (uint32_t(1) << (k - 1))) ranks.push_back(k);
      }
      Integer term = m.count_flags({}, ranks);
      sum += (std::popcount(mask) % 2 == 0) ? term : -term;
    }
    return (d % 2 == 0) ? sum : -sum;
  }

  auto [f1, d1] = chain[0];
  int r1 = m.rank_of(f1);
  int t = beta_exp + d1 - r1;
  if (t < 0 || t > d1 - 1) return 0;

  Minor rest = m.restriction(f1);
  Integer right =
      degree_recursive(*rest.matroid(), beta_exp, {}, r1 - 1 - beta_exp);

  Minor contr = m.contraction(f1);
  std::vector<std::pair<Subset, int>> tail;
  for (size_t i = 1; i < chain.size(); i++) {
    tail.push_back({contr.compress(chain[i].first), chain[i].second});
  }
  Integer left = degree_recursive(*contr.matroid(), t, tail, alpha_exp);

  Integer coeff = binomial(d1 - 1, t);
  if ((d1 - 1) % 2 != 0) coeff = -coeff;
  return coeff * right * left;
}

}  // namespace chowforge
