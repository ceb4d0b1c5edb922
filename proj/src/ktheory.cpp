#include "chowforge/ktheory.hpp"

namespace chowforge {

namespace {

// Multiplicative inverse of a power series with constant term 1.
std::vector<Rational> series_inverse(const std::vector<Rational>& a) {
  std::vector<Rational> out(a.size(), Rational(0));
  out[0] = 1;
  for (size_t k = 1; k < a.size(); k++) {
    Rational acc = 0;
    for (size_t i = 1; i <= k; i++) acc += a[i] * out[k - i];
    out[k] = -acc;
  }
  return out;
}

// log of a power series with constant term 1, via f'/f.
std::vector<Rational> series_log(const std::vector<Rational>& a) {
  std::vector<Rational> out(a.size(), Rational(0));
  const std::vector<Rational> inv = series_inverse(a);
  // (log a)' = a'/a; integrate term by term.
  for (size_t k = 1; k < a.size(); k++) {
    Rational deriv = 0;
    for (size_t i = 1; i <= k; i++) deriv += Rational(i) * a[i] * inv[k - i];
    out[k] = deriv / Rational(k);
  }
  return out;
}

}  // namespace

std::vector<Rational> todd_series(int len) {
  // (1 - e^{-x}) / x has coefficients (-1)^k / (k+1)!.
  std::vector<Rational> a(len, Rational(0));
  for (int k = 0; k < len; k++) {
    Rational c = Rational(1) / Rational(factorial(k + 1));
    a[k] = (k % 2 == 0) ? c : -c;
  }
  return series_inverse(a);
}

std::vector<Rational> todd_log_series(int len) {
  return series_log(todd_series(len));
}

// ---------------------------------------------------------------------------

ChowElement KTheory::eval_series(const std::vector<Rational>& coeffs,
                                 const ChowElement& z) const {
  ChowElement out = ring_->scalar(coeffs.empty() ? Rational(0) : coeffs[0]);
  ChowElement power = ring_->one();
  for (size_t k = 1; k < coeffs.size(); k++) {
    power = ring_->multiply(power, z);
    if (coeffs[k] != 0) out += power * coeffs[k];
  }
  return out;
}

ChowElement KTheory::ch_line(const DivisorClass& d) const {
  return ring_->exp(ring_->element_of(d));
}

ChowElement KTheory::tensor(const ChowElement& a, const ChowElement& b) const {
  return ring_->multiply(a, b);
}

ChowElement KTheory::dual(const ChowElement& a) const {
  return a.alternate_signs();
}

ChowElement KTheory::adams(int j, const ChowElement& a) const {
  if (j < 1) throw Error(ErrorCode::Parse, "Adams index must be positive");
  ChowElement out = ring_->zero();
  Rational scale = 1;
  for (int d = 0; d <= ring_->top_degree(); d++) {
    out += a.graded_part(d) * scale;
    scale *= j;
  }
  return out;
}

ChowElement KTheory::exterior_power(int p, const ChowElement& a) const {
  if (p < 0) throw Error(ErrorCode::Parse, "exterior power must be >= 0");
  std::vector<ChowElement> lam = {ring_->one()};
  for (int q = 1; q <= p; q++) {
    ChowElement acc = ring_->zero();
    for (int j = 1; j <= q; j++) {
      ChowElement term = ring_->multiply(lam[q - j], adams(j, a));
      acc += (j % 2 == 1) ? term : -term;
    }
    lam.push_back(acc * Rational(1, q));
  }
  return lam[p];
}

ChowElement KTheory::ch_of(const ChernData& c) const {
  if (c.total.ring() != ring_) {
    throw Error(ErrorCode::Internal, "Chern class from a different ring");
  }
  if (!(c.total.graded_part(0) == ring_->one())) {
    throw Error(ErrorCode::Parse, "total Chern class must start at 1");
  }
  int top = ring_->top_degree();
  std::vector<ChowElement> e, p;
  e.push_back(ring_->one());
  for (int k = 1; k <= top; k++) e.push_back(c.total.graded_part(k));
  p.push_back(ring_->zero());
  ChowElement ch = ring_->scalar(c.rank);
  Rational fact = 1;
  for (int k = 1; k <= top; k++) {
    ChowElement pk = e[k] * Rational((k % 2 == 1) ? k : -k);
    for (int i = 1; i < k; i++) {
      ChowElement term = ring_->multiply(e[i], p[k - i]);
      pk += (i % 2 == 1) ? term : -term;
    }
    p.push_back(pk);
    fact *= k;
    ch += pk * (Rational(1) / fact);
  }
  return ch;
}

ChernData KTheory::chern_tangent() const {
  int r = ring_->matroid().rank();
  ChowElement total = ring_->one();
  for (int i = 1; i < r; i++) {
    total = ring_->multiply(total, ring_->one() + ring_->S_k(i));
  }
  ChowElement partial = ring_->alpha();
  total = ring_->multiply(total, ring_->one() + partial);
  for (int i = 1; i < r; i++) {
    partial -= ring_->S_k(i);
    total = ring_->multiply(total, ring_->one() + partial);
  }
  return {r - 1, total};
}

ChernData KTheory::chern_tangent_recursive() const {
  int r = ring_->matroid().rank();
  ChowElement x = ring_->alpha();
  std::vector<ChowElement> y = {ring_->zero()};  // y[j] = S_j
  for (int j = 1; j <= r - 2; j++) y.push_back(ring_->S_k(j));

  std::vector<ChowElement> T;
  for (int n = 0; n <= r - 1; n++) {
    ChowElement tn = ring_->pow(ring_->one() + x, n + 1);
    for (int j = 1; j <= n - 1; j++) {
      ChowElement shifted = x;
      for (int k = 1; k < j; k++) shifted -= y[k];
      for (int i = 0; i <= n + 1 - j; i++) {
        ChowElement bracket = ring_->multiply(
            ring_->one() + y[j], ring_->pow(ring_->one() - y[j], i));
        bracket -= ring_->one();
        ChowElement term = ring_->multiply(T[j - 1], bracket);
        term = ring_->multiply(term, ring_->pow(shifted, n + 1 - i - j));
        tn += term * Rational(binomial(n + 1 - j, i));
      }
    }
    T.push_back(tn);
  }
  return {r - 1, T[r - 1]};
}

ChernData KTheory::chern_quotient() const {
  const Matroid& m = ring_->matroid();
  int r = m.rank();
  ChowElement total = ring_->invert_unit(ring_->one() + ring_->alpha());
  ChowElement partial = ring_->alpha();
  for (int i = 1; i < r; i++) {
    partial -= ring_->S_k(i);
    total = ring_->multiply(total,
                            ring_->invert_unit(ring_->one() + partial));
  }
  return {m.n() - r, total};
}

ChowElement KTheory::todd_of_ch(const ChowElement& ch) const {
  int top = ring_->top_degree();
  std::vector<Rational> g = todd_log_series(top + 1);
  ChowElement w = ring_->zero();
  Rational fact = 1;
  for (int m = 1; m <= top; m++) {
    fact *= m;
    w += ch.graded_part(m) * (g[m] * fact);
  }
  return ring_->exp(w);
}

const ChowElement& KTheory::todd_tangent() const {
  if (todd_) return *todd_;
  int r = ring_->matroid().rank();
  ChowElement via_newton = todd_of_ch(ch_of(chern_tangent()));

  std::vector<Rational> q = todd_series(ring_->top_degree() + 1);
  ChowElement via_roots = ring_->one();
  for (int i = 1; i < r; i++) {
    via_roots = ring_->multiply(via_roots, eval_series(q, ring_->S_k(i)));
  }
  ChowElement partial = ring_->alpha();
  via_roots = ring_->multiply(via_roots, eval_series(q, partial));
  for (int i = 1; i < r; i++) {
    partial -= ring_->S_k(i);
    via_roots = ring_->multiply(via_roots, eval_series(q, partial));
  }

  if (!(via_newton == via_roots)) {
    throw Error(ErrorCode::Internal,
                "Todd class mismatch between series and root product");
  }
  todd_ = via_newton;
  return *todd_;
}

ChowElement KTheory::zeta(const DivisorClass& d) const {
  AlphaExpr e = ring_->alpha_expression(d);
  if (!e.is_integral()) {
    throw Error(ErrorCode::InfeasiblePrecondition,
                "zeta needs an integral divisor class");
  }
  int top = ring_->top_degree();
  ChowElement w = ring_->zero();
  for (int j = 1; j <= top; j++) {
    Rational inv_j(1, j);
    if (e.alpha_coeff != 0) {
      w += ring_->alpha_power(j) * (e.alpha_coeff * inv_j);
    }
    for (size_t f = 0; f < e.flat_coeffs.size(); f++) {
      if (e.flat_coeffs[f] == 0) continue;
      w += ring_->alpha_flat_power(static_cast<int>(f), j) *
           (e.flat_coeffs[f] * inv_j);
    }
  }
  return ring_->exp(w);
}

Rational KTheory::chi_zeta(const DivisorClass& d) const {
  ChowElement acc = zeta(d);
  ChowElement geom = ring_->zero();
  for (int k = 0; k <= ring_->top_degree(); k++) {
    geom += ring_->alpha_power(k);
  }
  return ring_->degree_top(ring_->multiply(acc, geom));
}

Rational KTheory::chi_hrr(const ChowElement& ch) const {
  return ring_->degree_top(ring_->multiply(ch, todd_tangent()));
}

Rational KTheory::chi_hrr_line(const DivisorClass& d) const {
  return chi_hrr(ch_line(d));
}

DivisorClass KTheory::canonical_divisor() const {
  int r = ring_->matroid().rank();
  DivisorClass out = ring_->divisor_alpha() * Rational(-r);
  for (int i = 1; i <= r - 2; i++) {
    out = out + ring_->divisor_S_k(i) * Rational(r - i - 1);
  }
  return out;
}

std::vector<Integer> KTheory::chow_polynomial() const {
  ChowElement omega = dual(ch_of(chern_tangent()));
  std::vector<Integer> out;
  for (int p = 0; p <= ring_->top_degree(); p++) {
    Rational v = chi_hrr(exterior_power(p, omega));
    if (p % 2 == 1) v = -v;
    out.push_back(to_integer(v));
  }
  return out;
}

}  // namespace chowforge
