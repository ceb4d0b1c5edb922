#include "chowforge/error.hpp"
#include "chowforge/rational.hpp"
#include "chowforge/subset.hpp"

#include <cctype>
#include <sstream>

namespace chowforge {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "PARSE";
    case ErrorCode::Capacity: return "CAPACITY";
    case ErrorCode::NotAFlat: return "NOT_A_FLAT";
    case ErrorCode::Rank: return "RANK";
    case ErrorCode::InfeasiblePrecondition: return "INFEASIBLE_PRECONDITION";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "INTERNAL";
}

Integer to_integer(const Rational& q) {
  if (!is_integral(q)) {
    throw Error(ErrorCode::Internal,
                "expected integral value, got " + rational_to_string(q));
  }
  return numerator(q);
}

std::string rational_to_string(const Rational& q) {
  std::string num = numerator(q).str();
  Integer den = denominator(q);
  if (den == 1) return num;
  return num + "/" + den.str();
}

Rational rational_from_string(std::string_view text) {
  auto fail = [&] {
    throw Error(ErrorCode::Parse,
                "invalid rational '" + std::string(text) + "'");
  };
  if (text.empty()) fail();
  size_t i = 0;
  if (text[i] == '+' || text[i] == '-') i++;
  size_t digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    i++;
    digits++;
  }
  if (digits == 0) fail();
  std::string num(text.substr(0, i));
  std::string den = "1";
  if (i < text.size()) {
    if (text[i] != '/') fail();
    i++;
    size_t start = i;
    while (i < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[i]))) {
      i++;
    }
    if (i == start || i != text.size()) fail();
    den = std::string(text.substr(start));
    if (Integer(den) == 0) fail();
  }
  return Rational(Integer(num), Integer(den));
}

Integer binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  Integer result = 1;
  for (long i = 0; i < k; i++) {
    result *= (n - i);
    result /= (i + 1);
  }
  return result;
}

Integer factorial(long n) {
  Integer result = 1;
  for (long i = 2; i <= n; i++) result *= i;
  return result;
}

std::vector<int> subset_elements(Subset s) {
  std::vector<int> out;
  while (s) {
    int e = std::countr_zero(s);
    out.push_back(e);
    s &= s - 1;
  }
  return out;
}

std::string subset_to_string(Subset s) {
  std::ostringstream oss;
  oss << "{";
  bool first = true;
  for (int e : subset_elements(s)) {
    if (!first) oss << ",";
    oss << (e + 1);
    first = false;
  }
  oss << "}";
  return oss.str();
}

Subset subset_from_elements(const std::vector<int>& elements_1based, int n) {
  Subset s = 0;
  for (int e : elements_1based) {
    if (e < 1 || e > n) {
      throw Error(ErrorCode::Parse, "element " + std::to_string(e) +
                                        " outside ground set of size " +
                                        std::to_string(n));
    }
    Subset bit = Subset(1) << (e - 1);
    if (s & bit) {
      throw Error(ErrorCode::Parse,
                  "duplicate element " + std::to_string(e) + " in subset");
    }
    s |= bit;
  }
  return s;
}

Subset compress_subset(Subset s, Subset within) {
  Subset out = 0;
  int pos = 0;
  while (within) {
    int e = std::countr_zero(within);
    if (s & (Subset(1) << e)) out |= Subset(1) << pos;
    pos++;
    within &= within - 1;
  }
  return out;
}

Subset uncompress_subset(Subset compressed, Subset within) {
  Subset out = 0;
  int pos = 0;
  while (within) {
    int e = std::countr_zero(within);
    if (compressed & (Subset(1) << pos)) out |= Subset(1) << e;
    pos++;
    within &= within - 1;
  }
  return out;
}

}  // namespace chowforge
