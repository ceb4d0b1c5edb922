#include "chowforge/io.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <iomanip>
#include <random>
#include <sstream>

#include "chowforge/identities.hpp"
#include "chowforge/ktheory.hpp"
#include "chowforge/version.hpp"

namespace chowforge::io {

namespace {

[[noreturn]] void parse_fail(const std::string& message) {
  throw Error(ErrorCode::Parse, message);
}

int int_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    parse_fail(std::string("matroid field '") + key +
               "' must be an integer");
  }
  return j[key].get<int>();
}

long long to_ll(const Integer& v) { return v.convert_to<long long>(); }

// Recursive-descent divisor expression parser.
struct DivisorParser {
  const std::string& text;
  const ChowRing& ring;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) {
    parse_fail(what + " at position " + std::to_string(pos + 1));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      pos++;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      pos++;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  Rational number() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      pos++;
    }
    if (pos == start) fail("expected a number");
    if (pos < text.size() && text[pos] == '/') {
      pos++;
      size_t dstart = pos;
      while (pos < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[pos]))) {
        pos++;
      }
      if (pos == dstart) fail("expected a denominator");
    }
    return rational_from_string(text.substr(start, pos - start));
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) {
      pos++;
    }
    if (pos == start) fail("expected a class name");
    return text.substr(start, pos - start);
  }

  // Brace-enclosed 1-based element list, already past '{'.
  Subset subset_body() {
    std::vector<int> elems;
    if (!eat('}')) {
      do {
        skip_ws();
        elems.push_back(static_cast<int>(to_integer(number()).convert_to<long>()));
      } while (eat(','));
      if (!eat('}')) fail("expected '}'");
    }
    size_t at = pos;
    try {
      return subset_from_elements(elems, ring.matroid().n());
    } catch (const Error&) {
      pos = at;
      fail("subset outside the ground set");
    }
  }

  DivisorClass atom() {
    std::string name = ident();
    bool underscore = eat('_');
    if (name == "S") {
      int k;
      if (eat('{')) {
        Rational v = number();
        if (!eat('}')) fail("expected '}'");
        k = static_cast<int>(to_integer(v).convert_to<long>());
      } else {
        k = static_cast<int>(to_integer(number()).convert_to<long>());
      }
      return ring.divisor_S_k(k);
    }
    if (name != "alpha" && name != "beta" && name != "x") {
      fail("unknown class '" + name + "'");
    }
    std::optional<Subset> sub;
    if (eat('{')) {
      sub = subset_body();
    } else if (peek() == 'E' && name != "x") {
      pos++;
      sub = full_set(ring.matroid().n());
    } else if (underscore) {
      fail("expected a subscript");
    }
    if (name == "x") {
      if (!sub) fail("x needs a flat subscript");
      if (!ring.matroid().is_proper_nonempty_flat(*sub)) {
        throw Error(ErrorCode::NotAFlat,
                    "not a proper nonempty flat: " + subset_to_string(*sub));
      }
      return ring.divisor_x(*sub);
    }
    if (name == "alpha") {
      return sub ? ring.divisor_alpha_S(*sub) : ring.divisor_alpha();
    }
    return sub ? ring.divisor_beta_S(*sub) : ring.divisor_beta();
  }

  DivisorClass factor() {
    if (eat('(')) {
      DivisorClass inner = expression();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    return atom();
  }

  DivisorClass term() {
    skip_ws();
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      Rational coeff = number();
      char c = peek();
      bool has_factor =
          c == '(' || c == '*' || std::isalpha(static_cast<unsigned char>(c));
      if (has_factor) {
        eat('*');
        return factor() * coeff;
      }
      if (coeff != 0) fail("number without a divisor class");
      return ring.divisor_zero();
    }
    return factor();
  }

  DivisorClass expression() {
    DivisorClass total = ring.divisor_zero();
    bool negate = false;
    if (eat('-')) {
      negate = true;
    } else {
      eat('+');
    }
    while (true) {
      DivisorClass t = term();
      total = negate ? total - t : total + t;
      skip_ws();
      if (eat('+')) {
        negate = false;
      } else if (eat('-')) {
        negate = true;
      } else {
        break;
      }
    }
    return total;
  }

  DivisorClass parse() {
    DivisorClass d = expression();
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input");
    return d;
  }
};

Json rational_json(const Rational& q) { return rational_to_string(q); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

Matroid matroid_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    parse_fail("matroid JSON must be an object with a 'type' string");
  }
  std::string type = j["type"].get<std::string>();
  if (type == "uniform") {
    return Matroid::uniform(int_field(j, "r"), int_field(j, "n"));
  }
  if (type == "boolean") {
    return Matroid::boolean(int_field(j, "n"));
  }
  if (type == "bases") {
    int n = int_field(j, "n");
    if (!j.contains("bases") || !j["bases"].is_array() || j["bases"].empty()) {
      parse_fail("bases matroid needs a nonempty 'bases' array");
    }
    std::vector<Subset> bases;
    for (const Json& b : j["bases"]) {
      if (!b.is_array()) parse_fail("each basis must be an element array");
      std::vector<int> elems;
      for (const Json& e : b) {
        if (!e.is_number_integer()) parse_fail("basis elements must be integers");
        elems.push_back(e.get<int>());
      }
      bases.push_back(subset_from_elements(elems, n));
    }
    return Matroid::from_bases(n, bases);
  }
  parse_fail("unknown matroid type '" + type + "'");
}

Json matroid_to_json(const Json& input) {
  Matroid m = matroid_from_json(input);
  std::string type = input["type"].get<std::string>();
  Json out;
  out["type"] = type;
  out["n"] = m.n();
  if (type == "uniform") out["r"] = m.rank();
  if (type == "bases") {
    std::vector<std::vector<int>> bases;
    for (const Json& b : input["bases"]) {
      std::vector<int> elems = b.get<std::vector<int>>();
      std::sort(elems.begin(), elems.end());
      bases.push_back(std::move(elems));
    }
    std::sort(bases.begin(), bases.end());
    bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
    out["bases"] = bases;
  }
  return out;
}

std::string matroid_label(const Json& input) {
  std::string type = input["type"].get<std::string>();
  if (type == "uniform") {
    return "uniform(" + std::to_string(input["r"].get<int>()) + "," +
           std::to_string(input["n"].get<int>()) + ")";
  }
  if (type == "boolean") {
    return "boolean(" + std::to_string(input["n"].get<int>()) + ")";
  }
  return "bases(n=" + std::to_string(input["n"].get<int>()) +
         ",count=" + std::to_string(input["bases"].size()) + ")";
}

DivisorClass parse_divisor(const std::string& text, const ChowRing& ring) {
  DivisorParser p{text, ring};
  return p.parse();
}

std::string render_divisor(const DivisorClass& d) {
  const auto& flats = d.ring->matroid().proper_flats();
  std::string out;
  for (size_t id = 0; id < d.coeffs.size(); id++) {
    const Rational& c = d.coeffs[id];
    if (c == 0) continue;
    Rational mag = c < 0 ? Rational(-c) : c;
    std::string term =
        (mag == 1 ? "" : rational_to_string(mag) + "*") + "x" +
        subset_to_string(flats[id].mask);
    if (out.empty()) {
      out = (c < 0 ? "-" : "") + term;
    } else {
      out += (c < 0 ? " - " : " + ") + term;
    }
  }
  return out.empty() ? "0" : out;
}

Json flat_json(Subset s) {
  std::vector<int> elems;
  for (int e : subset_elements(s)) elems.push_back(e + 1);
  return elems;
}

std::string flat_key(Subset s) {
  std::string key;
  for (int e : subset_elements(s)) {
    if (!key.empty()) key += ',';
    key += std::to_string(e + 1);
  }
  return key;
}

Json element_json(const ChowElement& a) {
  const ChowRing& ring = *a.ring();
  const auto& flats = ring.matroid().proper_flats();
  Json degrees = Json::array();
  for (int d = 0; d <= ring.top_degree(); d++) {
    const auto& comp = a.component(d);
    Json terms = Json::array();
    for (size_t i = 0; i < comp.size(); i++) {
      if (comp[i] == 0) continue;
      const ChainMonomial& mono = ring.basis_monomial(d, static_cast<int>(i));
      Json chain = Json::array();
      for (auto& [id, e] : mono.factors) {
        chain.push_back({{"flat", flat_json(flats[id].mask)}, {"power", e}});
      }
      terms.push_back({{"chain", chain}, {"coeff", rational_json(comp[i])}});
    }
    if (!terms.empty()) degrees.push_back({{"degree", d}, {"terms", terms}});
  }
  return degrees;
}

Json divisor_json(const DivisorClass& d) {
  const auto& flats = d.ring->matroid().proper_flats();
  Json coeffs = Json::object();
  for (size_t id = 0; id < d.coeffs.size(); id++) {
    if (d.coeffs[id] == 0) continue;
    coeffs[flat_key(flats[id].mask)] = rational_json(d.coeffs[id]);
  }
  return Json{{"coeffs", coeffs}, {"text", render_divisor(d)}};
}

Json certificate_json(const ChowRing& ring, const NefCertificate& c) {
  const auto& flats = ring.matroid().proper_flats();
  Json flags = Json::array();
  for (const auto& [flag, coeffs] : c.entries) {
    Json flag_json = Json::array();
    for (int id : flag) flag_json.push_back(flat_json(flats[id].mask));
    Json cmap = Json::object();
    for (size_t id = 0; id < coeffs.size(); id++) {
      cmap[flat_key(flats[id].mask)] = rational_json(coeffs[id]);
    }
    flags.push_back({{"flag", flag_json}, {"coeffs", cmap}});
  }
  return Json{{"property", c.property}, {"flags", flags}};
}

Json lift_json(const SubmodularLift& l) {
  Json values = Json::array();
  for (const Rational& v : l.values) values.push_back(rational_json(v));
  return Json{{"n", l.n}, {"values", values}};
}

Json Report::to_json() const {
  return Json{{"inputs", inputs},
              {"results", results},
              {"timings_ms", timings_ms},
              {"version", version},
              {"determinism_hash", determinism_hash}};
}

std::string Report::to_string() const { return to_json().dump(2) + "\n"; }

std::string Report::to_csv() const {
  if (!results.is_object() || !results.contains("rows") ||
      !results["rows"].is_array()) {
    parse_fail("csv output is only available for scan commands");
  }
  std::string out = "matroid,divisor,property,value\n";
  for (const Json& row : results["rows"]) {
    out += csv_escape(row["matroid"].get<std::string>()) + ",";
    out += csv_escape(row["divisor"].get<std::string>()) + ",";
    out += csv_escape(row["property"].get<std::string>()) + ",";
    out += csv_escape(row["value"].get<std::string>()) + "\n";
  }
  return out;
}

std::string report_hash(const Json& inputs, const Json& results,
                        const std::string& version) {
  Json hashed{{"inputs", inputs}, {"results", results}, {"version", version}};
  std::string bytes = hashed.dump();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

namespace {

std::string require_divisor_param(const Json& params) {
  if (!params.contains("divisor") || !params["divisor"].is_string()) {
    parse_fail("this command needs a 'divisor' expression");
  }
  return params["divisor"].get<std::string>();
}

Json run_describe(const Matroid& m) {
  Json flats = Json::array();
  std::vector<int> by_rank(std::max(0, m.rank() - 1), 0);
  for (const FlatInfo& f : m.proper_flats()) {
    flats.push_back(flat_json(f.mask));
    by_rank[f.rank - 1]++;
  }
  return Json{{"n", m.n()},
              {"rank", m.rank()},
              {"proper_flat_count", m.proper_flats().size()},
              {"proper_flats_by_rank", by_rank},
              {"proper_flats", flats}};
}

Json run_chi(const ChowRing& ring, const Json& params) {
  KTheory kt(ring);
  DivisorClass d = parse_divisor(require_divisor_param(params), ring);
  if (!d.is_integral()) {
    throw Error(ErrorCode::InfeasiblePrecondition,
                "Euler characteristics need an integral divisor");
  }
  Rational zeta = kt.chi_zeta(d);
  Rational hrr = kt.chi_hrr_line(d);
  if (zeta != hrr) {
    throw Error(ErrorCode::Internal,
                "Euler characteristic pipelines disagree on " +
                    render_divisor(d));
  }
  return Json{{"divisor", render_divisor(d)},
              {"chi", to_ll(to_integer(zeta))},
              {"chi_zeta", rational_json(zeta)},
              {"chi_hrr", rational_json(hrr)}};
}

Json run_nef_check(const ChowRing& ring, const Json& params) {
  DivisorClass d = parse_divisor(require_divisor_param(params), ring);
  PositivityResult p3 = check_P3(ring, d);
  PositivityResult p2 = check_P2(ring, d);
  PositivityResult ample = check_ample(ring, d);
  Json results{{"divisor", render_divisor(d)},
               {"p3", p3.ok},
               {"p2", p2.ok},
               {"ample", ample.ok}};
  if (ring.matroid().n() <= 10) {
    LiftResult p1 = check_P1(ring, d);
    results["p1"] = p1.ok;
    if (p1.ok) results["submodular_lift"] = lift_json(*p1.lift);
  } else {
    results["p1"] = "capacity";
  }
  bool big = p3.ok && ring.degree(ring.pow(ring.element_of(d),
                                           ring.top_degree())) > 0;
  results["big_and_nef"] = big;
  if (ample.ok) {
    results["certificate"] = certificate_json(ring, *ample.certificate);
  } else if (p2.ok) {
    results["certificate"] = certificate_json(ring, *p2.certificate);
  } else if (p3.ok) {
    results["certificate"] = certificate_json(ring, *p3.certificate);
  } else {
    results["certificate"] = nullptr;
  }
  return results;
}

Json run_dhr(const Matroid& m, const Json& params) {
  if (!params.contains("sets") || !params["sets"].is_array()) {
    parse_fail("dhr needs a 'sets' array of element arrays");
  }
  std::vector<Subset> sets;
  Json echo = Json::array();
  for (const Json& s : params["sets"]) {
    if (!s.is_array()) parse_fail("each set must be an element array");
    Subset mask = subset_from_elements(s.get<std::vector<int>>(), m.n());
    sets.push_back(mask);
    echo.push_back(flat_json(mask));
  }
  return Json{{"sets", echo}, {"satisfied", m.dragon_hall_rado(sets)}};
}

Json run_kv_scan(const ChowRing& ring, const Json& params,
                 const std::string& label) {
  KTheory kt(ring);
  int count = params.value("count", 12);
  uint64_t seed = params.value("seed", 1u);
  std::mt19937_64 rng(seed);
  Subset full = full_set(ring.matroid().n());
  auto random_nef = [&] {
    DivisorClass d = ring.divisor_zero();
    int picks = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < picks; i++) {
      Subset s = 0;
      while (s == 0) s = Subset(rng()) & full;
      Rational c(static_cast<int>(rng() % 3));
      d = d + (rng() % 2 ? ring.divisor_alpha_S(s) : ring.divisor_beta_S(s)) * c;
    }
    return d;
  };
  std::vector<DivisorClass> divisors;
  if (params.contains("divisor")) {
    divisors.push_back(parse_divisor(require_divisor_param(params), ring));
  } else {
    for (int i = 0; i < count; i++) divisors.push_back(random_nef());
  }
  Json rows = Json::array();
  for (const DivisorClass& d : divisors) {
    KvReport weak = kv_weak_scan(kt, d);
    rows.push_back({{"matroid", label},
                    {"divisor", render_divisor(d)},
                    {"property", "kv-weak"},
                    {"value", rational_to_string(weak.value)},
                    {"sign_ok", weak.sign_ok}});
    if (is_big_and_nef(ring, d)) {
      KvReport strong = kv_strong_scan(kt, d);
      rows.push_back({{"matroid", label},
                      {"divisor", render_divisor(d)},
                      {"property", "kv-strong"},
                      {"value", rational_to_string(strong.value)},
                      {"sign_ok", strong.sign_ok}});
    }
  }
  return Json{{"rows", rows}};
}

Json run_identities(const Matroid& m, const Json& params) {
  IdentityOptions opt;
  opt.trials = params.value("trials", opt.trials);
  opt.seed = params.value("seed", opt.seed);
  Json list = Json::array();
  bool all = true;
  for (const IdentityResult& r : run_identity_suite(m, opt)) {
    Json row{{"name", r.name}, {"pass", r.pass}};
    if (!r.pass) {
      row["witness"] = r.witness;
      all = false;
    }
    list.push_back(row);
  }
  return Json{{"identities", list}, {"all_pass", all}};
}

}  // namespace

Report run(const JobSpec& job) {
  using Clock = std::chrono::steady_clock;
  auto ms_between = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
  };
  auto t_start = Clock::now();

  Json inputs{{"matroid", matroid_to_json(job.matroid)},
              {"command", job.command},
              {"params", job.params.is_null() ? Json::object() : job.params}};
  Matroid m = matroid_from_json(job.matroid);
  size_t limit = job.params.is_object() ? job.params.value("limit", 256u) : 256u;
  if (m.proper_flats().size() > limit) {
    throw Error(ErrorCode::Capacity,
                "matroid has " + std::to_string(m.proper_flats().size()) +
                    " proper flats, over the limit " + std::to_string(limit));
  }
  auto t_built = Clock::now();

  Json results;
  const std::string& cmd = job.command;
  if (cmd == "describe") {
    results = run_describe(m);
  } else if (cmd == "dhr") {
    results = run_dhr(m, job.params);
  } else if (cmd == "identities") {
    results = run_identities(m, job.params);
  } else {
    ChowRing ring(m);
    if (cmd == "chow") {
      Json dims = Json::array();
      for (const Integer& d : ring.graded_dims()) dims.push_back(to_ll(d));
      results = Json{{"graded_dims", dims}, {"top_degree", ring.top_degree()}};
    } else if (cmd == "chow-poly") {
      KTheory kt(ring);
      Json coeffs = Json::array();
      for (const Integer& c : kt.chow_polynomial()) coeffs.push_back(to_ll(c));
      results = Json{{"coefficients", coeffs}};
    } else if (cmd == "tangent") {
      KTheory kt(ring);
      ChernData c = kt.chern_tangent();
      results = Json{{"rank", c.rank}, {"total_chern", element_json(c.total)}};
    } else if (cmd == "todd") {
      KTheory kt(ring);
      results = Json{{"todd", element_json(kt.todd_tangent())}};
    } else if (cmd == "chi") {
      results = run_chi(ring, job.params);
    } else if (cmd == "nef-check") {
      results = run_nef_check(ring, job.params);
    } else if (cmd == "kv-scan") {
      results = run_kv_scan(ring, job.params, matroid_label(inputs["matroid"]));
    } else {
      parse_fail("unknown command '" + cmd + "'");
    }
  }

  Report report;
  report.inputs = std::move(inputs);
  report.results = std::move(results);
  report.timings_ms = Json{{"build", ms_between(t_start, t_built)},
                           {"total", ms_between(t_start, Clock::now())}};
  report.version = CHOWFORGE_VERSION;
  report.determinism_hash =
      report_hash(report.inputs, report.results, report.version);
  return report;
}

}  // namespace chowforge::io
