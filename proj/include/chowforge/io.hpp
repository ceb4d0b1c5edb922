#pragma once

#include <json.hpp>

#include <string>

#include "chowforge/chow.hpp"
#include "chowforge/matroid.hpp"
#include "chowforge/positivity.hpp"

namespace chowforge::io {

using Json = nlohmann::json;

// Schema: {"type":"uniform","r":int,"n":int} | {"type":"boolean","n":int}
//       | {"type":"bases","n":int,"bases":[[int,...],...]}; elements 1-based.
Matroid matroid_from_json(const Json& j);
// Normalized echo of the schema above (bases sorted, elements sorted).
Json matroid_to_json(const Json& input);
// Compact label such as "uniform(3,6)" for scan rows.
std::string matroid_label(const Json& input);

// Expression over x{S}, alpha, beta, alpha{S}, beta{S}, S_k with rational
// coefficients; subsets brace-enclosed 1-based lists, _E for the ground
// set, subscripts written with or without an underscore. Throws
// Error(Parse) with a position, Error(NotAFlat) for x on a non-flat.
DivisorClass parse_divisor(const std::string& text, const ChowRing& ring);
// Canonical rendering; parse_divisor(render_divisor(d)) reproduces d
// coefficient for coefficient.
std::string render_divisor(const DivisorClass& d);

// Sorted 1-based element array.
Json flat_json(Subset s);
// Canonical object key: sorted 1-based elements joined by commas.
std::string flat_key(Subset s);
Json element_json(const ChowElement& a);
Json divisor_json(const DivisorClass& d);
Json certificate_json(const ChowRing& ring, const NefCertificate& c);
Json lift_json(const SubmodularLift& l);

struct JobSpec {
  Json matroid;
  std::string command;
  Json params = Json::object();
};

struct Report {
  Json inputs;
  Json results;
  Json timings_ms;
  std::string version;
  std::string determinism_hash;

  Json to_json() const;
  std::string to_string() const;
  // Row-shaped results only (scan commands); Parse otherwise.
  std::string to_csv() const;
};

// Hash of the report minus its timings; stable across runs.
std::string report_hash(const Json& inputs, const Json& results,
                        const std::string& version);

Report run(const JobSpec& job);

}  // namespace chowforge::io
