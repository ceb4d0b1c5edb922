#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chowforge/matroid.hpp"

namespace chowforge {

struct IdentityResult {
  std::string name;
  bool pass = false;
  std::string witness;  // offending data on failure, empty otherwise
};

struct IdentityOptions {
  int trials = 20;  // sample count for the randomized identities
  uint64_t seed = 20260815;
};

// Runs every invariant the library asserts about one matroid: lattice and
// rank axioms, degree normalizations, the two independent degree and Euler
// characteristic pipelines, duality and decomposition identities, and the
// positivity implication chain. Deterministic for fixed options.
std::vector<IdentityResult> run_identity_suite(const Matroid& m,
                                               const IdentityOptions& opt = {});

}  // namespace chowforge
