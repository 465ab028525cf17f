// Verification suites: each property is evaluated on the whole basis where the
// spaces allow it and reports its largest deviation.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdk/dg_irreps.hpp"
#include "qdk/group.hpp"

namespace qdk {

struct PropertyResult {
  std::string name;
  bool passed = true;
  double max_deviation = 0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::string group;
  std::vector<PropertyResult> properties;

  bool passed() const;
  double max_deviation() const;
};

// Exact checks over the basis g h*: associativity, unit, coassociativity,
// counit, multiplicativity of Delta and eps, the antipode axioms, invertibility
// of R, R Delta(a) R^-1 = T Delta(a), and the coproducts of R. Deviations count
// integer coefficient mismatches, so a passing suite reports 0.
inline constexpr std::size_t kAxiomOrderLimit = 24;
SuiteReport hopf_axiom_suite(const FiniteGroup& g);

// Braid relations as exact permutations on the regular and fluxon modules, and
// numerically on small irreps.
SuiteReport braid_relation_suite(const QuantumDouble& qd);

// Dimension count, unitarity and homomorphism of every irrep action (sampled pairs),
// and the flux scalar.
SuiteReport irrep_suite(const QuantumDouble& qd, std::uint64_t seed);

SuiteReport qft_suite(const QuantumDouble& qd, std::uint64_t seed);

// Fluxon decompositions and transforms, general decompositions, the Z_p x| Z_q
// chargeon transforms when applicable, and fusion probabilities.
SuiteReport cg_suite(const QuantumDouble& qd, std::uint64_t seed);

}  // namespace qdk
