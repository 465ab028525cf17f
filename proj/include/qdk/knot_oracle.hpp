// Combinatorial ground truth for the fluxon invariants: Wirtinger presentations
// of plat closures, homomorphism counts into a flux set, and the counting checks
// behind the equation gadgets.
//
// Crossing signs: s_i moves the strand at position i+1 over the one at i. With
// each link component oriented from its first top cap downward, the crossing
// sign is (generator sign) * (over direction) * (under direction), direction +1
// when the strand runs downward. Each crossing contributes
//   x_out = x_over^s x_in x_over^-s
// with in/out taken along the under strand's orientation.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qdk/braid.hpp"
#include "qdk/group.hpp"

namespace qdk {

class NotReachable : public GroupError {
 public:
  using GroupError::GroupError;
};

struct WirtingerCrossing {
  std::size_t over = 0;
  std::size_t in = 0;
  std::size_t out = 0;
  int sign = 1;
};

struct WirtingerPresentation {
  std::size_t strokes = 0;
  std::size_t components = 0;
  std::vector<WirtingerCrossing> crossings;
  std::vector<std::size_t> seeds;  // strokes through the top caps, in cap order
};

WirtingerPresentation wirtinger_from_plat(const BraidWord& w);
// Disjoint union; the second presentation's strokes are renumbered after the first.
WirtingerPresentation split_union(const WirtingerPresentation& a, const WirtingerPresentation& b);
// Side-by-side plat braids (a on the left).
BraidWord plat_split_union(const BraidWord& a, const BraidWord& b);

struct CountOptions {
  std::uint64_t node_limit = 10000000;
  unsigned threads = 1;
};
// Assignments strokes -> S satisfying every crossing relation. Branches on the
// seed strokes first and propagates each relation as soon as two of its strokes
// are known.
std::uint64_t count_homomorphisms(const WirtingerPresentation& p, const FluxSet& s,
                                  const CountOptions& opt = {});

struct FluxonIdentityReport {
  std::uint64_t homomorphisms = 0;
  std::size_t cap_pairs = 0;
  std::size_t flux_set_size = 0;
  double plat = 0;
  double rescaled = 0;  // homomorphisms / |S|^cap_pairs
  double error = 0;
  bool passed = false;
};
FluxonIdentityReport verify_fluxon_identity(const BraidWord& w, const FluxSet& s,
                                            const CountOptions& opt = {});

// ---------------------------------------------------------------- equation systems

struct WordLetter {
  bool variable = true;  // variable index or constant group element
  std::uint32_t index = 0;
  int exponent = 1;
};
using GroupWord = std::vector<WordLetter>;

struct WordEquation {
  GroupWord lhs;
  GroupWord rhs;
};

struct GroupEquationSystem {
  std::size_t variables = 0;
  std::vector<WordEquation> equations;

  // x_b = x_t^-1 x_a x_t
  void add_conjugation(std::size_t b, std::size_t a, std::size_t t);
};

Elem evaluate(const FiniteGroup& g, const GroupWord& w, std::span<const Elem> values);
bool satisfied(const FiniteGroup& g, const GroupEquationSystem& sys, std::span<const Elem> values);
// Enumerates the unfixed variables over the members of s; equations are tested
// as soon as all their variables are set.
std::uint64_t count_solutions(const GroupEquationSystem& sys, const FluxSet& s,
                              std::span<const std::optional<Elem>> fixed,
                              std::uint64_t node_limit = 10000000);

// {y in C : y = (b y) a (b y)^-1}.
std::vector<Elem> conjugation_equation_solutions(const FluxSet& c, Elem a, Elem b);

// ---------------------------------------------------------------- kernel images

// A word in generators: (generator index, +1 or -1), multiplied left to right.
using GeneratorWord = std::vector<std::pair<std::size_t, int>>;
Elem evaluate_word(const FiniteGroup& g, const GeneratorWord& w, std::span<const Elem> generators);

// {a : (a, e) in E}, E the subgroup of G x G generated by the pairs (c_i, d_i).
Subgroup pair_subgroup_image(const FiniteGroup& g, std::span<const Elem> c, std::span<const Elem> d);
// Shortest word with w(c) = target_c and w(d) = target_d; throws NotReachable.
GeneratorWord find_pair_word(const FiniteGroup& g, std::span<const Elem> c, std::span<const Elem> d,
                             Elem target_c, Elem target_d);
// w(c) = alpha, w(d) = e.
GeneratorWord find_relating_word(const FiniteGroup& g, std::span<const Elem> c, std::span<const Elem> d,
                                 Elem alpha);

struct AmplificationReport {
  std::size_t ell = 0;
  Elem alpha = 0;
  GeneratorWord word;
  GroupEquationSystem system;
  std::uint64_t solutions_c = 0;
  std::uint64_t solutions_d = 0;
  bool passed = false;  // solutions_c >= 2^ell * solutions_d
};
// Variables x_1..x_k then y_1..y_ell. Base relations x_i = u_i x_1 u_i^-1 for
// words u_i valid on both tuples, plus y_j = (w y_j) x_1 (w y_j)^-1 with
// w(c) = alpha, w(d) = e. When alpha is not given, the element of the kernel
// image with the most solutions of the single equation is used.
AmplificationReport suppression_amplification_check(const FluxSet& cls, std::span<const Elem> c,
                                                     std::span<const Elem> d, std::size_t ell,
                                                     std::optional<Elem> alpha = std::nullopt);

}  // namespace qdk
