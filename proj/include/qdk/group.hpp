// Finite groups with dense element indices, plus the coset and centralizer
// combinatorics used throughout the library.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qdk/errors.hpp"

namespace qdk {

using Elem = std::uint32_t;
using Perm = std::vector<std::uint8_t>;  // one-line notation over {0..n-1}

enum class GroupKind { permutation, semidirect, table };

struct SemidirectParams {
  int p = 0;
  int q = 0;
  int alpha = 1;
};

// Immutable, cheap to copy (shared storage). Element 0 is the identity.
// Permutation products compose right to left: mul(a, b) applies b first.
class FiniteGroup {
 public:
  static constexpr std::size_t kTableLimit = 4096;
  static constexpr std::size_t kOrderLimit = 100000;

  static FiniteGroup symmetric(int n);
  static FiniteGroup alternating(int n);
  static FiniteGroup cyclic(int n);
  static FiniteGroup semidirect(int p, int q, int alpha);
  static FiniteGroup from_table(std::vector<std::vector<Elem>> mul, std::string name = {});
  static FiniteGroup from_permutations(int degree, std::span<const Perm> generators,
                                       std::string name = {});

  GroupKind kind() const;
  std::size_t order() const;
  const std::string& name() const;

  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem conj(Elem g, Elem x) const { return mul(mul(g, x), inv(g)); }  // g x g^-1
  Elem pow(Elem a, long long k) const;
  std::size_t element_order(Elem a) const;
  bool commute(Elem a, Elem b) const { return mul(a, b) == mul(b, a); }
  bool is_abelian() const;
  const std::vector<Elem>& generators() const;
  bool same_as(const FiniteGroup& other) const { return d_ == other.d_; }

  // Permutation groups only.
  int degree() const;
  const Perm& permutation(Elem a) const;
  std::optional<Elem> find(const Perm& p) const;
  std::vector<int> cycle_type(Elem a) const;  // sorted descending, fixed points omitted
  std::string cycle_notation(Elem a) const;   // 1-based cycles, "e" for identity

  // Semidirect Z_p x| Z_q only; element (a, b) has index b*p + a.
  const SemidirectParams& semidirect_params() const;
  std::pair<int, int> semidirect_pair(Elem x) const;
  Elem semidirect_elem(int a, int b) const;

  std::string element_label(Elem a) const;

  struct Data;  // opaque storage, defined in group.cpp

 private:
  explicit FiniteGroup(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

// Subgroup generated from scratch by breadth-first closure.
std::vector<Elem> closure(const FiniteGroup& g, std::span<const Elem> generators);
// Greedy generating set for a sorted member list that is known to be a subgroup.
std::vector<Elem> greedy_generators(const FiniteGroup& g, std::span<const Elem> members);

class Subgroup {
 public:
  Subgroup(FiniteGroup parent, std::vector<Elem> members, std::vector<Elem> generators);
  static Subgroup whole(const FiniteGroup& g);
  static Subgroup generated_by(const FiniteGroup& g, std::span<const Elem> generators);
  static Subgroup from_members(const FiniteGroup& g, std::vector<Elem> members);

  const FiniteGroup& parent() const { return parent_; }
  const std::vector<Elem>& members() const { return members_; }
  const std::vector<Elem>& generators() const { return generators_; }
  std::size_t order() const { return members_.size(); }
  bool contains(Elem x) const { return member_flag_[x] != 0; }
  bool is_whole() const { return members_.size() == parent_.order(); }
  std::optional<std::size_t> local_index(Elem x) const;

  // The subgroup as a group in its own right; local index k stands for
  // members()[k]. Returns the parent itself when the subgroup is everything.
  FiniteGroup as_group() const;

 private:
  FiniteGroup parent_;
  std::vector<Elem> members_;
  std::vector<Elem> generators_;
  std::vector<std::uint8_t> member_flag_;
};

struct ConjugacyClass {
  Elem representative = 0;
  std::vector<Elem> members;  // sorted
};

std::vector<ConjugacyClass> conjugacy_classes(const FiniteGroup& g);
// class_of[x] = index into the class list.
std::vector<std::uint32_t> class_lookup(const FiniteGroup& g, std::span<const ConjugacyClass> classes);

Subgroup centralizer(const FiniteGroup& g, Elem x);
Subgroup centralizer_intersection(const FiniteGroup& g, Elem x, Elem y);
Subgroup intersect(const Subgroup& a, const Subgroup& b);

struct Transversal {
  Subgroup subgroup;
  std::vector<Elem> representatives;      // identity first, then ascending minima
  std::vector<std::uint32_t> coset_of;    // coset index of every group element
};

Transversal left_transversal(const FiniteGroup& g, const Subgroup& h);

struct CosetFactor {
  Elem t = 0;  // coset representative
  Elem z = 0;  // subgroup element, g = t*z
};
CosetFactor coset_factorize(const Transversal& t, Elem g);

struct DoubleCosetReps {
  Subgroup left;
  Subgroup right;
  std::vector<Elem> representatives;
  std::vector<std::size_t> sizes;
};
DoubleCosetReps double_coset_reps(const FiniteGroup& g, const Subgroup& h, const Subgroup& k);

struct ClassProductTerm {
  std::size_t class_index = 0;
  std::size_t multiplicity = 0;
};
// Expansion of the class sum product [x]*[y] over class sums.
std::vector<ClassProductTerm> class_algebra_product(const FiniteGroup& g,
                                                    std::span<const ConjugacyClass> classes,
                                                    std::size_t cx, std::size_t cy);

// Coset factorization in S_n against the centralizer of sigma, computed from the
// cycle structure alone (no coset table): pi = t*z with t depending only on pi*Z(sigma).
struct PermFactor {
  Perm t;
  Perm z;
};
PermFactor sn_coset_factorize(const Perm& sigma, const Perm& pi);

// Small permutation helpers (right-to-left composition).
Perm perm_compose(const Perm& a, const Perm& b);
Perm perm_inverse(const Perm& a);
Perm perm_identity(int n);
Perm perm_from_cycles(int n, const std::vector<std::vector<int>>& cycles);  // 0-based
bool perm_is_even(const Perm& p);

}  // namespace qdk
