// Braid words and their representations on tensor powers of D(G) modules.
//
// A generator s_i acts on tensor factors (i, i+1) as the swap composed with the
// R-matrix. Positions are 1-based in words and 0-based in tuples; letters are
// applied left to right.
//
//   regular: s|g1 h1*, g2 h2*> = |g2 h2*, (g2 h2 g2^-1) g1 h1*>
//   fluxon:  s|a, b>           = |b, b a b^-1>
//   irrep:   s|x1 v1, x2 v2>   = |x2 v2> (x) (action of x2 on |x1 v1>)
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qdk/dg_irreps.hpp"
#include "qdk/group.hpp"
#include "qdk/linalg.hpp"

namespace qdk {

struct BraidLetter {
  int index = 1;  // s_index, 1 <= index < strands
  int sign = 1;   // +1 or -1
  auto operator<=>(const BraidLetter&) const = default;
};

class BraidWord {
 public:
  explicit BraidWord(int strands, std::vector<BraidLetter> letters = {});

  // "B4: s2 s2 S1" (uppercase S is the inverse generator). The "Bn:" prefix is
  // required unless default_strands is positive.
  static BraidWord parse(std::string_view text, int default_strands = 0);

  int strands() const { return strands_; }
  const std::vector<BraidLetter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  std::string to_string() const;
  BraidWord inverse() const;
  BraidWord operator*(const BraidWord& o) const;  // this first, then o
  BraidWord& append(BraidLetter l);
  // Same letters viewed in B_strands (strands >= current).
  BraidWord widened(int strands) const;
  // Letters moved up by offset positions inside B_strands.
  BraidWord shifted(int offset, int strands) const;
  // Strand permutation: perm[p] is the output position of the strand starting at p.
  std::vector<int> permutation() const;

  bool operator==(const BraidWord&) const = default;

 private:
  int strands_;
  std::vector<BraidLetter> letters_;
};

// Sum of the exponents.
int linking_number(const BraidWord& w);

// A conjugation-invariant set of group elements (a union of classes) indexed by
// sorted position; the fluxon basis of one strand.
class FluxSet {
 public:
  static FluxSet from_members(const FiniteGroup& g, std::vector<Elem> members);
  static FluxSet conjugacy_class(const FiniteGroup& g, Elem representative);
  // The class of x together with the class of x^-1.
  static FluxSet inverse_closed_class(const FiniteGroup& g, Elem x);

  const FiniteGroup& group() const { return group_; }
  const std::vector<Elem>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(Elem x) const { return position_[x] >= 0; }
  std::size_t position(Elem x) const;
  bool inverse_closed() const;

 private:
  FluxSet(FiniteGroup g, std::vector<Elem> members);
  FiniteGroup group_;
  std::vector<Elem> members_;
  std::vector<std::int32_t> position_;
};

enum class BasisScheme { regular, fluxon, irrep };

using BasisTuple = std::vector<std::uint32_t>;

// Sparse state over basis tuples of one scheme.
struct StateVector {
  BasisScheme scheme = BasisScheme::regular;
  std::size_t strands = 0;
  std::map<BasisTuple, cplx> amplitudes;

  static StateVector basis(BasisScheme scheme, BasisTuple t);
  double norm() const;
  cplx inner(const StateVector& o) const;  // <this|o>
  double distance(const StateVector& o) const;
};

// Generator actions on a pair of local basis indices.
std::pair<std::uint32_t, std::uint32_t> regular_generator(const FiniteGroup& g, int sign,
                                                          std::uint32_t a, std::uint32_t b);
std::pair<Elem, Elem> fluxon_generator(const FiniteGroup& g, int sign, Elem a, Elem b);

// One of the three braid-group representations, bound to its module.
class BraidRepresentation {
 public:
  static BraidRepresentation regular(const FiniteGroup& g);
  static BraidRepresentation fluxon(FluxSet flux);
  static BraidRepresentation irrep(const QuantumDouble& qd, const DGIrrepLabel& l);

  BasisScheme scheme() const { return scheme_; }
  std::size_t local_dim() const { return local_dim_; }
  const FiniteGroup& group() const { return group_; }
  bool is_permutation() const { return scheme_ != BasisScheme::irrep; }

  // Permutation schemes: image of a local index pair.
  std::pair<std::uint32_t, std::uint32_t> permute(int sign, std::uint32_t a, std::uint32_t b) const;
  // Two-site matrix on index a*D + b; for irreps this is the defining matrix.
  const Mat& gate(int sign) const;

  BasisTuple apply(const BraidWord& w, BasisTuple t) const;  // permutation schemes only
  StateVector apply(const BraidWord& w, const StateVector& s) const;
  // Dense state over D^n with the first strand most significant.
  Vec apply_dense(const BraidWord& w, Vec v) const;

  // Fluxon scheme only.
  const FluxSet& flux_set() const { return flux_.front(); }

 private:
  BraidRepresentation(BasisScheme s, FiniteGroup g) : scheme_(s), group_(std::move(g)) {}
  void build_gates();
  void check(const BraidWord& w, std::size_t strands) const;

  BasisScheme scheme_;
  FiniteGroup group_;
  std::size_t local_dim_ = 0;
  std::vector<FluxSet> flux_;  // empty or one entry
  Mat plus_, minus_;
};

// Applies a two-site matrix to factors (pos, pos+1) of a dense D^n state.
void apply_two_site(Vec& v, const Mat& gate, std::size_t local_dim, int strands, int pos);

}  // namespace qdk
