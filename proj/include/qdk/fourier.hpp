// Fourier transforms over finite groups and over D(G).
//
// Centralizer QFT convention: F[(rho, j, i), g] = sqrt(d_rho / |H|) rho(g)_{ij},
// target order (rho, j, i). Under F, left multiplication acts on i by rho(x) and
// leaves the multiplicity index j alone, so each (rho, j) is a contiguous block.
#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qdk/dg_irreps.hpp"
#include "qdk/group.hpp"
#include "qdk/group_irreps.hpp"
#include "qdk/linalg.hpp"

namespace qdk {

// A contiguous invariant block in the target basis.
struct TargetBlock {
  std::size_t offset = 0;
  std::size_t dim = 0;
  std::string label;
};

// Unitary given as a pipeline of stages applied in order.
class UnitaryTransform {
 public:
  static constexpr std::size_t kDenseLimit = 4096;

  struct Permutation {
    std::vector<std::size_t> target;  // basis i -> basis target[i]
  };
  struct Block {
    std::size_t offset = 0;
    std::shared_ptr<const Mat> matrix;
  };
  struct BlockDiagonal {
    std::vector<Block> blocks;  // disjoint; uncovered indices are left alone
  };
  // Small matrix on one mixed-radix digit: index = hi*(radix*stride) + digit*stride + lo.
  struct Digit {
    std::size_t stride = 1;
    Mat matrix;
  };
  using Stage = std::variant<Permutation, BlockDiagonal, Digit, Mat>;

  UnitaryTransform() = default;
  explicit UnitaryTransform(std::size_t dim) : dim_(dim) {}
  static UnitaryTransform dense(Mat m, std::vector<TargetBlock> blocks = {});

  std::size_t dim() const { return dim_; }
  const std::vector<Stage>& stages() const { return stages_; }
  const std::vector<TargetBlock>& blocks() const { return blocks_; }
  void add_stage(Stage s) { stages_.push_back(std::move(s)); }
  void set_blocks(std::vector<TargetBlock> b) { blocks_ = std::move(b); }

  Vec apply(const Vec& v) const;
  Vec apply_inverse(const Vec& v) const;
  // Columns are images of the standard basis; capped at kDenseLimit.
  Mat materialize() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Stage> stages_;
  std::vector<TargetBlock> blocks_;
};

// Mass of m outside the diagonal blocks (max abs entry).
double off_block_mass(const Mat& m, const std::vector<TargetBlock>& blocks);

Mat qft_matrix(const std::vector<GroupIrrep>& irreps, std::size_t order);
UnitaryTransform centralizer_qft(const FiniteGroup& h, const std::vector<GroupIrrep>& irreps);
UnitaryTransform centralizer_qft(const FiniteGroup& h);
// Left-regular representation matrix of x.
Mat left_regular_matrix(const FiniteGroup& g, Elem x);

// ---------------------------------------------------------------- wreath products

// Z_k wr S_l with elements (z, pi), z in Z_k^l, composed as (z, pi)(y, s) = (z + pi.y, pi s),
// where (pi.y)[pi(c)] = y[c]. Element index = pi_index * k^l + sum_c z[c] k^c.
class WreathProduct {
 public:
  static constexpr std::size_t kOrderLimit = 10000;
  WreathProduct(int k, int l);

  int k() const { return k_; }
  int l() const { return l_; }
  std::size_t base_order() const { return base_; }  // k^l
  std::size_t order() const { return base_ * sym_.order(); }
  const FiniteGroup& symmetric() const { return sym_; }

  std::vector<int> digits(std::size_t code) const;
  std::size_t code(const std::vector<int>& z) const;
  std::size_t element(const std::vector<int>& z, Elem pi) const { return std::size_t(pi) * base_ + code(z); }
  std::size_t mul(std::size_t a, std::size_t b) const;
  // pi acting on a tuple: result[pi(c)] = v[c].
  std::vector<int> act(Elem pi, const std::vector<int>& v) const;

  // Faithful permutation group on k*l points (degree <= 16), for cross-checks.
  FiniteGroup permutation_group() const;
  // Index of the permutation-group element matching a wreath element.
  Elem to_permutation_group(const FiniteGroup& pg, std::size_t x) const;

 private:
  int k_, l_;
  std::size_t base_;
  FiniteGroup sym_;
};

struct WreathQft {
  WreathProduct group;
  UnitaryTransform transform;
};

// Staged construction: QFT over Z_k^l, relabel |omega, pi> by orbit data and
// right cosets of the orbit representative's stabilizer, then a QFT over that
// stabilizer. Blocks are (orbit, lambda, j, r) with rows (omega, i).
WreathQft wreath_qft(int k, int l);

// ---------------------------------------------------------------- D(G)

// Fourier transform over D(G): |g, h*> (index g*|G| + h) goes to |h*, rho, j, t, i>
// with target index h*|G| + local, local = offset(rho) + (j*|C| + t)*d_rho + i.
// t is the class position of the flux g h g^-1; the centralizer Z(h) and its
// irreps are transported from the class representative along its conjugator.
class DGQft {
 public:
  static constexpr std::size_t kDenseOrderLimit = 64;

  explicit DGQft(QuantumDouble qd);

  const QuantumDouble& double_group() const { return qd_; }
  const UnitaryTransform& transform() const { return transform_; }
  std::size_t dim() const { return transform_.dim(); }

  // Per-flux |G| x |G| unitary from C[G] (the g register) to the local target order.
  Mat flux_unitary(Elem h) const;
  std::size_t target_index(Elem h, std::size_t charge, std::size_t j, std::size_t t, std::size_t i) const;
  // Blocks of flux_unitary(h), one per (charge, j), local offsets.
  std::vector<TargetBlock> flux_blocks(Elem h) const;

  Vec apply(const Vec& v) const { return transform_.apply(v); }
  Vec apply_inverse(const Vec& v) const { return transform_.apply_inverse(v); }
  Mat materialize() const;

 private:
  QuantumDouble qd_;
  std::vector<Mat> sector_qft_;                   // F over Z(h0), per sector
  std::vector<std::vector<std::size_t>> offset_;  // per sector, per charge: local offset
  UnitaryTransform transform_;
};

// Regular-action matrix of a basis element restricted to the dual label h:
// |g> -> [g^-1 y g == h] |x g>.
Mat regular_flux_matrix(const FiniteGroup& g, DGBasis a, Elem h);

struct RestrictionReport {
  double max_error = 0;     // distance to the centralizer QFT
  double leaked_mass = 0;   // amplitude outside the (h, t = e) slice
};
// Embeds functions on Z(h) as sum f(z)|z, h*>, applies the D(G) QFT, discards
// (h, t) and compares with the centralizer QFT of f. Uses a delta at e, the
// constant function and `samples` random functions.
RestrictionReport qft_inverse_restriction_check(const DGQft& qft, Elem h, int samples = 4,
                                                std::uint64_t seed = 1);

// Inverse D(G) QFT of w placed in the (class representative, rho, j = 0) block.
Vec embed_irrep_vector(const DGQft& qft, const DGIrrepLabel& l, const Vec& w);

// ---------------------------------------------------------------- induced representations

// Induced representation of rho (irrep of the subgroup b of a, indexed by b's
// local order) with basis |t, v> at index t*d + v, t running over the left
// transversal of b in a.
struct InducedDecomposition {
  Transversal transversal;
  std::vector<std::size_t> multiplicity;  // per irrep of a
  UnitaryTransform transform;             // blocks (mu, copy), canonical a-irreps
};

Mat induced_matrix(const Transversal& t, const GroupIrrep& rho, Elem x);

// Embeds v into the (rho, j = 0) column of C[b], spreads it over the cosets t b,
// applies the QFT over a and splits each isotypic multiplicity space by SVD.
InducedDecomposition induced_block_diagonalize(const Subgroup& b, const GroupIrrep& rho,
                                               const std::vector<GroupIrrep>& a_irreps);
InducedDecomposition induced_block_diagonalize(const Subgroup& b, const GroupIrrep& rho);

}  // namespace qdk
