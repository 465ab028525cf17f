// Clebsch-Gordan decompositions of tensor products of D(G) irreps, the unitaries
// realizing them, and fusion by measurement of the output label.
//
// The tensor product V_first (x) V_second has basis index a * dim(second) + b and
// carries the action (pi_first (x) pi_second)(Delta(x)). A basis pair with fluxes
// (u, v) has total flux v u.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qdk/dg_irreps.hpp"
#include "qdk/fourier.hpp"
#include "qdk/linalg.hpp"

namespace qdk {

struct CGSummand {
  Elem coset_rep = 0;  // double-coset representative the summand came from
  DGIrrepLabel label;
  std::size_t multiplicity = 0;
  std::size_t dim = 0;  // dimension of the output irrep
};

// One checkable step of the general decomposition.
struct CGCondition {
  std::string name;
  bool satisfied = true;
  double deviation = 0;
  std::string detail;
};

struct CGDecomposition {
  DGIrrepLabel first;
  DGIrrepLabel second;
  std::vector<CGSummand> summands;
  std::vector<CGCondition> conditions;

  std::size_t total_dim() const;
  bool conditions_met() const;
  // Multiplicities summed over double cosets.
  std::map<DGIrrepLabel, std::size_t> multiplicities() const;
};

// Fluxon inputs: trivial charges on the two classes.
CGDecomposition fluxon_cg_decompose(const QuantumDouble& qd, std::size_t first_class, std::size_t second_class);
// Restriction to the pair stabilizer, CG over it, induction to the output centralizer.
CGDecomposition general_cg_decompose(const QuantumDouble& qd, const DGIrrepLabel& first,
                                     const DGIrrepLabel& second);

struct CGBlock {
  DGIrrepLabel label;
  std::size_t offset = 0;
  std::size_t dim = 0;
  std::size_t copy = 0;
  Elem coset_rep = 0;
};

// Unitary whose rows are the output basis vectors, block by block; each block
// uses the |m, v> basis of its output irrep.
struct CGTransform {
  QuantumDouble double_group;
  DGIrrepLabel first;
  DGIrrepLabel second;
  Mat unitary;
  std::vector<CGBlock> blocks;

  std::vector<TargetBlock> target_blocks() const;
};

Mat tensor_action(const QuantumDouble& qd, const DGIrrepLabel& first, const DGIrrepLabel& second, DGBasis a);
Mat tensor_group_matrix(const QuantumDouble& qd, const DGIrrepLabel& first, const DGIrrepLabel& second, Elem g);

// Any pair of labels: per output flux class, the centralizer action on the
// tensor vectors of that flux is split into irreps and transported around the class.
CGTransform cg_transform(const QuantumDouble& qd, const DGIrrepLabel& first, const DGIrrepLabel& second);
// Pair relabeling |u, v> -> |m, t> followed by an induced-representation split per orbit.
CGTransform fluxon_cg_transform(const QuantumDouble& qd, std::size_t first_class, std::size_t second_class);
// Chargeons (e, rho_k) (x) (e, rho_l) of Z_p x| Z_q, k and l canonical orbit labels:
// |s, t> -> |t - s, t>, a cyclic shift onto the canonical basis, and a Z_q Fourier
// transform in the sector where k alpha^u + l = 0 mod p.
CGTransform zpzq_cg_transform(const QuantumDouble& qd, int k, int l);
CGTransform zpzq_cg_transform(int p, int q, int alpha, int k, int l);

// Max deviation of U T(x) U^dagger from the block-diagonal sum of output irreps.
// Every basis element x is checked when |G|^2 dim^3 stays below ~4e9, otherwise
// the group elements and dual projectors, which generate D(G).
double cg_intertwining_error(const CGTransform& t);

struct FusionOutcome {
  DGIrrepLabel label;
  double probability = 0;
  Vec state;  // normalized, in the output basis of the transform
  std::vector<std::pair<DGIrrepLabel, double>> distribution;  // in block order
};
// Applies the transform, measures the output label and collapses. Throws on a zero state.
FusionOutcome fuse(const CGTransform& t, const Vec& state, std::uint64_t seed);

}  // namespace qdk
