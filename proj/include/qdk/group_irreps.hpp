// Unitary irreducible representations of finite groups: exact families
// (cyclic, Z_p x| Z_q) and a numeric fallback that splits the regular
// representation with a random self-adjoint commutant element.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdk/group.hpp"
#include "qdk/linalg.hpp"

namespace qdk {

struct GroupIrrep {
  std::string label;
  std::size_t dim = 1;
  std::vector<Mat> images;  // one d x d unitary per group element index

  const Mat& operator()(Elem g) const { return images[g]; }
  cplx character(Elem g) const { return images[g].trace(); }
};

// Canonical irrep list of a group, trivial irrep first:
//   Z_p x| Z_q  -> q characters chi_j(a,b) = w_q^{jb}, then rho_k for orbit minima k;
//   cyclic      -> chi_j(gen^m) = w_n^{jm}, gen the least element of full order;
//   otherwise   -> numeric_irreps ordered by (dimension, character values).
std::vector<GroupIrrep> group_irreps(const FiniteGroup& g);

std::vector<GroupIrrep> semidirect_irreps(const FiniteGroup& g);
std::vector<GroupIrrep> semidirect_irreps(int p, int q, int alpha);
std::vector<GroupIrrep> cyclic_irreps(const FiniteGroup& g);

struct NumericIrrepOptions {
  std::size_t max_order = 200;
  int attempts = 10;
  double cluster_gap = 1e-6;
  std::uint64_t seed = 0x5eed;
};
std::vector<GroupIrrep> numeric_irreps(const FiniteGroup& g, const NumericIrrepOptions& opt = {});

// Smallest element of the orbit {k alpha^s mod p}.
int semidirect_orbit_label(int p, int q, int alpha, int k);

// Largest deviation from rho(xy) = rho(x)rho(y) and unitarity over all pairs.
double homomorphism_error(const FiniteGroup& g, const GroupIrrep& rho);

// A (possibly reducible) unitary representation split into canonical irreps:
// unitary * rep(k) * unitary^dagger is block diagonal, block b equal to irreps[blocks[b].irrep](k).
struct RepBlock {
  std::size_t irrep = 0;
  std::size_t copy = 0;
  std::size_t offset = 0;
  std::size_t dim = 0;
};
struct BlockDiagonalization {
  Mat unitary;
  std::vector<RepBlock> blocks;
  std::vector<std::size_t> multiplicity;  // per irrep
};

// rep is indexed by element of the group the irreps belong to.
BlockDiagonalization decompose_representation(const std::vector<Mat>& rep,
                                              const std::vector<GroupIrrep>& irreps);

// Restriction of rho (an irrep of the parent of k) to the subgroup k, split into
// k's canonical irreps (computed on k.as_group()).
BlockDiagonalization restrict_block_diagonalize(const GroupIrrep& rho, const Subgroup& k);
BlockDiagonalization restrict_block_diagonalize(const GroupIrrep& rho, const Subgroup& k,
                                                const std::vector<GroupIrrep>& k_irreps);

// Multiplicity <chi, chi_irrep> of each irrep in a character (indexed by element).
std::vector<double> character_multiplicities(const std::vector<cplx>& chi,
                                             const std::vector<GroupIrrep>& irreps);

}  // namespace qdk
