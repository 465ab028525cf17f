// Irreducible representations of D(G): a flux class with representative h and
// a charge, i.e. an irrep rho of the centralizer Z(h).
//
// Basis of V_(h,rho): |m, v> with m a member of the class (by position in the
// sorted member list) and v a basis index of rho. With conjugators k_m chosen
// from the canonical transversal of Z(h) so that k_m h k_m^-1 = m:
//   g h'* |m, v> = [h' == m] |g m g^-1, rho(k_{g m g^-1}^-1 g k_m) v>.
#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qdk/double_algebra.hpp"
#include "qdk/group.hpp"
#include "qdk/group_irreps.hpp"

namespace qdk {

struct FluxSector {
  ConjugacyClass cls;
  Subgroup centralizer;
  FiniteGroup centralizer_group;  // local indexing of the centralizer
  Transversal transversal;        // left transversal of the centralizer in G
  std::vector<Elem> conjugator;   // k_m for each class member position
};

struct DGIrrepLabel {
  std::size_t sector = 0;  // index of the flux class
  std::size_t charge = 0;  // index of the centralizer irrep
  auto operator<=>(const DGIrrepLabel&) const = default;
};

class QuantumDouble {
 public:
  explicit QuantumDouble(FiniteGroup g);

  const FiniteGroup& group() const { return impl_->group; }
  const std::vector<ConjugacyClass>& classes() const { return impl_->classes; }
  const FluxSector& sector(std::size_t s) const { return impl_->sectors[s]->data; }
  std::size_t sector_count() const { return impl_->sectors.size(); }
  std::size_t class_of(Elem x) const { return impl_->class_of[x]; }
  std::size_t member_position(Elem x) const { return impl_->position[x]; }

  // Centralizer irreps of a sector (computed on first use).
  const std::vector<GroupIrrep>& charges(std::size_t sector) const;
  // The trivial charge is available without computing the full irrep list.
  const GroupIrrep& charge_irrep(const DGIrrepLabel& l) const;

  // Every irrep label, ordered by (sector, charge).
  std::vector<DGIrrepLabel> labels() const;
  DGIrrepLabel fluxon(std::size_t sector) const { return {sector, 0}; }

  std::size_t dim(const DGIrrepLabel& l) const;
  std::size_t charge_dim(const DGIrrepLabel& l) const { return charge_irrep(l).dim; }
  Elem flux_rep(const DGIrrepLabel& l) const { return sector(l.sector).cls.representative; }
  std::string describe(const DGIrrepLabel& l) const;

  // Centralizer element k_{g m g^-1}^-1 g k_m, as a local index of the centralizer.
  std::size_t charge_element(std::size_t sector, std::size_t member_pos, Elem g) const;

 private:
  struct SectorCache {
    explicit SectorCache(FluxSector d) : data(std::move(d)) {}
    FluxSector data;
    GroupIrrep trivial;
    mutable std::once_flag once;
    mutable std::vector<GroupIrrep> irreps;
  };
  struct Impl {
    explicit Impl(FiniteGroup g) : group(std::move(g)) {}
    FiniteGroup group;
    std::vector<ConjugacyClass> classes;
    std::vector<std::uint32_t> class_of;
    std::vector<std::uint32_t> position;
    std::vector<std::unique_ptr<SectorCache>> sectors;
  };
  std::shared_ptr<const Impl> impl_;
};

std::vector<DGIrrepLabel> irrep_labels(const QuantumDouble& qd);

// Action of a basis element on a vector of V_Lambda, and the corresponding matrix.
Vec irrep_action(const QuantumDouble& qd, const DGIrrepLabel& l, DGBasis a, const Vec& w);
Mat irrep_matrix(const QuantumDouble& qd, const DGIrrepLabel& l, DGBasis a);
Mat irrep_matrix(const QuantumDouble& qd, const DGIrrepLabel& l, const DGElement& a);
// Action of the group element g = sum_h g h*.
Mat irrep_group_matrix(const QuantumDouble& qd, const DGIrrepLabel& l, Elem g);

// <h>_rho = chi_rho(h) / d_rho.
cplx flux_scalar(const QuantumDouble& qd, const DGIrrepLabel& l);

DGIrrepLabel conjugate_irrep(const QuantumDouble& qd, const DGIrrepLabel& l);
bool is_self_dual(const QuantumDouble& qd, const DGIrrepLabel& l);

}  // namespace qdk
