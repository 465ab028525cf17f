#include "qdk/dg_irreps.hpp"

#include <cmath>

namespace qdk {

QuantumDouble::QuantumDouble(FiniteGroup g) {
  auto impl = std::make_shared<Impl>(g);
  impl->classes = conjugacy_classes(g);
  impl->class_of = class_lookup(g, impl->classes);
  impl->position.assign(g.order(), 0);
  for (const auto& c : impl->classes)
    for (std::size_t i = 0; i < c.members.size(); ++i) impl->position[c.members[i]] = std::uint32_t(i);

  for (const auto& c : impl->classes) {
    auto cache = std::make_unique<SectorCache>(
        FluxSector{c, centralizer(g, c.representative), g, {Subgroup::whole(g), {}, {}}, {}});
    FluxSector& s = cache->data;
    s.centralizer_group = s.centralizer.as_group();
    s.transversal = left_transversal(g, s.centralizer);
    s.conjugator.assign(c.members.size(), 0);
    std::vector<std::uint8_t> done(c.members.size(), 0);
    for (Elem t : s.transversal.representatives) {
      const auto pos = impl->position[g.conj(t, c.representative)];
      if (!done[pos]) {
        s.conjugator[pos] = t;
        done[pos] = 1;
      }
    }
    cache->trivial = GroupIrrep{"trivial", 1,
                                std::vector<Mat>(s.centralizer.order(), Mat::Identity(1, 1))};
    impl->sectors.push_back(std::move(cache));
  }
  impl_ = std::move(impl);
}

const std::vector<GroupIrrep>& QuantumDouble::charges(std::size_t sector) const {
  const SectorCache& c = *impl_->sectors.at(sector);
  std::call_once(c.once, [&c] { c.irreps = group_irreps(c.data.centralizer_group); });
  return c.irreps;
}

const GroupIrrep& QuantumDouble::charge_irrep(const DGIrrepLabel& l) const {
  if (l.charge == 0) return impl_->sectors.at(l.sector)->trivial;
  return charges(l.sector).at(l.charge);
}

std::vector<DGIrrepLabel> QuantumDouble::labels() const {
  std::vector<DGIrrepLabel> out;
  for (std::size_t s = 0; s < sector_count(); ++s)
    for (std::size_t c = 0; c < charges(s).size(); ++c) out.push_back({s, c});
  return out;
}

std::size_t QuantumDouble::dim(const DGIrrepLabel& l) const {
  return sector(l.sector).cls.members.size() * charge_dim(l);
}

std::string QuantumDouble::describe(const DGIrrepLabel& l) const {
  return "(" + group().element_label(flux_rep(l)) + ", " + charge_irrep(l).label + ")";
}

std::size_t QuantumDouble::charge_element(std::size_t sector_index, std::size_t member_pos, Elem g) const {
  const FiniteGroup& G = group();
  const FluxSector& s = sector(sector_index);
  const Elem m = s.cls.members[member_pos];
  const std::size_t target = member_position(G.conj(g, m));
  const Elem z = G.mul(G.mul(G.inv(s.conjugator[target]), g), s.conjugator[member_pos]);
  return *s.centralizer.local_index(z);
}

std::vector<DGIrrepLabel> irrep_labels(const QuantumDouble& qd) { return qd.labels(); }

Mat irrep_matrix(const QuantumDouble& qd, const DGIrrepLabel& l, DGBasis a) {
  const FiniteGroup& G = qd.group();
  const FluxSector& s = qd.sector(l.sector);
  const GroupIrrep& rho = qd.charge_irrep(l);
  const auto d = Eigen::Index(rho.dim);
  const auto n = Eigen::Index(s.cls.members.size());
  Mat out = Mat::Zero(n * d, n * d);
  for (Eigen::Index c = 0; c < n; ++c) {
    const Elem m = s.cls.members[std::size_t(c)];
    if (a.h != m) continue;
    const auto target = Eigen::Index(qd.member_position(G.conj(a.g, m)));
    out.block(target * d, c * d, d, d) = rho(Elem(qd.charge_element(l.sector, std::size_t(c), a.g)));
  }
  return out;
}

Mat irrep_matrix(const QuantumDouble& qd, const DGIrrepLabel& l, const DGElement& a) {
  const auto dim = Eigen::Index(qd.dim(l));
  Mat out = Mat::Zero(dim, dim);
  for (const auto& [b, c] : a.terms()) out += c * irrep_matrix(qd, l, b);
  return out;
}

Mat irrep_group_matrix(const QuantumDouble& qd, const DGIrrepLabel& l, Elem g) {
  const FiniteGroup& G = qd.group();
  const FluxSector& s = qd.sector(l.sector);
  const GroupIrrep& rho = qd.charge_irrep(l);
  const auto d = Eigen::Index(rho.dim);
  const auto n = Eigen::Index(s.cls.members.size());
  Mat out = Mat::Zero(n * d, n * d);
  for (Eigen::Index c = 0; c < n; ++c) {
    const Elem m = s.cls.members[std::size_t(c)];
    const auto target = Eigen::Index(qd.member_position(G.conj(g, m)));
    out.block(target * d, c * d, d, d) = rho(Elem(qd.charge_element(l.sector, std::size_t(c), g)));
  }
  return out;
}

Vec irrep_action(const QuantumDouble& qd, const DGIrrepLabel& l, DGBasis a, const Vec& w) {
  if (std::size_t(w.size()) != qd.dim(l)) throw GroupError("irrep_action: dimension mismatch");
  return irrep_matrix(qd, l, a) * w;
}

cplx flux_scalar(const QuantumDouble& qd, const DGIrrepLabel& l) {
  const GroupIrrep& rho = qd.charge_irrep(l);
  const FluxSector& s = qd.sector(l.sector);
  const auto local = *s.centralizer.local_index(s.cls.representative);
  return rho.character(Elem(local)) / double(rho.dim);
}

DGIrrepLabel conjugate_irrep(const QuantumDouble& qd, const DGIrrepLabel& l) {
  const FiniteGroup& G = qd.group();
  const FluxSector& s = qd.sector(l.sector);
  const Elem hinv = G.inv(s.cls.representative);
  const std::size_t target = qd.class_of(hinv);
  if (l.charge == 0) return {target, 0};
  const FluxSector& t = qd.sector(target);
  // k maps the target representative to h^-1; transport conj(rho) along it.
  const Elem k = t.conjugator[qd.member_position(hinv)];
  const GroupIrrep& rho = qd.charge_irrep(l);
  std::vector<cplx> chi(t.centralizer.order());
  for (std::size_t z = 0; z < chi.size(); ++z) {
    const Elem moved = G.conj(k, t.centralizer.members()[z]);
    chi[z] = std::conj(rho.character(Elem(*s.centralizer.local_index(moved))));
  }
  const auto& candidates = qd.charges(target);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (candidates[c].dim != rho.dim) continue;
    double diff = 0;
    for (std::size_t z = 0; z < chi.size(); ++z)
      diff = std::max(diff, std::abs(candidates[c].character(Elem(z)) - chi[z]));
    if (diff < 1e-6) return {target, c};
  }
  throw GroupError("conjugate_irrep: no matching centralizer irrep");
}

bool is_self_dual(const QuantumDouble& qd, const DGIrrepLabel& l) { return conjugate_irrep(qd, l) == l; }

}  // namespace qdk
