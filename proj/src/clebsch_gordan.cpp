#include "qdk/clebsch_gordan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qdk/rng.hpp"

namespace qdk {

namespace {

constexpr double kIntegralTolerance = 1e-6;

// One orbit of flux pairs under simultaneous conjugation, moved so that its
// representative (u', v') has total flux v' u' equal to the class representative.
struct PairOrbit {
  Elem coset_rep;
  std::size_t sector;
  Elem first;   // u'
  Elem second;  // v'
  Subgroup stabilizer;  // Z(u') n Z(v'), in local indices of the output centralizer
};

std::vector<PairOrbit> pair_orbits(const QuantumDouble& qd, std::size_t first_class, std::size_t second_class) {
  const FiniteGroup& G = qd.group();
  const FluxSector& s1 = qd.sector(first_class);
  const FluxSector& s2 = qd.sector(second_class);
  const Elem h = s1.cls.representative, g = s2.cls.representative;
  const auto dc = double_coset_reps(G, s2.centralizer, s1.centralizer);
  std::vector<PairOrbit> out;
  for (Elem d : dc.representatives) {
    const Elem u = G.conj(d, h);
    const Elem flux = G.mul(g, u);
    const std::size_t s = qd.class_of(flux);
    const FluxSector& sec = qd.sector(s);
    const Elem c = G.inv(sec.conjugator[qd.member_position(flux)]);
    const Elem up = G.conj(c, u), vp = G.conj(c, g);
    std::vector<Elem> local;
    const auto& members = sec.centralizer.members();
    for (std::size_t k = 0; k < members.size(); ++k)
      if (G.commute(members[k], up) && G.commute(members[k], vp)) local.push_back(Elem(k));
    out.push_back({d, s, up, vp, Subgroup::from_members(sec.centralizer_group, std::move(local))});
  }
  return out;
}

GroupIrrep trivial_irrep(std::size_t order) {
  return {"trivial", 1, std::vector<Mat>(order, Mat::Ones(1, 1))};
}

double integrality_gap(const std::vector<double>& m) {
  double gap = 0;
  for (double x : m) gap = std::max(gap, std::abs(x - std::round(x)));
  return gap;
}

std::size_t rounded(double x) { return std::size_t(std::max(0LL, std::llround(x))); }

Elem global_element(const FluxSector& sec, std::size_t local) { return sec.centralizer.members()[local]; }

std::size_t tensor_dim(const QuantumDouble& qd, const DGIrrepLabel& a, const DGIrrepLabel& b) {
  const std::size_t dim = qd.dim(a) * qd.dim(b);
  if (dim > UnitaryTransform::kDenseLimit)
    throw CapExceeded("tensor product of dimension " + std::to_string(dim) + " exceeds the dense limit " +
                      std::to_string(UnitaryTransform::kDenseLimit));
  return dim;
}

// Summands grouped by label; appends a dimension bookkeeping condition.
void finish_decomposition(const QuantumDouble& qd, CGDecomposition& dec) {
  const std::size_t expected = qd.dim(dec.first) * qd.dim(dec.second);
  const std::size_t got = dec.total_dim();
  dec.conditions.push_back({"dimension", got == expected, double(got > expected ? got - expected : expected - got),
                            std::to_string(got) + " of " + std::to_string(expected)});
}

}  // namespace

// ---------------------------------------------------------------- decompositions

std::size_t CGDecomposition::total_dim() const {
  std::size_t n = 0;
  for (const auto& s : summands) n += s.multiplicity * s.dim;
  return n;
}

bool CGDecomposition::conditions_met() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const CGCondition& c) { return c.satisfied; });
}

std::map<DGIrrepLabel, std::size_t> CGDecomposition::multiplicities() const {
  std::map<DGIrrepLabel, std::size_t> out;
  for (const auto& s : summands) out[s.label] += s.multiplicity;
  return out;
}

CGDecomposition fluxon_cg_decompose(const QuantumDouble& qd, std::size_t first_class, std::size_t second_class) {
  CGDecomposition dec{qd.fluxon(first_class), qd.fluxon(second_class), {}, {}};
  double index_gap = 0;
  for (const auto& orbit : pair_orbits(qd, first_class, second_class)) {
    const FluxSector& sec = qd.sector(orbit.sector);
    const FiniteGroup& z = sec.centralizer_group;
    const auto t = left_transversal(z, orbit.stabilizer);
    // Induced trivial character: number of cosets fixed by x.
    std::vector<cplx> chi(z.order(), 0.0);
    for (Elem x = 0; x < z.order(); ++x)
      for (Elem r : t.representatives)
        if (orbit.stabilizer.contains(z.mul(z.inv(r), z.mul(x, r)))) chi[x] += 1.0;
    const auto& irreps = qd.charges(orbit.sector);
    const auto mult = character_multiplicities(chi, irreps);
    std::size_t weighted = 0;
    for (std::size_t mu = 0; mu < irreps.size(); ++mu) {
      const std::size_t m = rounded(mult[mu]);
      if (m == 0) continue;
      const DGIrrepLabel label{orbit.sector, mu};
      dec.summands.push_back({orbit.coset_rep, label, m, qd.dim(label)});
      weighted += m * irreps[mu].dim;
    }
    index_gap = std::max(index_gap, std::abs(double(weighted) - double(t.representatives.size())));
  }
  dec.conditions.push_back({"index", index_gap == 0, index_gap, "sum of m * d_mu against [Z : stabilizer]"});
  finish_decomposition(qd, dec);
  return dec;
}

CGDecomposition general_cg_decompose(const QuantumDouble& qd, const DGIrrepLabel& first, const DGIrrepLabel& second) {
  const GroupIrrep& rho = qd.charge_irrep(first);
  const GroupIrrep& sigma = qd.charge_irrep(second);
  CGDecomposition dec{first, second, {}, {}};
  CGCondition restriction{"restriction", true, 0, {}};
  CGCondition product{"CG over stabilizer", true, 0, {}};
  CGCondition induction{"induction", true, 0, {}};
  std::ostringstream rdet, pdet, idet;

  for (const auto& orbit : pair_orbits(qd, first.sector, second.sector)) {
    const FluxSector& sec = qd.sector(orbit.sector);
    const Subgroup& k = orbit.stabilizer;
    const FiniteGroup kg = k.as_group();
    const auto k_irreps = group_irreps(kg);
    const std::size_t p1 = qd.member_position(orbit.first), p2 = qd.member_position(orbit.second);

    std::vector<cplx> chi1(k.order()), chi2(k.order()), chi12(k.order());
    for (std::size_t i = 0; i < k.order(); ++i) {
      const Elem z = global_element(sec, k.members()[i]);
      chi1[i] = rho.character(Elem(qd.charge_element(first.sector, p1, z)));
      chi2[i] = sigma.character(Elem(qd.charge_element(second.sector, p2, z)));
      chi12[i] = chi1[i] * chi2[i];
    }
    const double rgap = std::max(integrality_gap(character_multiplicities(chi1, k_irreps)),
                                 integrality_gap(character_multiplicities(chi2, k_irreps)));
    restriction.deviation = std::max(restriction.deviation, rgap);
    rdet << "d=" << orbit.coset_rep << ":" << rgap << " ";

    const auto n = character_multiplicities(chi12, k_irreps);
    const double pgap = integrality_gap(n);
    product.deviation = std::max(product.deviation, pgap);
    pdet << "d=" << orbit.coset_rep << ":" << pgap << " ";

    const auto& out_irreps = qd.charges(orbit.sector);
    std::vector<std::size_t> m(out_irreps.size(), 0);
    for (std::size_t nu = 0; nu < k_irreps.size(); ++nu) {
      const std::size_t copies = rounded(n[nu]);
      if (copies == 0) continue;
      const auto ind = induced_block_diagonalize(k, k_irreps[nu], out_irreps);
      // Frobenius reciprocity as the cross-check on the numeric split.
      std::vector<cplx> chi(sec.centralizer_group.order());
      for (Elem x = 0; x < chi.size(); ++x) chi[x] = induced_matrix(ind.transversal, k_irreps[nu], x).trace();
      const auto expect = character_multiplicities(chi, out_irreps);
      double igap = integrality_gap(expect);
      for (std::size_t mu = 0; mu < out_irreps.size(); ++mu) {
        igap = std::max(igap, std::abs(expect[mu] - double(ind.multiplicity[mu])));
        m[mu] += copies * ind.multiplicity[mu];
      }
      induction.deviation = std::max(induction.deviation, igap);
      idet << "d=" << orbit.coset_rep << "/" << k_irreps[nu].label << ":" << igap << " ";
    }
    for (std::size_t mu = 0; mu < out_irreps.size(); ++mu) {
      if (m[mu] == 0) continue;
      const DGIrrepLabel label{orbit.sector, mu};
      dec.summands.push_back({orbit.coset_rep, label, m[mu], qd.dim(label)});
    }
  }
  for (auto* c : {&restriction, &product, &induction}) c->satisfied = c->deviation < kIntegralTolerance;
  restriction.detail = rdet.str();
  product.detail = pdet.str();
  induction.detail = idet.str();
  dec.conditions = {restriction, product, induction};
  finish_decomposition(qd, dec);
  return dec;
}

// ---------------------------------------------------------------- transforms

std::vector<TargetBlock> CGTransform::target_blocks() const {
  std::vector<TargetBlock> out;
  for (const auto& b : blocks) out.push_back({b.offset, b.dim, double_group.describe(b.label)});
  return out;
}

Mat tensor_action(const QuantumDouble& qd, const DGIrrepLabel& first, const DGIrrepLabel& second, DGBasis a) {
  const FiniteGroup& G = qd.group();
  const auto d1 = Eigen::Index(qd.dim(first)), d2 = Eigen::Index(qd.dim(second));
  Mat out = Mat::Zero(d1 * d2, d1 * d2);
  for (Elem h1 : qd.sector(second.sector).cls.members) {
    const Mat left = irrep_matrix(qd, first, DGBasis{a.g, G.mul(G.inv(h1), a.h)});
    if (left.isZero()) continue;
    out += kron(left, irrep_matrix(qd, second, DGBasis{a.g, h1}));
  }
  return out;
}

Mat tensor_group_matrix(const QuantumDouble& qd, const DGIrrepLabel& first, const DGIrrepLabel& second, Elem g) {
  return kron(irrep_group_matrix(qd, first, g), irrep_group_matrix(qd, second, g));
}

CGTransform cg_transform(const QuantumDouble& qd, const DGIrrepLabel& first, const DGIrrepLabel& second) {
  const FiniteGroup& G = qd.group();
  const std::size_t dim = tensor_dim(qd, first, second);
  const std::size_t d2 = qd.dim(second);
  const std::size_t c1 = qd.charge_dim(first), c2 = qd.charge_dim(second);
  const auto& m1 = qd.sector(first.sector).cls.members;
  const auto& m2 = qd.sector(second.sector).cls.members;
  auto flux = [&](std::size_t i) { return G.mul(m2[(i % d2) / c2], m1[(i / d2) / c1]); };

  // Group matrices of both factors, cached by element.
  std::vector<Mat> g1(G.order()), g2(G.order());
  auto factors = [&](Elem g) -> std::pair<const Mat&, const Mat&> {
    if (g1[g].size() == 0) {
      g1[g] = irrep_group_matrix(qd, first, g);
      g2[g] = irrep_group_matrix(qd, second, g);
    }
    return {g1[g], g2[g]};
  };
  auto act = [&](Elem g, const Vec& v) {
    const auto [a, b] = factors(g);
    const Mat grid = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        v.data(), a.cols(), b.cols());
    const Mat moved = a * grid * b.transpose();
    Vec out(v.size());
    for (Eigen::Index r = 0; r < moved.rows(); ++r)
      for (Eigen::Index c = 0; c < moved.cols(); ++c) out[r * moved.cols() + c] = moved(r, c);
    return out;
  };

  CGTransform out{qd, first, second, Mat::Zero(Eigen::Index(dim), Eigen::Index(dim)), {}};
  std::size_t row = 0;
  for (std::size_t s = 0; s < qd.sector_count(); ++s) {
    const FluxSector& sec = qd.sector(s);
    const Elem f0 = sec.cls.representative;
    std::vector<std::size_t> w;
    for (std::size_t i = 0; i < dim; ++i)
      if (flux(i) == f0) w.push_back(i);
    if (w.empty()) continue;

    const auto n = Eigen::Index(w.size());
    std::vector<Mat> rep;
    rep.reserve(sec.centralizer.order());
    for (Elem z : sec.centralizer.members()) {
      const auto [a, b] = factors(z);
      Mat m(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          const auto ri = Eigen::Index(w[i]), rj = Eigen::Index(w[j]);
          const auto dd = Eigen::Index(d2);
          m(i, j) = a(ri / dd, rj / dd) * b(ri % dd, rj % dd);
        }
      rep.push_back(std::move(m));
    }
    const auto split = decompose_representation(rep, qd.charges(s));
    const Mat basis = split.unitary.adjoint();
    for (const auto& blk : split.blocks) {
      const DGIrrepLabel label{s, blk.irrep};
      out.blocks.push_back({label, row, qd.dim(label), blk.copy, 0});
      for (std::size_t m = 0; m < sec.cls.members.size(); ++m)
        for (std::size_t i = 0; i < blk.dim; ++i) {
          Vec v = Vec::Zero(Eigen::Index(dim));
          for (Eigen::Index j = 0; j < n; ++j) v[Eigen::Index(w[j])] = basis(j, Eigen::Index(blk.offset + i));
          out.unitary.row(Eigen::Index(row++)) = act(sec.conjugator[m], v).adjoint();
        }
    }
  }
  if (row != dim) throw GroupError("cg_transform: output blocks do not fill the tensor product");
  return out;
}

CGTransform fluxon_cg_transform(const QuantumDouble& qd, std::size_t first_class, std::size_t second_class) {
  const FiniteGroup& G = qd.group();
  const DGIrrepLabel first = qd.fluxon(first_class), second = qd.fluxon(second_class);
  const std::size_t dim = tensor_dim(qd, first, second);
  const auto& m1 = qd.sector(first_class).cls.members;
  const auto& m2 = qd.sector(second_class).cls.members;
  const std::size_t n2 = m2.size();
  auto pair_index = [&](Elem u, Elem v) { return qd.member_position(u) * n2 + qd.member_position(v); };

  const auto orbits = pair_orbits(qd, first_class, second_class);
  // For every pair: its orbit and an element carrying the orbit representative to it.
  constexpr std::size_t kUnset = ~std::size_t(0);
  std::vector<std::size_t> orbit_of(dim, kUnset);
  std::vector<Elem> carrier(dim, 0);
  for (std::size_t o = 0; o < orbits.size(); ++o)
    for (Elem a = 0; a < G.order(); ++a) {
      const std::size_t i = pair_index(G.conj(a, orbits[o].first), G.conj(a, orbits[o].second));
      if (orbit_of[i] != kUnset) continue;
      orbit_of[i] = o;
      carrier[i] = a;
    }

  CGTransform out{qd, first, second, Mat::Zero(Eigen::Index(dim), Eigen::Index(dim)), {}};
  std::size_t row = 0;
  for (std::size_t o = 0; o < orbits.size(); ++o) {
    const auto& orbit = orbits[o];
    const FluxSector& sec = qd.sector(orbit.sector);
    const auto& irreps = qd.charges(orbit.sector);
    const auto ind = induced_block_diagonalize(orbit.stabilizer, trivial_irrep(orbit.stabilizer.order()), irreps);
    const Mat v = ind.transform.materialize();

    // Step 1: pair -> (flux position m, coset t) with pair = k_m t (u', v') t^-1 k_m^-1.
    const std::size_t members = sec.cls.members.size();
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_flux(members);
    for (std::size_t i = 0; i < dim; ++i) {
      if (orbit_of[i] != o) continue;
      const Elem total = G.mul(m2[i % n2], m1[i / n2]);
      const std::size_t m = qd.member_position(total);
      const Elem z = G.mul(G.inv(sec.conjugator[m]), carrier[i]);
      const std::size_t t = ind.transversal.coset_of[*sec.centralizer.local_index(z)];
      by_flux[m].push_back({i, t});
    }

    // Step 2: the induced split on t, rows ordered (mu, copy, m, i).
    std::size_t offset = 0;
    for (std::size_t mu = 0; mu < irreps.size(); ++mu)
      for (std::size_t c = 0; c < ind.multiplicity[mu]; ++c) {
        const DGIrrepLabel label{orbit.sector, mu};
        out.blocks.push_back({label, row, qd.dim(label), c, orbit.coset_rep});
        for (std::size_t m = 0; m < members; ++m)
          for (std::size_t i = 0; i < irreps[mu].dim; ++i) {
            for (const auto& [pair, t] : by_flux[m])
              out.unitary(Eigen::Index(row), Eigen::Index(pair)) = v(Eigen::Index(offset + i), Eigen::Index(t));
            ++row;
          }
        offset += irreps[mu].dim;
      }
  }
  if (row != dim) throw GroupError("fluxon_cg_transform: output blocks do not fill the tensor product");
  return out;
}

CGTransform zpzq_cg_transform(const QuantumDouble& qd, int k, int l) {
  const FiniteGroup& G = qd.group();
  if (G.kind() != GroupKind::semidirect) throw GroupError("zpzq_cg_transform needs a Z_p x| Z_q group");
  const auto [p, q, alpha] = G.semidirect_params();
  auto canonical = [&](int x) { return x > 0 && x < p && semidirect_orbit_label(p, q, alpha, x) == x; };
  if (!canonical(k) || !canonical(l))
    throw GroupError("invalid labels: rho_" + std::to_string(k) + ", rho_" + std::to_string(l) +
                     " are not canonical orbit labels mod " + std::to_string(p));

  const std::size_t e_sector = qd.class_of(0);
  const auto& charges = qd.charges(e_sector);
  auto charge_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < charges.size(); ++i)
      if (charges[i].label == name) return i;
    throw GroupError("no charge named " + name);
  };
  const DGIrrepLabel first{e_sector, charge_of("rho" + std::to_string(k))};
  const DGIrrepLabel second{e_sector, charge_of("rho" + std::to_string(l))};

  std::vector<int> apow(std::size_t(q), 1);
  for (int u = 1; u < q; ++u) apow[std::size_t(u)] = apow[std::size_t(u - 1)] * alpha % p;

  const auto n = Eigen::Index(q) * Eigen::Index(q);
  CGTransform out{qd, first, second, Mat::Zero(n, n), {}};
  auto input = [&](int s, int t) { return Eigen::Index(((s % q + q) % q) * q + ((t % q + q) % q)); };
  Eigen::Index row = 0;
  // In sector u = t - s the pair carries rho_c on |t> with c = k alpha^u + l.
  for (int u = 0; u < q; ++u) {
    const int c = int((long long)k * apow[std::size_t(u)] % p + l) % p;
    if (c != 0) {
      const int c0 = semidirect_orbit_label(p, q, alpha, c);
      int r = 0;
      while ((long long)c0 * apow[std::size_t(r)] % p != c) ++r;
      const DGIrrepLabel label{e_sector, charge_of("rho" + std::to_string(c0))};
      out.blocks.push_back({label, std::size_t(row), std::size_t(q), 0, 0});
      for (int t = 0; t < q; ++t) out.unitary(row + Eigen::Index(t), input(t + r - u, t + r)) = 1.0;
      row += q;
    } else {
      const double norm = 1.0 / std::sqrt(double(q));
      for (int j = 0; j < q; ++j) {
        const DGIrrepLabel label{e_sector, std::size_t(j)};
        out.blocks.push_back({label, std::size_t(row), 1, 0, 0});
        for (int t = 0; t < q; ++t)
          out.unitary(row, input(t - u, t)) = norm * std::polar(1.0, 2 * std::numbers::pi * j * t / q);
        ++row;
      }
    }
  }
  // Copies of a repeated label are numbered in order of appearance.
  std::map<DGIrrepLabel, std::size_t> seen;
  for (auto& b : out.blocks) b.copy = seen[b.label]++;
  return out;
}

CGTransform zpzq_cg_transform(int p, int q, int alpha, int k, int l) {
  return zpzq_cg_transform(QuantumDouble(FiniteGroup::semidirect(p, q, alpha)), k, l);
}

double cg_intertwining_error(const CGTransform& t) {
  const QuantumDouble& qd = t.double_group;
  const FiniteGroup& G = qd.group();
  const Mat& u = t.unitary;
  const auto dim = u.rows();

  auto expected = [&](auto&& block) {
    Mat m = Mat::Zero(dim, dim);
    for (const auto& b : t.blocks)
      m.block(Eigen::Index(b.offset), Eigen::Index(b.offset), Eigen::Index(b.dim), Eigen::Index(b.dim)) =
          block(b.label);
    return m;
  };
  std::vector<Mat> group_err(G.order()), group_exp(G.order()), dual_err(G.order()), dual_exp(G.order());
  double err = 0;
  for (Elem x = 0; x < G.order(); ++x) {
    group_err[x] = u * tensor_group_matrix(qd, t.first, t.second, x) * u.adjoint();
    group_exp[x] = expected([&](const DGIrrepLabel& l) { return irrep_group_matrix(qd, l, x); });
    dual_err[x] = u * tensor_action(qd, t.first, t.second, DGBasis{0, x}) * u.adjoint();
    dual_exp[x] = expected([&](const DGIrrepLabel& l) { return irrep_matrix(qd, l, DGBasis{0, x}); });
    err = std::max({err, max_abs(group_err[x] - group_exp[x]), max_abs(dual_err[x] - dual_exp[x])});
  }
  const double cost = double(G.order()) * double(G.order()) * std::pow(double(dim), 3);
  if (cost > 4e9) return err;
  // g h* = g (e h*), so each basis element is a product of the two checked families.
  for (Elem g = 0; g < G.order(); ++g)
    for (Elem h = 0; h < G.order(); ++h)
      err = std::max(err, max_abs(group_err[g] * dual_err[h] - group_exp[g] * dual_exp[h]));
  return err;
}

FusionOutcome fuse(const CGTransform& t, const Vec& state, std::uint64_t seed) {
  if (state.size() != t.unitary.cols()) throw GroupError("fuse: state dimension mismatch");
  const double norm = state.norm();
  if (!(norm > 0)) throw GroupError("fuse: zero-norm state");
  const Vec out = t.unitary * (state / norm);

  FusionOutcome res;
  for (const auto& b : t.blocks) {
    const double w = out.segment(Eigen::Index(b.offset), Eigen::Index(b.dim)).squaredNorm();
    auto it = std::find_if(res.distribution.begin(), res.distribution.end(),
                           [&](const auto& e) { return e.first == b.label; });
    if (it == res.distribution.end())
      res.distribution.push_back({b.label, w});
    else
      it->second += w;
  }
  CounterRng rng(seed, 0);
  const double r = rng.uniform();
  double acc = 0;
  std::size_t pick = 0;
  for (; pick + 1 < res.distribution.size(); ++pick) {
    acc += res.distribution[pick].second;
    if (r < acc) break;
  }
  res.label = res.distribution[pick].first;
  res.probability = res.distribution[pick].second;
  res.state = Vec::Zero(out.size());
  for (const auto& b : t.blocks)
    if (b.label == res.label)
      res.state.segment(Eigen::Index(b.offset), Eigen::Index(b.dim)) =
          out.segment(Eigen::Index(b.offset), Eigen::Index(b.dim));
  const double kept = res.state.norm();
  if (kept > 0) res.state /= kept;
  return res;
}

}  // namespace qdk
