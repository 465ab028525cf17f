#include "qdk/fourier.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "qdk/rng.hpp"

namespace qdk {

// ---------------------------------------------------------------- UnitaryTransform

UnitaryTransform UnitaryTransform::dense(Mat m, std::vector<TargetBlock> blocks) {
  UnitaryTransform u(std::size_t(m.rows()));
  u.stages_.emplace_back(std::move(m));
  u.blocks_ = std::move(blocks);
  return u;
}

namespace {

template <class F>
void for_each_digit_slice(std::size_t dim, std::size_t radix, std::size_t stride, F&& f) {
  const std::size_t span = radix * stride;
  for (std::size_t hi = 0; hi < dim; hi += span)
    for (std::size_t lo = 0; lo < stride; ++lo) f(hi + lo);
}

Vec apply_digit(const UnitaryTransform::Digit& d, const Vec& v, bool adjoint, std::size_t dim) {
  const auto radix = std::size_t(d.matrix.rows());
  Vec out(v.size());
  Vec slice(static_cast<Eigen::Index>(radix));
  for_each_digit_slice(dim, radix, d.stride, [&](std::size_t base) {
    for (std::size_t a = 0; a < radix; ++a) slice[Eigen::Index(a)] = v[Eigen::Index(base + a * d.stride)];
    const Vec r = adjoint ? Vec(d.matrix.adjoint() * slice) : Vec(d.matrix * slice);
    for (std::size_t a = 0; a < radix; ++a) out[Eigen::Index(base + a * d.stride)] = r[Eigen::Index(a)];
  });
  return out;
}

}  // namespace

Vec UnitaryTransform::apply(const Vec& v) const {
  if (std::size_t(v.size()) != dim_) throw GroupError("UnitaryTransform: dimension mismatch");
  Vec cur = v;
  for (const auto& stage : stages_) {
    if (const auto* p = std::get_if<Permutation>(&stage)) {
      Vec out(cur.size());
      for (std::size_t i = 0; i < dim_; ++i) out[Eigen::Index(p->target[i])] = cur[Eigen::Index(i)];
      cur = std::move(out);
    } else if (const auto* b = std::get_if<BlockDiagonal>(&stage)) {
      for (const auto& blk : b->blocks) {
        const auto n = blk.matrix->rows();
        cur.segment(Eigen::Index(blk.offset), n) = *blk.matrix * cur.segment(Eigen::Index(blk.offset), n);
      }
    } else if (const auto* d = std::get_if<Digit>(&stage)) {
      cur = apply_digit(*d, cur, false, dim_);
    } else {
      cur = std::get<Mat>(stage) * cur;
    }
  }
  return cur;
}

Vec UnitaryTransform::apply_inverse(const Vec& v) const {
  if (std::size_t(v.size()) != dim_) throw GroupError("UnitaryTransform: dimension mismatch");
  Vec cur = v;
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
    const auto& stage = *it;
    if (const auto* p = std::get_if<Permutation>(&stage)) {
      Vec out(cur.size());
      for (std::size_t i = 0; i < dim_; ++i) out[Eigen::Index(i)] = cur[Eigen::Index(p->target[i])];
      cur = std::move(out);
    } else if (const auto* b = std::get_if<BlockDiagonal>(&stage)) {
      for (const auto& blk : b->blocks) {
        const auto n = blk.matrix->rows();
        cur.segment(Eigen::Index(blk.offset), n) =
            blk.matrix->adjoint() * cur.segment(Eigen::Index(blk.offset), n);
      }
    } else if (const auto* d = std::get_if<Digit>(&stage)) {
      cur = apply_digit(*d, cur, true, dim_);
    } else {
      cur = std::get<Mat>(stage).adjoint() * cur;
    }
  }
  return cur;
}

Mat UnitaryTransform::materialize() const {
  if (dim_ > kDenseLimit)
    throw CapExceeded("dense transform of dimension " + std::to_string(dim_) + " exceeds cap " +
                      std::to_string(kDenseLimit));
  if (stages_.size() == 1)
    if (const auto* m = std::get_if<Mat>(&stages_.front())) return *m;
  Mat out(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (std::size_t c = 0; c < dim_; ++c) out.col(Eigen::Index(c)) = apply(Vec::Unit(Eigen::Index(dim_), Eigen::Index(c)));
  return out;
}

double off_block_mass(const Mat& m, const std::vector<TargetBlock>& blocks) {
  std::vector<std::size_t> block_of(std::size_t(m.rows()), ~std::size_t(0));
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t i = 0; i < blocks[b].dim; ++i) block_of[blocks[b].offset + i] = b;
  double worst = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (block_of[std::size_t(r)] != block_of[std::size_t(c)]) worst = std::max(worst, std::abs(m(r, c)));
  return worst;
}

// ---------------------------------------------------------------- group QFT

Mat qft_matrix(const std::vector<GroupIrrep>& irreps, std::size_t order) {
  Mat f = Mat::Zero(Eigen::Index(order), Eigen::Index(order));
  Eigen::Index row = 0;
  for (const auto& rho : irreps) {
    const double scale = std::sqrt(double(rho.dim) / double(order));
    const auto d = Eigen::Index(rho.dim);
    for (Elem g = 0; g < order; ++g)
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) f(row + j * d + i, g) = scale * rho(g)(i, j);
    row += d * d;
  }
  if (std::size_t(row) != order) throw GroupError("qft_matrix: irreps do not exhaust the group algebra");
  return f;
}

UnitaryTransform centralizer_qft(const FiniteGroup& h, const std::vector<GroupIrrep>& irreps) {
  std::vector<TargetBlock> blocks;
  std::size_t off = 0;
  for (const auto& rho : irreps)
    for (std::size_t j = 0; j < rho.dim; ++j) {
      blocks.push_back({off, rho.dim, rho.label + "/" + std::to_string(j)});
      off += rho.dim;
    }
  return UnitaryTransform::dense(qft_matrix(irreps, h.order()), std::move(blocks));
}

UnitaryTransform centralizer_qft(const FiniteGroup& h) { return centralizer_qft(h, group_irreps(h)); }

Mat left_regular_matrix(const FiniteGroup& g, Elem x) {
  const auto n = Eigen::Index(g.order());
  Mat m = Mat::Zero(n, n);
  for (Elem y = 0; y < g.order(); ++y) m(g.mul(x, y), y) = 1.0;
  return m;
}

// ---------------------------------------------------------------- wreath products

WreathProduct::WreathProduct(int k, int l) : k_(k), l_(l), base_(1), sym_(FiniteGroup::symmetric(std::max(l, 1))) {
  if (k < 1 || l < 1) throw GroupError("wreath product needs k, l >= 1");
  for (int c = 0; c < l; ++c) {
    base_ *= std::size_t(k);
    if (base_ > kOrderLimit) break;
  }
  if (base_ > kOrderLimit || base_ * sym_.order() > kOrderLimit)
    throw CapExceeded("wreath product Z_" + std::to_string(k) + " wr S_" + std::to_string(l) +
                      " exceeds order cap " + std::to_string(kOrderLimit));
}

std::vector<int> WreathProduct::digits(std::size_t code) const {
  std::vector<int> z(static_cast<std::size_t>(l_));
  for (auto& d : z) {
    d = int(code % std::size_t(k_));
    code /= std::size_t(k_);
  }
  return z;
}

std::size_t WreathProduct::code(const std::vector<int>& z) const {
  std::size_t c = 0;
  for (auto it = z.rbegin(); it != z.rend(); ++it) c = c * std::size_t(k_) + std::size_t(((*it % k_) + k_) % k_);
  return c;
}

std::vector<int> WreathProduct::act(Elem pi, const std::vector<int>& v) const {
  const Perm& p = sym_.permutation(pi);
  std::vector<int> r(v.size());
  for (std::size_t c = 0; c < v.size(); ++c) r[p[c]] = v[c];
  return r;
}

std::size_t WreathProduct::mul(std::size_t a, std::size_t b) const {
  const Elem pa = Elem(a / base_), pb = Elem(b / base_);
  auto z = digits(a % base_);
  const auto y = act(pa, digits(b % base_));
  for (std::size_t c = 0; c < z.size(); ++c) z[c] += y[c];
  return element(z, sym_.mul(pa, pb));
}

namespace {

Perm wreath_point_permutation(const WreathProduct& w, std::size_t x) {
  const int k = w.k();
  const auto z = w.digits(x % w.base_order());
  const Perm& pi = w.symmetric().permutation(Elem(x / w.base_order()));
  Perm p(static_cast<std::size_t>(k * w.l()));
  for (int c = 0; c < w.l(); ++c)
    for (int a = 0; a < k; ++a) {
      const int pc = pi[std::size_t(c)];
      p[std::size_t(c * k + a)] = std::uint8_t(pc * k + (a + z[std::size_t(pc)]) % k);
    }
  return p;
}

}  // namespace

FiniteGroup WreathProduct::permutation_group() const {
  if (k_ * l_ > 16) throw CapExceeded("wreath permutation group needs k*l <= 16");
  std::vector<Perm> gens;
  std::vector<int> e0(std::size_t(l_), 0);
  e0[0] = 1;
  gens.push_back(wreath_point_permutation(*this, element(e0, 0)));
  for (Elem s : sym_.generators()) gens.push_back(wreath_point_permutation(*this, std::size_t(s) * base_));
  return FiniteGroup::from_permutations(k_ * l_, gens, "Z" + std::to_string(k_) + "wrS" + std::to_string(l_));
}

Elem WreathProduct::to_permutation_group(const FiniteGroup& pg, std::size_t x) const {
  const auto e = pg.find(wreath_point_permutation(*this, x));
  if (!e) throw GroupError("wreath element not found in permutation group");
  return *e;
}

WreathQft wreath_qft(int k, int l) {
  WreathProduct w(k, l);
  const FiniteGroup& sym = w.symmetric();
  const std::size_t base = w.base_order();
  const std::size_t fact = sym.order();
  const std::size_t n = w.order();

  // Orbits of character labels under S_l, keyed by the sorted tuple.
  std::map<std::size_t, std::vector<std::size_t>> orbit_members;
  for (std::size_t c = 0; c < base; ++c) {
    auto d = w.digits(c);
    std::sort(d.begin(), d.end());
    orbit_members[w.code(d)].push_back(c);
  }

  struct Orbit {
    std::vector<int> rep;
    std::vector<std::size_t> members;
    Subgroup stabilizer;
    FiniteGroup stab_group;
    std::vector<GroupIrrep> irreps;
    std::shared_ptr<const Mat> qft;
    std::vector<std::size_t> qft_offset;  // row offset of each irrep inside the stabilizer QFT
    std::vector<std::size_t> offset;      // target offset of each irrep inside the orbit
    std::vector<Elem> transport;          // tau_omega per member
    std::vector<std::size_t> coset_of;    // right coset index of u in S_l
    std::vector<std::size_t> local_of;    // stabilizer local index of s' = u r^-1
    std::size_t cosets = 0;
    std::size_t base_offset = 0;
  };
  std::vector<Orbit> orbits;
  std::vector<std::size_t> orbit_of(base), pos_of(base);
  std::size_t running = 0;
  for (const auto& [rep_code, members] : orbit_members) {
    const auto rep = w.digits(rep_code);
    std::vector<Elem> stab;
    for (Elem s = 0; s < fact; ++s)
      if (w.act(s, rep) == rep) stab.push_back(s);
    Subgroup sub = Subgroup::from_members(sym, stab);
    FiniteGroup sg = sub.as_group();
    Orbit o{rep, members, sub, sg, group_irreps(sg), nullptr, {}, {}, {}, {}, {}, 0, running};
    o.qft = std::make_shared<const Mat>(qft_matrix(o.irreps, sg.order()));
    o.cosets = fact / sub.order();
    std::size_t qoff = 0, off = 0;
    for (const auto& lam : o.irreps) {
      o.qft_offset.push_back(qoff);
      o.offset.push_back(off);
      qoff += lam.dim * lam.dim;
      off += lam.dim * lam.dim * o.cosets * members.size();
    }
    o.transport.assign(members.size(), 0);
    std::vector<std::uint8_t> have(members.size(), 0);
    for (Elem s = 0; s < fact; ++s) {
      const std::size_t c = w.code(w.act(s, rep));
      const auto pos = std::size_t(std::lower_bound(members.begin(), members.end(), c) - members.begin());
      if (!have[pos]) {
        o.transport[pos] = s;
        have[pos] = 1;
      }
    }
    constexpr std::size_t kUnset = ~std::size_t(0);
    o.coset_of.assign(fact, kUnset);
    o.local_of.assign(fact, 0);
    std::size_t next_coset = 0;
    for (Elem u = 0; u < fact; ++u) {
      if (o.coset_of[u] != kUnset) continue;
      const std::size_t r = next_coset++;
      for (std::size_t q = 0; q < sub.order(); ++q) {
        const Elem su = sym.mul(sub.members()[q], u);
        o.coset_of[su] = r;
        o.local_of[su] = q;
      }
    }
    for (std::size_t p = 0; p < members.size(); ++p) {
      orbit_of[members[p]] = orbits.size();
      pos_of[members[p]] = p;
    }
    running += members.size() * fact;
    orbits.push_back(std::move(o));
  }

  UnitaryTransform t(n);
  // Stage 1: QFT over Z_k^l, one digit at a time.
  Mat dft(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const double ang = 2.0 * std::numbers::pi * double(a * b % k) / double(k);
      dft(a, b) = cplx(std::cos(ang), std::sin(ang)) / std::sqrt(double(k));
    }
  std::size_t stride = 1;
  for (int c = 0; c < l; ++c) {
    t.add_stage(UnitaryTransform::Digit{stride, dft});
    stride *= std::size_t(k);
  }
  // Stage 2: |omega, pi> -> |orbit, omega, r, s'> with tau_omega^-1 pi = s' r.
  UnitaryTransform::Permutation relabel{std::vector<std::size_t>(n)};
  for (Elem pi = 0; pi < fact; ++pi)
    for (std::size_t c = 0; c < base; ++c) {
      const Orbit& o = orbits[orbit_of[c]];
      const std::size_t pos = pos_of[c];
      const Elem u = sym.mul(sym.inv(o.transport[pos]), pi);
      const std::size_t r = o.coset_of[u];
      relabel.target[std::size_t(pi) * base + c] =
          o.base_offset + (pos * o.cosets + r) * o.stabilizer.order() + o.local_of[u];
    }
  t.add_stage(std::move(relabel));
  // Stage 3: QFT over the stabilizer on s'.
  UnitaryTransform::BlockDiagonal qfts;
  for (const Orbit& o : orbits)
    for (std::size_t pos = 0; pos < o.members.size(); ++pos)
      for (std::size_t r = 0; r < o.cosets; ++r)
        qfts.blocks.push_back({o.base_offset + (pos * o.cosets + r) * o.stabilizer.order(), o.qft});
  t.add_stage(std::move(qfts));
  // Stage 4: reorder to (orbit, lambda, j, r, omega, i).
  UnitaryTransform::Permutation reorder{std::vector<std::size_t>(n)};
  std::vector<TargetBlock> blocks;
  for (std::size_t oi = 0; oi < orbits.size(); ++oi) {
    const Orbit& o = orbits[oi];
    const std::size_t size = o.members.size();
    for (std::size_t li = 0; li < o.irreps.size(); ++li) {
      const std::size_t d = o.irreps[li].dim;
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t r = 0; r < o.cosets; ++r) {
          const std::size_t block_off = o.base_offset + o.offset[li] + (j * o.cosets + r) * size * d;
          blocks.push_back({block_off, size * d,
                            "orbit" + std::to_string(oi) + "/" + o.irreps[li].label + "/" + std::to_string(j) +
                                "/r" + std::to_string(r)});
          for (std::size_t pos = 0; pos < size; ++pos)
            for (std::size_t i = 0; i < d; ++i) {
              const std::size_t src =
                  o.base_offset + (pos * o.cosets + r) * o.stabilizer.order() + o.qft_offset[li] + j * d + i;
              reorder.target[src] = block_off + pos * d + i;
            }
        }
    }
  }
  t.add_stage(std::move(reorder));
  t.set_blocks(std::move(blocks));
  return {std::move(w), std::move(t)};
}

// ---------------------------------------------------------------- D(G) QFT

DGQft::DGQft(QuantumDouble qd) : qd_(std::move(qd)) {
  const FiniteGroup& G = qd_.group();
  const std::size_t n = G.order();
  const std::size_t dim = n * n;
  std::vector<std::shared_ptr<const Mat>> shared;
  for (std::size_t s = 0; s < qd_.sector_count(); ++s) {
    const FluxSector& sec = qd_.sector(s);
    const auto& irreps = qd_.charges(s);
    sector_qft_.push_back(qft_matrix(irreps, sec.centralizer.order()));
    shared.push_back(std::make_shared<const Mat>(sector_qft_.back()));
    std::vector<std::size_t> off;
    std::size_t o = 0;
    for (const auto& r : irreps) {
      off.push_back(o);
      o += r.dim * r.dim * sec.cls.members.size();
    }
    offset_.push_back(std::move(off));
  }

  transform_ = UnitaryTransform(dim);
  // Stage 1: |g, h*> -> |h*, t, z>.
  UnitaryTransform::Permutation factor{std::vector<std::size_t>(dim)};
  for (Elem h = 0; h < n; ++h) {
    const std::size_t s = qd_.class_of(h);
    const FluxSector& sec = qd_.sector(s);
    const Elem k = sec.conjugator[qd_.member_position(h)];
    const std::size_t zsize = sec.centralizer.order();
    for (Elem g = 0; g < n; ++g) {
      const std::size_t p = qd_.member_position(G.conj(g, h));
      const Elem z0 = G.mul(G.mul(G.inv(sec.conjugator[p]), g), k);
      factor.target[regular_index(n, g, h)] = std::size_t(h) * n + p * zsize + *sec.centralizer.local_index(z0);
    }
  }
  transform_.add_stage(std::move(factor));
  // Stage 2: centralizer QFT on z, conditioned on h.
  UnitaryTransform::BlockDiagonal qfts;
  for (Elem h = 0; h < n; ++h) {
    const std::size_t s = qd_.class_of(h);
    const std::size_t zsize = qd_.sector(s).centralizer.order();
    for (std::size_t p = 0; p < qd_.sector(s).cls.members.size(); ++p)
      qfts.blocks.push_back({std::size_t(h) * n + p * zsize, shared[s]});
  }
  transform_.add_stage(std::move(qfts));
  // Stage 3: |h*, t, rho, j, i> -> |h*, rho, j, t, i>.
  UnitaryTransform::Permutation reorder{std::vector<std::size_t>(dim)};
  std::vector<TargetBlock> blocks;
  for (Elem h = 0; h < n; ++h) {
    const std::size_t s = qd_.class_of(h);
    const auto& irreps = qd_.charges(s);
    const std::size_t csize = qd_.sector(s).cls.members.size();
    const std::size_t zsize = qd_.sector(s).centralizer.order();
    std::size_t qoff = 0;
    for (std::size_t c = 0; c < irreps.size(); ++c) {
      const std::size_t d = irreps[c].dim;
      for (std::size_t j = 0; j < d; ++j) {
        blocks.push_back({target_index(h, c, j, 0, 0), csize * d,
                          G.element_label(h) + "/" + irreps[c].label + "/" + std::to_string(j)});
        for (std::size_t p = 0; p < csize; ++p)
          for (std::size_t i = 0; i < d; ++i)
            reorder.target[std::size_t(h) * n + p * zsize + qoff + j * d + i] = target_index(h, c, j, p, i);
      }
      qoff += d * d;
    }
  }
  transform_.add_stage(std::move(reorder));
  transform_.set_blocks(std::move(blocks));
}

std::size_t DGQft::target_index(Elem h, std::size_t charge, std::size_t j, std::size_t t, std::size_t i) const {
  const std::size_t n = qd_.group().order();
  const std::size_t s = qd_.class_of(h);
  const std::size_t d = qd_.charges(s)[charge].dim;
  const std::size_t csize = qd_.sector(s).cls.members.size();
  return std::size_t(h) * n + offset_[s][charge] + (j * csize + t) * d + i;
}

Mat DGQft::flux_unitary(Elem h) const {
  const FiniteGroup& G = qd_.group();
  const std::size_t n = G.order();
  const std::size_t s = qd_.class_of(h);
  const FluxSector& sec = qd_.sector(s);
  const auto& irreps = qd_.charges(s);
  const Elem k = sec.conjugator[qd_.member_position(h)];
  const std::size_t csize = sec.cls.members.size();
  const Mat& f = sector_qft_[s];
  Mat u = Mat::Zero(Eigen::Index(n), Eigen::Index(n));
  for (Elem g = 0; g < n; ++g) {
    const std::size_t p = qd_.member_position(G.conj(g, h));
    const auto q = Eigen::Index(*sec.centralizer.local_index(G.mul(G.mul(G.inv(sec.conjugator[p]), g), k)));
    std::size_t qoff = 0;
    for (std::size_t c = 0; c < irreps.size(); ++c) {
      const std::size_t d = irreps[c].dim;
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i)
          u(Eigen::Index(offset_[s][c] + (j * csize + p) * d + i), g) = f(Eigen::Index(qoff + j * d + i), q);
      qoff += d * d;
    }
  }
  return u;
}

std::vector<TargetBlock> DGQft::flux_blocks(Elem h) const {
  const std::size_t n = qd_.group().order();
  std::vector<TargetBlock> out;
  for (const auto& b : transform_.blocks())
    if (b.offset / n == h) out.push_back({b.offset - std::size_t(h) * n, b.dim, b.label});
  return out;
}

Mat DGQft::materialize() const {
  if (qd_.group().order() > kDenseOrderLimit)
    throw CapExceeded("dense D(G) QFT needs |G| <= " + std::to_string(kDenseOrderLimit));
  return transform_.materialize();
}

Mat regular_flux_matrix(const FiniteGroup& g, DGBasis a, Elem h) {
  const auto n = Eigen::Index(g.order());
  Mat m = Mat::Zero(n, n);
  for (Elem x = 0; x < g.order(); ++x)
    if (g.mul(g.mul(g.inv(x), a.h), x) == h) m(g.mul(a.g, x), x) = 1.0;
  return m;
}

RestrictionReport qft_inverse_restriction_check(const DGQft& qft, Elem h, int samples, std::uint64_t seed) {
  const QuantumDouble& qd = qft.double_group();
  const FiniteGroup& G = qd.group();
  const std::size_t n = G.order();
  const std::size_t s = qd.class_of(h);
  const FluxSector& sec = qd.sector(s);
  const auto& irreps = qd.charges(s);
  const std::size_t zsize = sec.centralizer.order();
  const Elem k = sec.conjugator[qd.member_position(h)];
  const std::size_t t_e = qd.member_position(h);
  const Mat f0 = qft_matrix(irreps, zsize);

  std::vector<Vec> inputs;
  inputs.push_back(Vec::Unit(Eigen::Index(zsize), Eigen::Index(*sec.centralizer.local_index(0))));
  inputs.push_back(Vec::Constant(Eigen::Index(zsize), 1.0 / std::sqrt(double(zsize))));
  CounterRng rng(seed, h);
  for (int r = 0; r < samples; ++r) {
    Vec v(static_cast<Eigen::Index>(zsize));
    for (auto& x : v) x = cplx(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
    inputs.push_back(v / v.norm());
  }

  RestrictionReport rep;
  for (const Vec& f : inputs) {
    // z_q = k z0_q k^-1 enumerates Z(h) in the transported order.
    Vec src = Vec::Zero(Eigen::Index(n * n));
    for (std::size_t q = 0; q < zsize; ++q) {
      const Elem z = G.conj(k, sec.centralizer.members()[q]);
      src[Eigen::Index(regular_index(n, z, h))] = f[Eigen::Index(q)];
    }
    Vec out = qft.apply(src);
    const Vec expect = f0 * f;
    Vec got(static_cast<Eigen::Index>(zsize));
    std::size_t row = 0;
    for (std::size_t c = 0; c < irreps.size(); ++c)
      for (std::size_t j = 0; j < irreps[c].dim; ++j)
        for (std::size_t i = 0; i < irreps[c].dim; ++i) {
          const auto idx = Eigen::Index(qft.target_index(h, c, j, t_e, i));
          got[Eigen::Index(row++)] = out[idx];
          out[idx] = 0;
        }
    rep.max_error = std::max(rep.max_error, max_abs(got - expect));
    rep.leaked_mass = std::max(rep.leaked_mass, out.norm());
  }
  return rep;
}

Vec embed_irrep_vector(const DGQft& qft, const DGIrrepLabel& l, const Vec& w) {
  const QuantumDouble& qd = qft.double_group();
  if (std::size_t(w.size()) != qd.dim(l)) throw GroupError("embed_irrep_vector: dimension mismatch");
  const std::size_t n = qd.group().order();
  const Elem h0 = qd.flux_rep(l);
  const std::size_t d = qd.charge_dim(l);
  const std::size_t csize = qd.sector(l.sector).cls.members.size();
  Vec padded = Vec::Zero(Eigen::Index(n * n));
  for (std::size_t c = 0; c < csize; ++c)
    for (std::size_t v = 0; v < d; ++v)
      padded[Eigen::Index(qft.target_index(h0, l.charge, 0, c, v))] = w[Eigen::Index(c * d + v)];
  return qft.apply_inverse(padded);
}

// ---------------------------------------------------------------- induced representations

Mat induced_matrix(const Transversal& t, const GroupIrrep& rho, Elem x) {
  const FiniteGroup& a = t.subgroup.parent();
  const auto d = Eigen::Index(rho.dim);
  const auto m = Eigen::Index(t.representatives.size());
  Mat out = Mat::Zero(m * d, m * d);
  for (Eigen::Index c = 0; c < m; ++c) {
    const auto f = coset_factorize(t, a.mul(x, t.representatives[std::size_t(c)]));
    const auto target = Eigen::Index(t.coset_of[f.t]);
    out.block(target * d, c * d, d, d) = rho(Elem(*t.subgroup.local_index(f.z)));
  }
  return out;
}

InducedDecomposition induced_block_diagonalize(const Subgroup& b, const GroupIrrep& rho,
                                               const std::vector<GroupIrrep>& a_irreps) {
  const FiniteGroup& a = b.parent();
  Transversal t = left_transversal(a, b);
  const std::size_t na = a.order(), nb = b.order(), d = rho.dim;
  const std::size_t dim = t.representatives.size() * d;
  const double scale = std::sqrt(double(d) / double(nb));

  // Embedding |t, v> -> sum_b psi_v(b) |t b>, psi_v the inverse QFT of (rho, 0, v).
  Mat embed = Mat::Zero(Eigen::Index(na), Eigen::Index(dim));
  for (std::size_t c = 0; c < t.representatives.size(); ++c)
    for (std::size_t q = 0; q < nb; ++q) {
      const Elem x = a.mul(t.representatives[c], b.members()[q]);
      for (std::size_t v = 0; v < d; ++v)
        embed(x, Eigen::Index(c * d + v)) = scale * std::conj(rho(Elem(q))(Eigen::Index(v), 0));
    }
  const Mat x = qft_matrix(a_irreps, na) * embed;

  InducedDecomposition out{std::move(t), {}, UnitaryTransform{}};
  Mat u(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<TargetBlock> blocks;
  std::size_t row = 0, qoff = 0;
  for (const auto& mu : a_irreps) {
    const auto dm = Eigen::Index(mu.dim);
    Mat slice(dm, Eigen::Index(dim));
    for (Eigen::Index j = 0; j < dm; ++j) slice.row(j) = x.row(Eigen::Index(qoff) + j * dm);
    Eigen::JacobiSVD<Mat> svd(slice, Eigen::ComputeThinU);
    std::size_t m = 0;
    for (Eigen::Index r = 0; r < svd.singularValues().size(); ++r)
      if (svd.singularValues()[r] > 1e-6) ++m;
    out.multiplicity.push_back(m);
    for (std::size_t c = 0; c < m; ++c) {
      if (row + mu.dim > dim) throw GroupError("induced_block_diagonalize: multiplicities exceed dimension");
      blocks.push_back({row, mu.dim, mu.label + "/" + std::to_string(c)});
      const Vec uc = svd.matrixU().col(Eigen::Index(c));
      for (Eigen::Index i = 0; i < dm; ++i) {
        Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(Eigen::Index(dim));
        for (Eigen::Index j = 0; j < dm; ++j) r += std::conj(uc[j]) * x.row(Eigen::Index(qoff) + j * dm + i);
        u.row(Eigen::Index(row++)) = r;
      }
    }
    qoff += mu.dim * mu.dim;
  }
  if (row != dim) throw GroupError("induced_block_diagonalize: multiplicities do not fill the induced space");
  out.transform = UnitaryTransform::dense(std::move(u), std::move(blocks));
  return out;
}

InducedDecomposition induced_block_diagonalize(const Subgroup& b, const GroupIrrep& rho) {
  return induced_block_diagonalize(b, rho, group_irreps(b.parent()));
}

}  // namespace qdk
