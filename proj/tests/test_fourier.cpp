#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qdk/fourier.hpp"
#include "qdk/rng.hpp"

using namespace qdk;

namespace {

std::vector<std::size_t> block_dims(const std::vector<TargetBlock>& blocks) {
  std::vector<std::size_t> d;
  for (const auto& b : blocks) d.push_back(b.dim);
  std::sort(d.begin(), d.end());
  return d;
}

Mat dft(std::size_t n) {
  Mat f = Mat::Zero(Eigen::Index(n), Eigen::Index(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double ang = 2 * std::numbers::pi * double(a * b % n) / double(n);
      f(Eigen::Index(a), Eigen::Index(b)) = cplx(std::cos(ang), std::sin(ang)) / std::sqrt(double(n));
    }
  return f;
}

Vec random_unit(Eigen::Index n, CounterRng& rng) {
  Vec v(n);
  for (auto& x : v) x = cplx(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
  return v / v.norm();
}

}  // namespace

TEST_CASE("centralizer QFT") {
  const auto z5 = FiniteGroup::cyclic(5);
  CHECK(max_abs(centralizer_qft(z5).materialize() - dft(5)) < 1e-12);
  const auto triv = FiniteGroup::cyclic(1);
  CHECK(max_abs(centralizer_qft(triv).materialize() - Mat::Identity(1, 1)) < 1e-15);

  const auto s3 = FiniteGroup::symmetric(3);
  const auto f = centralizer_qft(s3);
  const Mat u = f.materialize();
  CHECK(unitarity_error(u) < 1e-9);
  CHECK(block_dims(f.blocks()) == std::vector<std::size_t>{1, 1, 2, 2});
  for (Elem x = 0; x < s3.order(); ++x) CHECK(off_block_mass(u * left_regular_matrix(s3, x) * u.adjoint(), f.blocks()) < 1e-8);
}

TEST_CASE("wreath product QFT") {
  for (int k : {2, 3, 5}) {
    const auto w = wreath_qft(k, 1);
    CHECK(max_abs(w.transform.materialize() - dft(std::size_t(k))) < 1e-12);
  }
  for (auto [k, l] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 3}, std::pair{1, 3}}) {
    const auto w = wreath_qft(k, l);
    const auto& g = w.group;
    // Group law sanity: associativity and identity on the encoded elements.
    for (std::size_t a = 0; a < g.order(); ++a) {
      CHECK(g.mul(a, 0) == a);
      for (std::size_t b = 0; b < g.order(); b += 3) CHECK(g.mul(g.mul(a, b), 7 % g.order()) == g.mul(a, g.mul(b, 7 % g.order())));
    }
    const Mat u = w.transform.materialize();
    CHECK(unitarity_error(u) < 1e-9);
    std::size_t total = 0;
    for (const auto& b : w.transform.blocks()) total += b.dim;
    CHECK(total == g.order());
    for (std::size_t x = 0; x < g.order(); ++x) {
      Mat left = Mat::Zero(Eigen::Index(g.order()), Eigen::Index(g.order()));
      for (std::size_t y = 0; y < g.order(); ++y) left(Eigen::Index(g.mul(x, y)), Eigen::Index(y)) = 1.0;
      CHECK(off_block_mass(u * left * u.adjoint(), w.transform.blocks()) < 1e-8);
    }
    // The block spectrum matches a numeric decomposition of the same group.
    const auto pg = g.permutation_group();
    CHECK(pg.order() == g.order());
    std::vector<std::size_t> expect;
    for (const auto& r : group_irreps(pg))
      for (std::size_t c = 0; c < r.dim; ++c) expect.push_back(r.dim);
    std::sort(expect.begin(), expect.end());
    CHECK(block_dims(w.transform.blocks()) == expect);
  }
  CHECK(block_dims(wreath_qft(2, 2).transform.blocks()) == std::vector<std::size_t>{1, 1, 1, 1, 2, 2});
  CHECK_THROWS_AS(wreath_qft(10, 4), CapExceeded);
}

TEST_CASE("D(G) QFT") {
  // Abelian: permutation followed by the QFT over G on the z register.
  const QuantumDouble dz4(FiniteGroup::cyclic(4));
  const DGQft qz(dz4);
  const Mat f4 = dft(4);
  for (Elem h = 0; h < 4; ++h) CHECK(max_abs(qz.flux_unitary(h) - f4) < 1e-12);

  for (const auto& g : {FiniteGroup::symmetric(3), FiniteGroup::semidirect(7, 3, 2)}) {
    const QuantumDouble qd(g);
    const DGQft q(qd);
    const std::size_t n = g.order();
    const Mat dense = q.materialize();
    CHECK(unitarity_error(dense) < 1e-12);
    // Structured pipeline vs per-flux blocks.
    for (Elem h = 0; h < n; ++h) {
      const Mat uh = q.flux_unitary(h);
      for (Elem x = 0; x < n; ++x)
        for (std::size_t r = 0; r < n; ++r)
          CHECK(std::abs(dense(Eigen::Index(h * n + r), Eigen::Index(regular_index(n, x, h))) -
                         uh(Eigen::Index(r), x)) < 1e-10);
    }
    // Conjugated regular action is block diagonal for every basis element
    // (full dense check on the smallest group only).
    double worst = 0;
    for (Elem x = 0; x < n && n <= 6; ++x)
      for (Elem y = 0; y < n; ++y) {
        Mat a = Mat::Zero(Eigen::Index(n * n), Eigen::Index(n * n));
        for (std::size_t i = 0; i < n * n; ++i)
          if (auto j = regular_basis_action(g, {x, y}, i)) a(Eigen::Index(*j), Eigen::Index(i)) = 1.0;
        worst = std::max(worst, off_block_mass(dense * a * dense.adjoint(), q.transform().blocks()));
      }
    CHECK(worst < 1e-8);
    std::size_t total = 0;
    for (const auto& b : q.transform().blocks()) total += b.dim;
    CHECK(total == n * n);
    // At the class representative the block is exactly irrep_action.
    for (auto l : qd.labels()) {
      const Elem h0 = qd.flux_rep(l);
      const Mat uh = q.flux_unitary(h0);
      const std::size_t off = q.target_index(h0, l.charge, 0, 0, 0) - std::size_t(h0) * n;
      const auto d = Eigen::Index(qd.dim(l));
      for (Elem x = 0; x < n; ++x)
        for (Elem y = 0; y < n; ++y) {
          const Mat m = uh * regular_flux_matrix(g, {x, y}, h0) * uh.adjoint();
          CHECK(max_abs(m.block(Eigen::Index(off), Eigen::Index(off), d, d) - irrep_matrix(qd, l, DGBasis{x, y})) <
                1e-9);
        }
    }
  }
}

TEST_CASE("D(S_4) QFT block structure per flux") {
  const auto s4 = FiniteGroup::symmetric(4);
  const QuantumDouble qd(s4);
  const DGQft q(qd);
  double worst = 0, unit = 0;
  for (Elem h = 0; h < s4.order(); ++h) {
    const Mat uh = q.flux_unitary(h);
    unit = std::max(unit, unitarity_error(uh));
    const auto blocks = q.flux_blocks(h);
    for (Elem x = 0; x < s4.order(); ++x)
      for (Elem y = 0; y < s4.order(); ++y) {
        worst = std::max(worst, off_block_mass(uh * regular_flux_matrix(s4, {x, y}, h) * uh.adjoint(), blocks));
      }
  }
  CHECK(unit < 1e-9);
  CHECK(worst < 1e-8);
}

TEST_CASE("restriction reproduces centralizer QFTs") {
  const auto s3 = FiniteGroup::symmetric(3);
  const QuantumDouble qd(s3);
  const DGQft q(qd);
  for (Elem h = 0; h < s3.order(); ++h) {
    const auto r = qft_inverse_restriction_check(q, h);
    CHECK(r.max_error < 1e-9);
    CHECK(r.leaked_mass < 1e-9);
  }
  // h = e: QFT over G itself; constant function lands on the trivial irrep.
  Vec f = Vec::Constant(6, 1.0 / std::sqrt(6.0));
  Vec src = Vec::Zero(36);
  for (Elem g = 0; g < 6; ++g) src[Eigen::Index(regular_index(6, g, 0))] = f[g];
  const Vec out = q.apply(src);
  CHECK(std::abs(out[Eigen::Index(q.target_index(0, 0, 0, 0, 0))] - 1.0) < 1e-12);
  CHECK(std::abs(out.norm() - 1.0) < 1e-12);
}

TEST_CASE("embedding irrep vectors") {
  const auto s3 = FiniteGroup::symmetric(3);
  const QuantumDouble qd(s3);
  const DGQft q(qd);
  const Vec vac = embed_irrep_vector(q, {0, 0}, Vec::Ones(1));
  for (Elem g = 0; g < 6; ++g)
    for (Elem h = 0; h < 6; ++h)
      CHECK(std::abs(vac[Eigen::Index(regular_index(6, g, h))] - (h == 0 ? 1.0 / std::sqrt(6.0) : 0.0)) < 1e-12);

  CounterRng rng(9, 0);
  for (auto l : qd.labels()) {
    const auto d = Eigen::Index(qd.dim(l));
    for (int trial = 0; trial < 50; ++trial) {
      const Vec w = random_unit(d, rng);
      const Vec e = embed_irrep_vector(q, l, w);
      CHECK(std::abs(e.norm() - 1.0) < 1e-12);
      DGElement a(s3);
      a.add({Elem(rng.below(6)), Elem(rng.below(6))}, cplx(rng.uniform(), rng.uniform()));
      a.add({Elem(rng.below(6)), Elem(rng.below(6))}, cplx(rng.uniform(), rng.uniform()));
      CHECK(max_abs(regular_action(a, e) - embed_irrep_vector(q, l, irrep_matrix(qd, l, a) * w)) < 1e-9);
    }
  }
}

TEST_CASE("induced representations") {
  auto check = [](const Subgroup& b, const GroupIrrep& rho) {
    const FiniteGroup& a = b.parent();
    const auto irreps = group_irreps(a);
    const auto dec = induced_block_diagonalize(b, rho, irreps);
    const Mat u = dec.transform.materialize();
    CHECK(unitarity_error(u) < 1e-9);
    // Multiplicities agree with Frobenius reciprocity via characters.
    std::vector<cplx> chi(a.order());
    for (Elem x = 0; x < a.order(); ++x) chi[x] = induced_matrix(dec.transversal, rho, x).trace();
    const auto mult = character_multiplicities(chi, irreps);
    for (std::size_t m = 0; m < irreps.size(); ++m) CHECK(std::llround(mult[m]) == (long long)dec.multiplicity[m]);
    for (Elem x = 0; x < a.order(); ++x) {
      const Mat m = u * induced_matrix(dec.transversal, rho, x) * u.adjoint();
      for (const auto& blk : dec.transform.blocks()) {
        const std::string name = blk.label.substr(0, blk.label.find('/'));
        const auto it = std::find_if(irreps.begin(), irreps.end(), [&](const GroupIrrep& r) { return r.label == name; });
        REQUIRE(it != irreps.end());
        CHECK(max_abs(m.block(Eigen::Index(blk.offset), Eigen::Index(blk.offset), Eigen::Index(blk.dim),
                              Eigen::Index(blk.dim)) -
                      (*it)(x)) < 1e-9);
      }
      CHECK(off_block_mass(m, dec.transform.blocks()) < 1e-9);
    }
    return dec;
  };
  const auto s3 = FiniteGroup::symmetric(3);
  const auto s3_irreps = group_irreps(s3);
  const auto whole = check(Subgroup::whole(s3), s3_irreps[2]);
  CHECK(whole.transform.blocks().size() == 1);

  const Elem t = *s3.find(perm_from_cycles(3, {{0, 1}}));
  const auto z2 = Subgroup::generated_by(s3, std::vector<Elem>{t});
  const auto trivial = group_irreps(z2.as_group())[0];
  const auto dec = check(z2, trivial);
  CHECK(block_dims(dec.transform.blocks()) == std::vector<std::size_t>{1, 2});

  const auto z3 = FiniteGroup::cyclic(3);
  const auto e = Subgroup::from_members(z3, {0});
  const auto reg = check(e, group_irreps(e.as_group())[0]);
  CHECK(block_dims(reg.transform.blocks()) == std::vector<std::size_t>{1, 1, 1});

  const auto s4 = FiniteGroup::symmetric(4);
  const auto zc = centralizer(s4, *s4.find(perm_from_cycles(4, {{0, 1}, {2, 3}})));
  const auto zirreps = group_irreps(zc.as_group());
  for (const auto& r : zirreps) check(zc, r);
}
