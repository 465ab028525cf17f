#include <doctest.h>

#include <random>

#include "qdk/braid.hpp"
#include "qdk/invariants.hpp"

using namespace qdk;

namespace {

Elem perm_elem(const FiniteGroup& g, std::vector<std::vector<int>> cycles) {
  return *g.find(perm_from_cycles(g.degree(), cycles));
}

BraidWord random_word(std::mt19937_64& rng, int strands, std::size_t length) {
  std::vector<BraidLetter> letters;
  std::uniform_int_distribution<int> idx(1, strands - 1);
  for (std::size_t k = 0; k < length; ++k) letters.push_back({idx(rng), rng() % 2 ? 1 : -1});
  return BraidWord(strands, std::move(letters));
}

Vec random_vec(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> nd;
  Vec v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) x = cplx(nd(rng), nd(rng));
  return v.normalized();
}

// Trace of tau(w) from the dense two-site gates, column by column.
cplx dense_trace(const BraidRepresentation& rep, const BraidWord& w) {
  std::size_t dim = 1;
  for (int k = 0; k < w.strands(); ++k) dim *= rep.local_dim();
  cplx tr = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    Vec e = Vec::Zero(Eigen::Index(dim));
    e[Eigen::Index(i)] = 1.0;
    tr += rep.apply_dense(w, e)[Eigen::Index(i)];
  }
  return tr;
}

BraidWord word(const char* text) { return BraidWord::parse(text); }

}  // namespace

TEST_CASE("braid words: parsing, printing, inverses and linking numbers") {
  const auto w = word("B4: s2 S1  s3,s2");
  CHECK(w.strands() == 4);
  CHECK(w.length() == 4);
  CHECK(w.letters()[1] == BraidLetter{1, -1});
  CHECK(w.to_string() == "B4: s2 S1 s3 s2");
  CHECK(BraidWord::parse(w.to_string()) == w);
  CHECK(w.inverse().to_string() == "B4: S2 S3 s1 S2");
  CHECK(BraidWord::parse("s1 s1", 3).strands() == 3);
  CHECK_THROWS_AS(word("B3: s3"), ParseError);
  CHECK_THROWS_AS(word("B3: t1"), ParseError);
  CHECK_THROWS_AS(word("s1"), ParseError);
  CHECK_THROWS_AS(BraidWord(3, {{0, 1}}), GroupError);

  CHECK(linking_number(BraidWord(2)) == 0);
  CHECK(linking_number(word("B2: s1 s1 s1")) == 3);
  CHECK(linking_number(word("B3: s1 S2")) == 0);

  CHECK(word("B3: s1 s2").permutation() == std::vector<int>{2, 0, 1});
  CHECK(word("B4: s1").shifted(2, 4).to_string() == "B4: s3");
}

TEST_CASE("regular representation generators") {
  const auto G = FiniteGroup::symmetric(3);
  const auto n = G.order();
  const auto rep = BraidRepresentation::regular(G);
  const Elem e = 0, t12 = perm_elem(G, {{0, 1}}), t13 = perm_elem(G, {{0, 2}}), t23 = perm_elem(G, {{1, 2}});

  SUBCASE("worked S3 instance") {
    // |e e*, (12) (13)*> -> |(12) (13)*, (23) e*> since (12)(13)(12) = (23)
    const auto a = std::uint32_t(regular_index(n, e, e));
    const auto b = std::uint32_t(regular_index(n, t12, t13));
    auto [x, y] = regular_generator(G, 1, a, b);
    CHECK(x == b);
    CHECK(y == regular_index(n, t23, e));
  }
  SUBCASE("inverse generator undoes the generator") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = std::uint32_t(rng() % (n * n)), b = std::uint32_t(rng() % (n * n));
      auto [x, y] = regular_generator(G, 1, a, b);
      auto [p, q] = regular_generator(G, -1, x, y);
      CHECK((p == a && q == b));
      std::tie(x, y) = regular_generator(G, -1, a, b);
      std::tie(p, q) = regular_generator(G, 1, x, y);
      CHECK((p == a && q == b));
    }
  }
  SUBCASE("Yang-Baxter on the full basis and permutation structure") {
    const auto lhs = word("B3: s1 s2 s1"), rhs = word("B3: s2 s1 s2");
    std::size_t hits = 0;
    BasisTuple t(3, 0);
    std::vector<bool> seen(n * n * n * n * n * n, false);
    for (t[0] = 0; t[0] < n * n; ++t[0])
      for (t[1] = 0; t[1] < n * n; ++t[1])
        for (t[2] = 0; t[2] < n * n; ++t[2]) {
          const auto u = rep.apply(lhs, t);
          hits += u == rep.apply(rhs, t);
          const auto code = (u[0] * n * n + u[1]) * n * n + u[2];
          CHECK_FALSE(seen[code]);
          seen[code] = true;
        }
    CHECK(hits == n * n * n * n * n * n);
  }
  SUBCASE("regular gate matches the R-matrix action followed by the swap") {
    // R = sum_x (x k*) (x) (e x*) in the regular representation.
    const Mat& gate = rep.gate(1);
    CHECK(unitarity_error(gate) < 1e-12);
    const auto R = r_matrix(G);
    for (std::uint32_t a = 0; a < n * n; a += 5)
      for (std::uint32_t b = 0; b < n * n; ++b) {
        Vec va = Vec::Zero(Eigen::Index(n * n)), vb = va;
        va[a] = 1.0;
        vb[b] = 1.0;
        Vec out = Vec::Zero(Eigen::Index(n * n * n * n));
        for (const auto& [key, c] : R.terms()) {
          const Vec x = regular_action(DGElement::basis(G, key.first.g, key.first.h, c), va);
          const Vec y = regular_action(DGElement::basis(G, key.second.g, key.second.h), vb);
          out += kron(y, x);  // swap the factors
        }
        Vec in = Vec::Zero(Eigen::Index(n * n * n * n));
        in[Eigen::Index(a * n * n + b)] = 1.0;
        CHECK(max_abs(gate * in - out) < 1e-12);
      }
  }
}

TEST_CASE("fluxon generators agree with the trivial-charge irrep") {
  const auto G = FiniteGroup::symmetric(3);
  const QuantumDouble qd(G);
  const Elem t12 = perm_elem(G, {{0, 1}}), t13 = perm_elem(G, {{0, 2}}), t23 = perm_elem(G, {{1, 2}});
  auto [x, y] = fluxon_generator(G, 1, t12, t13);
  CHECK(x == t13);
  CHECK(y == t23);
  CHECK(fluxon_generator(G, 1, t12, t12) == std::pair{t12, t12});

  for (std::size_t s = 0; s < qd.sector_count(); ++s) {
    const auto flux = FluxSet::conjugacy_class(G, qd.sector(s).cls.representative);
    const auto frep = BraidRepresentation::fluxon(flux);
    const auto irep = BraidRepresentation::irrep(qd, qd.fluxon(s));
    CHECK(max_abs(frep.gate(1) - irep.gate(1)) < 1e-12);
    CHECK(max_abs(frep.gate(-1) - irep.gate(-1)) < 1e-12);
  }
  const auto flux = FluxSet::conjugacy_class(G, t12);
  CHECK_THROWS_AS(flux.position(0), GroupError);
  CHECK_THROWS_AS(FluxSet::from_members(G, {t12}), GroupError);
}

TEST_CASE("irrep braid generators") {
  const auto G = FiniteGroup::symmetric(3);
  const QuantumDouble qd(G);
  std::mt19937_64 rng(11);
  for (const auto& l : qd.labels()) {
    CAPTURE(qd.describe(l));
    const auto rep = BraidRepresentation::irrep(qd, l);
    const std::size_t d = rep.local_dim();
    const std::size_t dc = qd.charge_dim(l);
    const auto& sec = qd.sector(l.sector);
    const auto& rho = qd.charge_irrep(l);

    // Closed-form action on |x1 v1, x2 v2>, both signs.
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        Vec in = Vec::Zero(Eigen::Index(d * d));
        in[Eigen::Index(a * d + b)] = 1.0;
        const Elem x1 = sec.cls.members[a / dc], x2 = sec.cls.members[b / dc];
        Vec expect = Vec::Zero(Eigen::Index(d * d));
        {
          const std::size_t target = qd.member_position(G.conj(x2, x1));
          const Mat& m = rho(Elem(qd.charge_element(l.sector, a / dc, x2)));
          for (std::size_t i = 0; i < dc; ++i)
            expect[Eigen::Index(b * d + target * dc + i)] = m(Eigen::Index(i), Eigen::Index(a % dc));
        }
        CHECK(max_abs(rep.gate(1) * in - expect) < 1e-12);
        expect.setZero();
        {
          const Elem ai = G.inv(x1);
          const std::size_t target = qd.member_position(G.conj(ai, x2));
          const Mat& m = rho(Elem(qd.charge_element(l.sector, b / dc, ai)));
          for (std::size_t i = 0; i < dc; ++i)
            expect[Eigen::Index((target * dc + i) * d + a)] = m(Eigen::Index(i), Eigen::Index(b % dc));
        }
        CHECK(max_abs(rep.gate(-1) * in - expect) < 1e-12);
      }

    // Braid relations and unitarity on random dense states.
    for (int trial = 0; trial < 3; ++trial) {
      const Vec v3 = random_vec(rng, d * d * d);
      CHECK(max_abs(rep.apply_dense(word("B3: s1 s2 s1"), v3) - rep.apply_dense(word("B3: s2 s1 s2"), v3)) < 1e-10);
      const Vec v4 = random_vec(rng, d * d * d * d);
      CHECK(max_abs(rep.apply_dense(word("B4: s1 s3"), v4) - rep.apply_dense(word("B4: s3 s1"), v4)) < 1e-10);
      const auto w = random_word(rng, 4, 12);
      const Vec out = rep.apply_dense(w, v4);
      CHECK(std::abs(out.norm() - 1.0) < 1e-10);
      CHECK(max_abs(rep.apply_dense(w * w.inverse(), v4) - v4) < 1e-10);
    }
  }
}

TEST_CASE("sparse braid application") {
  const auto G = FiniteGroup::symmetric(3);
  const QuantumDouble qd(G);
  std::mt19937_64 rng(3);
  const auto regular = BraidRepresentation::regular(G);
  const auto s = StateVector::basis(BasisScheme::regular, {1, 7, 20, 35});
  CHECK(regular.apply(BraidWord(4), s).distance(s) == 0.0);
  const auto w = random_word(rng, 4, 10);
  CHECK(regular.apply(w * w.inverse(), s).distance(s) == 0.0);
  CHECK(regular.apply(word("B4: s1 s3"), s).distance(regular.apply(word("B4: s3 s1"), s)) == 0.0);
  CHECK_THROWS_AS(regular.apply(word("B3: s1"), s), GroupError);
  CHECK_THROWS_AS(BraidRepresentation::fluxon(FluxSet::conjugacy_class(G, 1)).apply(w, s), GroupError);

  // Charged irrep: sparse and dense application agree.
  const DGIrrepLabel l{qd.class_of(perm_elem(G, {{0, 1}})), 1};
  const auto rep = BraidRepresentation::irrep(qd, l);
  const auto d = std::uint32_t(rep.local_dim());
  REQUIRE(d == 3);
  const auto basis = StateVector::basis(BasisScheme::irrep, {0, 1, 2, 1});
  CHECK_THROWS_AS(rep.apply(w, StateVector::basis(BasisScheme::irrep, {0, 1, 3, 1})), GroupError);
  const auto sparse = rep.apply(w, basis);
  Vec dense = Vec::Zero(Eigen::Index(d * d * d * d));
  dense[Eigen::Index(((0 * d + 1) * d + 2) * d + 1)] = 1.0;
  dense = rep.apply_dense(w, dense);
  for (const auto& [t, a] : sparse.amplitudes)
    CHECK(std::abs(dense[Eigen::Index(((t[0] * d + t[1]) * d + t[2]) * d + t[3])] - a) < 1e-12);
  CHECK(std::abs(sparse.norm() - 1.0) < 1e-12);
}

TEST_CASE("trace closure") {
  const auto G = FiniteGroup::symmetric(3);
  const QuantumDouble qd(G);
  const auto labels = qd.labels();
  REQUIRE(labels.size() == 8);

  for (const auto& l : labels) {
    CAPTURE(qd.describe(l));
    CHECK(std::abs(trace_closure(qd, l, BraidWord(1)).value - 1.0) < 1e-12);
    CHECK(std::abs(trace_closure(qd, l, word("B2: s1")).value - 1.0) < 1e-12);
    CHECK(std::abs(trace_closure(qd, l, word("B2: S1")).value - 1.0) < 1e-12);
  }

  const std::size_t transpositions = qd.class_of(perm_elem(G, {{0, 1}}));
  const auto trefoil = word("B2: s1 s1 s1");
  const auto fluxon = qd.fluxon(transpositions);
  CHECK(std::abs(braid_trace(qd, fluxon, trefoil) - 9.0) < 1e-12);
  CHECK(std::abs(trace_closure(qd, fluxon, trefoil).value - 3.0) < 1e-12);

  SUBCASE("flux tracking matches dense traces") {
    std::mt19937_64 rng(5);
    for (const auto& l : labels) {
      const auto rep = BraidRepresentation::irrep(qd, l);
      for (int trial = 0; trial < 4; ++trial) {
        const auto w = random_word(rng, 3, 8);
        CHECK(std::abs(braid_trace(qd, l, w) - dense_trace(rep, w)) < 1e-9);
      }
    }
  }

  SUBCASE("Markov invariance") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + trial % 3;
      const auto theta = random_word(rng, n, 1 + rng() % 8);
      const auto eta = random_word(rng, n, 1 + rng() % 8);
      const int sign = rng() % 2 ? 1 : -1;
      const BraidWord move = BraidWord(n + 1, {{n, sign}});
      for (const auto& l : labels) {
        const cplx base = trace_closure(qd, l, theta * eta).value;
        CHECK(std::abs(base - trace_closure(qd, l, eta * theta).value) < 1e-8);
        const cplx stab = trace_closure(qd, l, theta.widened(n + 1) * move).value;
        CHECK(std::abs(trace_closure(qd, l, theta).value - stab) < 1e-8);
      }
    }
  }

  SUBCASE("Markov normalization reproduces the closed form") {
    std::mt19937_64 rng(23);
    CHECK(markov_trace_normalize(BraidWord(1), 0.25, 0.5).value == 0.25);
    CHECK_FALSE(markov_trace_normalize(BraidWord(2), 0.25, 0.0).normalizable);
    for (const auto& l : labels) {
      const cplx z = markov_parameter(qd, l);
      for (int trial = 0; trial < 10; ++trial) {
        const auto w = random_word(rng, 3, 6);
        const auto m = markov_trace_normalize(w, normalized_trace(qd, l, w), z);
        REQUIRE(m.normalizable);
        CHECK(std::abs(m.value - trace_closure(qd, l, w).value) < 1e-9);
        const auto w2 = w.widened(4) * BraidWord(4, {{3, 1}});
        CHECK(std::abs(markov_trace_normalize(w2, normalized_trace(qd, l, w2), z).value - m.value) < 1e-9);
      }
    }
  }
}

TEST_CASE("sampled trace closure") {
  CHECK(chernoff_sample_count(0.1) == 2219);
  CHECK(chernoff_sample_count(0.05) == 8873);
  CHECK_THROWS_AS(chernoff_sample_count(0), GroupError);

  const auto G = FiniteGroup::symmetric(3);
  const QuantumDouble qd(G);
  const DGQft qft(qd);
  const auto labels = qd.labels();
  const std::size_t transpositions = qd.class_of(perm_elem(G, {{0, 1}}));

  SUBCASE("embedded diagonal entries match the irrep basis") {
    std::mt19937_64 rng(29);
    for (const auto& l : labels) {
      const auto rep = BraidRepresentation::irrep(qd, l);
      const auto d = std::uint32_t(rep.local_dim());
      const auto w = random_word(rng, 3, 6);
      // Exhaustive average over the sample space equals the normalized trace.
      cplx sum = 0;
      BasisTuple v(3, 0);
      for (v[0] = 0; v[0] < d; ++v[0])
        for (v[1] = 0; v[1] < d; ++v[1])
          for (v[2] = 0; v[2] < d; ++v[2]) {
            const cplx diag = embedded_diagonal(qft, l, w, v);
            const auto direct = rep.apply(w, StateVector::basis(BasisScheme::irrep, v));
            auto it = direct.amplitudes.find(v);
            CHECK(std::abs(diag - (it == direct.amplitudes.end() ? cplx(0) : it->second)) < 1e-10);
            sum += diag;
          }
      CHECK(std::abs(sum - braid_trace(qd, l, w)) < 1e-9);
    }
  }

  SUBCASE("identity braid is estimated exactly") {
    for (const auto& l : labels) {
      const auto est = trace_closure_sampled(qft, l, BraidWord(3), 0.5, 1);
      CHECK(std::abs(est.value - trace_closure(qd, l, BraidWord(3)).value) < 1e-10);
      CHECK(est.sampling->samples == chernoff_sample_count(0.5));
    }
  }

  SUBCASE("fluxon trefoil over 100 seeds") {
    const auto l = qd.fluxon(transpositions);
    const auto w = word("B2: s1 s1 s1");
    const cplx exact = trace_closure(qd, l, w).value;
    int within = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
      within += std::abs(trace_closure_sampled(qft, l, w, 0.1, seed).value - exact) <= 0.1;
    CHECK(within >= 99);
  }

  SUBCASE("charged label: the sample mean concentrates on the normalized trace") {
    const DGIrrepLabel l{transpositions, 1};
    const auto w = word("B3: s1 S2 s1 s2");
    const cplx phi = normalized_trace(qd, l, w);
    int within = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto est = trace_closure_sampled(qft, l, w, 0.1, seed);
      within += std::abs(est.sampling->mean - phi) <= 0.1;
      CHECK(std::abs(est.value - est.sampling->scale * est.sampling->mean /
                                     std::pow(flux_scalar(qd, l), linking_number(w))) < 1e-12);
    }
    CHECK(within >= 99);
  }

  SUBCASE("results do not depend on the thread count") {
    const auto l = qd.labels()[3];
    const auto w = word("B3: s1 s2 s2 S1");
    CHECK(trace_closure_sampled(qft, l, w, 0.2, 9, 1).value == trace_closure_sampled(qft, l, w, 0.2, 9, 3).value);
  }
}

TEST_CASE("plat closure") {
  const auto G = FiniteGroup::symmetric(3);
  const QuantumDouble qd(G);
  const Elem t12 = perm_elem(G, {{0, 1}});
  const std::size_t transpositions = qd.class_of(t12);
  const auto flux = FluxSet::conjugacy_class(G, t12);

  SUBCASE("pair states") {
    const Vec phi = pair_state(qd, qd.fluxon(transpositions));
    CHECK(phi.size() == 9);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        const Elem x = flux.members()[a], y = flux.members()[b];
        const double expect = G.mul(x, y) == 0 ? 1 / std::sqrt(3.0) : 0.0;
        CHECK(std::abs(phi[Eigen::Index(a * 3 + b)] - expect) < 1e-12);
      }
    const auto s = plat_state(flux, 2);
    CHECK(s.amplitudes.size() == 9);
    CHECK(std::abs(s.norm() - 1.0) < 1e-12);
    const auto rep = BraidRepresentation::fluxon(flux);
    CHECK(rep.apply(word("B4: s1"), s).distance(s) < 1e-15);
    CHECK(rep.apply(word("B4: s3"), s).distance(s) < 1e-15);
    // The vacuum label gives a product state.
    CHECK(std::abs(plat_state(qd, DGIrrepLabel{0, 0}, 3).norm() - 1.0) < 1e-12);
    CHECK(plat_state(qd, DGIrrepLabel{0, 0}, 3).amplitudes.size() == 1);
    // Every S3 irrep is self-dual; Z3 charges in D(Z3) are not.
    const QuantumDouble z3(FiniteGroup::cyclic(3));
    CHECK_THROWS_AS(pair_state(z3, DGIrrepLabel{0, 1}), GroupError);
  }

  SUBCASE("small values") {
    for (const auto& l : qd.labels()) CHECK(std::abs(plat_closure(qd, l, BraidWord(2)).value - 1.0) < 1e-12);
    CHECK(plat_closure(flux, BraidWord(2)).value == 1.0);
    const auto trefoil = word("B4: s2 s2 s2");
    CHECK(plat_fixed_caps(flux, trefoil) == 9);
    CHECK(std::abs(plat_closure(flux, trefoil).value - 1.0) < 1e-12);
    CHECK(std::abs(plat_closure(qd, qd.fluxon(transpositions), trefoil).value - 1.0) < 1e-12);
    CHECK_THROWS_AS(plat_closure(flux, word("B3: s1")), GroupError);
  }

  SUBCASE("fluxon counts agree with the dense amplitude") {
    std::mt19937_64 rng(31);
    for (std::size_t s = 1; s < qd.sector_count(); ++s) {
      const auto f = FluxSet::conjugacy_class(G, qd.sector(s).cls.representative);
      const auto rep = BraidRepresentation::fluxon(f);
      for (int trial = 0; trial < 10; ++trial) {
        const auto w = random_word(rng, 4, 10);
        const auto alpha = plat_state(f, 2);
        CHECK(std::abs(alpha.inner(rep.apply(w, alpha)) - plat_closure(f, w).value) < 1e-12);
        CHECK(std::abs(plat_closure(qd, qd.fluxon(s), w).value - plat_closure(f, w).value) < 1e-12);
      }
    }
  }

  SUBCASE("Hilden invariance for fluxons of S3 and A4") {
    const auto A4 = FiniteGroup::alternating(4);
    std::vector<FluxSet> sets;
    for (std::size_t s = 1; s < qd.sector_count(); ++s)
      sets.push_back(FluxSet::conjugacy_class(G, qd.sector(s).cls.representative));
    sets.push_back(FluxSet::conjugacy_class(A4, *A4.find(perm_from_cycles(4, {{0, 1}, {2, 3}}))));
    sets.push_back(FluxSet::inverse_closed_class(A4, *A4.find(perm_from_cycles(4, {{0, 1, 2}}))));
    CHECK(sets.back().size() == 8);
    CHECK_THROWS_AS(plat_closure(FluxSet::conjugacy_class(A4, *A4.find(perm_from_cycles(4, {{0, 1, 2}}))),
                                 BraidWord(2)),
                    GroupError);
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 100; ++trial) {
      const int strands = trial % 2 ? 6 : 4;
      const auto theta = random_word(rng, strands, 2 + rng() % 10);
      const auto gens = hilden_generators(strands);
      const auto& f = sets[std::size_t(trial) % sets.size()];
      const cplx base = plat_closure(f, theta).value;
      for (const auto& h1 : gens)
        for (const auto& h2 : gens) {
          CHECK(std::abs(plat_closure(f, h1 * theta * h2).value - base) < 1e-9);
          CHECK(std::abs(plat_closure(f, h1.inverse() * theta * h2).value - base) < 1e-9);
        }
    }
  }

  SUBCASE("Hilden generator lists") {
    CHECK(hilden_generators(2).size() == 1);
    const auto g4 = hilden_generators(4);
    REQUIRE(g4.size() == 3);
    CHECK(g4[0].to_string() == "B4: s1");
    CHECK(g4[1].to_string() == "B4: s2 s1 s1 s2");
    CHECK(g4[2].to_string() == "B4: s2 s1 s3 s2");
    CHECK(hilden_generators(6).size() == 4);
    CHECK_THROWS_AS(hilden_generators(3), GroupError);
  }

  SUBCASE("Monte Carlo plat estimator") {
    const auto id = plat_closure_fluxon_mc(flux, BraidWord(4), 0.1, 5);
    CHECK(id.value == 1.0);
    CHECK(id.sampling->samples == 2219);
    const auto trefoil = word("B4: s2 s2 s2");
    // Non-trivial target: the figure-eight has Pl = 1/3 for this class.
    const auto w = word("B4: s2 s2 S1 s2");
    REQUIRE(std::abs(plat_closure(flux, w).value - 1.0 / 3.0) < 1e-12);
    for (const auto& target : {trefoil, w}) {
      const double exact = plat_closure(flux, target).value.real();
      int within = 0;
      for (std::uint64_t seed = 0; seed < 100; ++seed)
        within += std::abs(plat_closure_fluxon_mc(flux, target, 0.05, seed).value.real() - exact) <= 0.05;
      CHECK(within >= 99);
    }
    CHECK(plat_closure_fluxon_mc(flux, w, 0.1, 4, 1).value == plat_closure_fluxon_mc(flux, w, 0.1, 4, 4).value);
  }

  SUBCASE("stabilization ratio is constant per label") {
    std::mt19937_64 rng(41);
    const auto A4 = FiniteGroup::alternating(4);
    const std::vector<FluxSet> sets{flux, FluxSet::inverse_closed_class(A4, *A4.find(perm_from_cycles(4, {{0, 1, 2}})))};
    for (const auto& f : sets) {
      int seen = 0;
      for (int trial = 0; trial < 30; ++trial) {
        const auto theta = random_word(rng, 4, 1 + rng() % 8);
        if (auto r = stabilization_ratio(f, theta)) {
          CHECK(std::abs(*r - 1.0 / double(f.size())) < 1e-12);
          ++seen;
        }
      }
      CHECK(seen > 0);
    }
    // Charged self-dual labels: record that the ratio does not depend on the braid.
    for (const auto& l : qd.labels()) {
      std::optional<cplx> first;
      for (int trial = 0; trial < 5; ++trial) {
        const auto theta = random_word(rng, 2, 1 + rng() % 5);
        if (auto r = stabilization_ratio(qd, l, theta)) {
          if (!first) first = r;
          CHECK(std::abs(*r - *first) < 1e-9);
        }
      }
    }
  }
}
