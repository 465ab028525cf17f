#include <doctest.h>

#include <random>

#include "qdk/invariants.hpp"
#include "qdk/knot_oracle.hpp"

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

// Naive count over every stroke assignment.
std::uint64_t brute_force_count(const WirtingerPresentation& p, const FluxSet& s) {
  const FiniteGroup& g = s.group();
  std::vector<std::size_t> pick(p.strokes, 0);
  std::uint64_t count = 0;
  while (true) {
    bool ok = true;
    for (const auto& c : p.crossings) {
      const Elem o = s.members()[pick[c.over]];
      const Elem op = c.sign > 0 ? o : g.inv(o);
      ok = ok && g.conj(op, s.members()[pick[c.in]]) == s.members()[pick[c.out]];
    }
    count += ok;
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == s.size()) pick[k++] = 0;
    if (k == pick.size()) return count;
  }
}

struct CorpusKnot {
  const char* name;
  const char* braid;
};
const CorpusKnot kCorpus[] = {
    {"unknot", "B2:"},
    {"trefoil", "B4: s2 s2 s2"},
    {"figure-eight", "B4: s2 s2 S1 s2"},
    {"5_1", "B4: s2 s2 s2 s2 s2"},
    {"granny", "B6: s2 s2 s2 s4 s4 s4"},
};

std::vector<FluxSet> corpus_flux_sets() {
  const auto S3 = FiniteGroup::symmetric(3);
  const auto A4 = FiniteGroup::alternating(4);
  const auto A5 = FiniteGroup::alternating(5);
  return {
      FluxSet::conjugacy_class(S3, perm_elem(S3, {{0, 1}})),
      FluxSet::conjugacy_class(S3, perm_elem(S3, {{0, 1, 2}})),
      FluxSet::inverse_closed_class(A4, perm_elem(A4, {{0, 1, 2}})),
      FluxSet::conjugacy_class(A4, perm_elem(A4, {{0, 1}, {2, 3}})),
      FluxSet::conjugacy_class(A5, perm_elem(A5, {{0, 1, 2}})),
      FluxSet::conjugacy_class(A5, perm_elem(A5, {{0, 1}, {2, 3}})),
      FluxSet::conjugacy_class(A5, perm_elem(A5, {{0, 1, 2, 3, 4}})),
  };
}

}  // namespace

TEST_CASE("Wirtinger presentations of plat diagrams") {
  const auto unknot = wirtinger_from_plat(BraidWord(2));
  CHECK(unknot.strokes == 1);
  CHECK(unknot.crossings.empty());
  CHECK(unknot.components == 1);

  const auto trefoil = wirtinger_from_plat(BraidWord::parse("B4: s2 s2 s2"));
  CHECK(trefoil.components == 1);
  CHECK(trefoil.crossings.size() == 3);
  CHECK(trefoil.strokes == 3);
  // Both strands run in opposite directions through s2, so all signs flip together.
  for (const auto& c : trefoil.crossings) CHECK(c.sign == trefoil.crossings[0].sign);

  CHECK(wirtinger_from_plat(BraidWord(4)).components == 2);
  CHECK(wirtinger_from_plat(BraidWord::parse("B4: s2 s2")).components == 2);
  CHECK_THROWS_AS(wirtinger_from_plat(BraidWord(3)), GroupError);

  // Every knot diagram with a crossing has as many strokes as crossings.
  std::mt19937_64 rng(3);
  int knots = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto w = random_word(rng, trial % 2 ? 4 : 6, 1 + rng() % 9);
    const auto p = wirtinger_from_plat(w);
    for (const auto& c : p.crossings) CHECK(std::max({c.over, c.in, c.out}) < p.strokes);
    if (p.components != 1) continue;
    ++knots;
    CHECK(p.strokes == p.crossings.size());
  }
  CHECK(knots > 20);
}

TEST_CASE("homomorphism counts") {
  const auto S3 = FiniteGroup::symmetric(3);
  const auto transpositions = FluxSet::conjugacy_class(S3, perm_elem(S3, {{0, 1}}));
  const auto unknot = wirtinger_from_plat(BraidWord(2));
  const auto trefoil = wirtinger_from_plat(BraidWord::parse("B4: s2 s2 s2"));

  CHECK(count_homomorphisms(unknot, transpositions) == 3);
  CHECK(count_homomorphisms(trefoil, transpositions) == 9);
  CHECK(count_homomorphisms(split_union(trefoil, trefoil), transpositions) == 81);
  CHECK(count_homomorphisms(split_union(trefoil, unknot), transpositions) == 27);
  const auto two_trefoils = plat_split_union(BraidWord::parse("B4: s2 s2 s2"), BraidWord::parse("B4: s2 s2 s2"));
  CHECK(two_trefoils.to_string() == "B8: s2 s2 s2 s6 s6 s6");
  CHECK(count_homomorphisms(wirtinger_from_plat(two_trefoils), transpositions) == 81);

  SUBCASE("propagation agrees with naive enumeration") {
    std::mt19937_64 rng(5);
    const auto sets = corpus_flux_sets();
    for (int trial = 0; trial < 60; ++trial) {
      const auto w = random_word(rng, 4, 1 + rng() % 6);
      const auto p = wirtinger_from_plat(w);
      const auto& s = sets[std::size_t(trial) % 4];
      CHECK(count_homomorphisms(p, s) == brute_force_count(p, s));
    }
  }

  SUBCASE("Hilden moves leave the count unchanged") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
      const auto w = random_word(rng, 6, 2 + rng() % 8);
      const auto base = count_homomorphisms(wirtinger_from_plat(w), transpositions);
      for (const auto& h1 : hilden_generators(6))
        for (const auto& h2 : hilden_generators(6))
          CHECK(count_homomorphisms(wirtinger_from_plat(h1 * w * h2.inverse()), transpositions) == base);
    }
  }

  SUBCASE("node limit") {
    CountOptions opt;
    opt.node_limit = 2;
    CHECK_THROWS_AS(count_homomorphisms(trefoil, transpositions, opt), CapExceeded);
  }

  SUBCASE("thread count does not change the result") {
    CountOptions opt;
    opt.threads = 3;
    const auto granny = wirtinger_from_plat(BraidWord::parse("B6: s2 s2 s2 s4 s4 s4"));
    CHECK(count_homomorphisms(granny, transpositions, opt) == 27);
  }
}

TEST_CASE("fluxon plat amplitudes equal rescaled homomorphism counts") {
  const auto sets = corpus_flux_sets();
  for (const auto& knot : kCorpus) {
    const auto w = BraidWord::parse(knot.braid);
    for (const auto& s : sets) {
      CAPTURE(knot.name);
      CAPTURE(s.group().name());
      CAPTURE(s.size());
      const auto r = verify_fluxon_identity(w, s);
      CHECK(r.passed);
      CHECK(r.error < 1e-9);
      if (knot.name == std::string("unknot")) CHECK(r.homomorphisms == s.size());
    }
  }
  // Frozen values for the transpositions of S3 (three times the Fox 3-colorings / 3).
  const std::uint64_t expected[] = {3, 9, 3, 3, 27};
  for (std::size_t k = 0; k < std::size(kCorpus); ++k)
    CHECK(verify_fluxon_identity(BraidWord::parse(kCorpus[k].braid), sets[0]).homomorphisms == expected[k]);
  // The figure-eight knot has determinant 5: 25 colorings by reflections of D5.
  const Perm r5 = perm_from_cycles(5, {{0, 1, 2, 3, 4}}), f5 = perm_from_cycles(5, {{1, 4}, {2, 3}});
  const std::vector<Perm> gens{r5, f5};
  const auto D5 = FiniteGroup::from_permutations(5, gens, "D5");
  const auto reflections = FluxSet::conjugacy_class(D5, *D5.find(f5));
  CHECK(count_homomorphisms(wirtinger_from_plat(BraidWord::parse("B4: s2 s2 S1 s2")), reflections) == 25);
  CHECK(count_homomorphisms(wirtinger_from_plat(BraidWord::parse("B4: s2 s2 s2")), reflections) == 5);
}

TEST_CASE("group equation systems") {
  const auto S3 = FiniteGroup::symmetric(3);
  const auto transpositions = FluxSet::conjugacy_class(S3, perm_elem(S3, {{0, 1}}));
  // The trefoil relations written directly as conjugation equations.
  const auto p = wirtinger_from_plat(BraidWord::parse("B4: s2 s2 s2"));
  GroupEquationSystem sys;
  sys.variables = p.strokes;
  for (const auto& c : p.crossings) {
    // x_out = x_over^s x_in x_over^-s, i.e. x_in = t^-1 x_out t with t = x_over^s
    if (c.sign > 0)
      sys.add_conjugation(c.in, c.out, c.over);
    else
      sys.equations.push_back({{{true, std::uint32_t(c.out), 1}},
                               {{true, std::uint32_t(c.over), 1}, {true, std::uint32_t(c.in), 1}, {true, std::uint32_t(c.over), -1}}});
  }
  const std::vector<std::optional<Elem>> free(p.strokes);
  CHECK(count_solutions(sys, transpositions, free) == 9);
  std::vector<std::optional<Elem>> pinned(p.strokes);
  pinned[0] = transpositions.members()[0];
  CHECK(count_solutions(sys, transpositions, pinned) == 3);
  CHECK_THROWS_AS(sys.add_conjugation(0, 1, 7), GroupError);
  CHECK_THROWS_AS(count_solutions(sys, transpositions, free, 3), CapExceeded);

  const std::vector<Elem> values{1, 2, 3};
  CHECK(evaluate(S3, {{true, 0, 1}, {false, 4, -1}, {true, 2, 2}}, values) ==
        S3.mul(S3.mul(1, S3.inv(4)), S3.mul(3, 3)));
}

TEST_CASE("conjugation equations") {
  const auto A5 = FiniteGroup::alternating(5);
  const auto three = FluxSet::conjugacy_class(A5, perm_elem(A5, {{0, 1, 2}}));
  for (Elem a : three.members()) {
    const auto sol = conjugation_equation_solutions(three, a, 0);
    CHECK(std::find(sol.begin(), sol.end(), a) != sol.end());
    for (Elem y : sol) CHECK(A5.conj(y, a) == y);
  }

  SUBCASE("A7 instance") {
    const auto A7 = FiniteGroup::alternating(7);
    const auto cls = FluxSet::conjugacy_class(A7, perm_elem(A7, {{0, 1, 2}}));
    CHECK(cls.size() == 70);
    const Elem alpha = perm_elem(A7, {{0, 1, 2}});
    const Elem b = perm_elem(A7, {{0, 2}, {4, 3}});
    const auto sol = conjugation_equation_solutions(cls, alpha, b);
    CHECK(sol.size() >= 2);
    const Elem y127 = perm_elem(A7, {{0, 1, 6}}), y126 = perm_elem(A7, {{0, 1, 5}});
    CHECK(std::find(sol.begin(), sol.end(), y127) != sol.end());
    CHECK(std::find(sol.begin(), sol.end(), y126) != sol.end());
    for (Elem y : sol) {
      CAPTURE(A7.cycle_notation(y));
      CHECK(A7.conj(A7.mul(b, y), alpha) == y);
    }
  }

  SUBCASE("trivial group") {
    const auto trivial = FiniteGroup::cyclic(1);
    const auto cls = FluxSet::conjugacy_class(trivial, 0);
    CHECK(conjugation_equation_solutions(cls, 0, 0).size() == 1);
  }
}

TEST_CASE("kernel images and relating words") {
  const auto A5 = FiniteGroup::alternating(5);
  const Elem c1 = perm_elem(A5, {{0, 1, 2}}), c2 = perm_elem(A5, {{2, 3, 4}});
  const std::vector<Elem> c{c1, c2};
  const std::vector<Elem> d{c1, c1};

  CHECK(pair_subgroup_image(A5, c, c).order() == 1);
  const auto image = pair_subgroup_image(A5, c, d);
  CHECK(image.order() == 60);

  // Normality in <c> for a non-simple case as well.
  const auto S4 = FiniteGroup::symmetric(4);
  const std::vector<Elem> cs{perm_elem(S4, {{0, 1}}), perm_elem(S4, {{0, 1, 2, 3}})};
  const std::vector<Elem> ds{perm_elem(S4, {{0, 1}}), perm_elem(S4, {{0, 1}})};
  for (const auto& [G, cc, dd] : {std::tuple{A5, c, d}, std::tuple{S4, cs, ds}}) {
    const auto a = pair_subgroup_image(G, cc, dd);
    const auto gen = closure(G, cc);
    for (Elem x : gen)
      for (Elem y : a.members()) CHECK(a.contains(G.conj(x, y)));
  }
  CHECK(pair_subgroup_image(S4, cs, ds).order() == 12);

  CHECK(find_relating_word(A5, c, d, 0).empty());
  for (Elem alpha : image.members()) {
    const auto w = find_relating_word(A5, c, d, alpha);
    CHECK(evaluate_word(A5, w, c) == alpha);
    CHECK(evaluate_word(A5, w, d) == 0);
    CHECK(w.size() <= A5.order() * A5.order());
  }
  CHECK_THROWS_AS(find_relating_word(A5, c, c, c1), NotReachable);
}

TEST_CASE("suppression amplifies the solution ratio") {
  const auto A5 = FiniteGroup::alternating(5);
  const auto three = FluxSet::conjugacy_class(A5, perm_elem(A5, {{0, 1, 2}}));
  const std::vector<Elem> c{perm_elem(A5, {{0, 1, 2}}), perm_elem(A5, {{2, 3, 4}})};
  const std::vector<Elem> d{c[0], c[0]};

  const auto r0 = suppression_amplification_check(three, c, d, 0);
  CHECK(r0.solutions_c == 1);
  CHECK(r0.solutions_d == 1);
  CHECK(r0.passed);

  const auto r1 = suppression_amplification_check(three, c, d, 1);
  CHECK(r1.passed);
  CHECK(r1.solutions_d == 1);
  CHECK(r1.solutions_c >= 2);
  CHECK(evaluate_word(A5, r1.word, c) == r1.alpha);
  CHECK(evaluate_word(A5, r1.word, d) == 0);
  CHECK(r1.solutions_c == conjugation_equation_solutions(three, c[0], r1.alpha).size());

  const auto r2 = suppression_amplification_check(three, c, d, 2);
  CHECK(r2.passed);
  CHECK(r2.solutions_c == r1.solutions_c * r1.solutions_c);
  CHECK(r2.solutions_d == 1);

  // The identity as alpha gives no amplification.
  CHECK_FALSE(suppression_amplification_check(three, c, d, 1, Elem(0)).passed);
}
