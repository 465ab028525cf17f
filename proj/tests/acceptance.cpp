// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qdk/braid.hpp"
#include "qdk/checks.hpp"
#include "qdk/clebsch_gordan.hpp"
#include "qdk/fourier.hpp"
#include "qdk/invariants.hpp"
#include "qdk/knot_oracle.hpp"

using namespace qdk;

namespace {

struct Verdict {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

Elem perm_elem(const FiniteGroup& g, std::vector<std::vector<int>> cycles) {
  return *g.find(perm_from_cycles(g.degree(), cycles));
}

BraidWord random_word(std::mt19937_64& rng, int strands, std::size_t length) {
  std::vector<BraidLetter> letters;
  if (strands < 2) return BraidWord(strands);
  std::uniform_int_distribution<int> idx(1, strands - 1);
  for (std::size_t k = 0; k < length; ++k) letters.push_back({idx(rng), rng() % 2 ? 1 : -1});
  return BraidWord(strands, std::move(letters));
}

Vec random_state(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> nd;
  Vec v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) x = cplx(nd(rng), nd(rng));
  return v.normalized();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FiniteGroup quaternion_group() {
  // Left-regular action on 1, -1, i, -i, j, -j, k, -k.
  const std::vector<Perm> gens{{2, 3, 1, 0, 6, 7, 5, 4}, {4, 5, 7, 6, 1, 0, 2, 3}};
  return FiniteGroup::from_permutations(8, gens, "Q8");
}

FiniteGroup dihedral_group(int n) {
  std::vector<std::vector<int>> rot(1);
  for (int k = 0; k < n; ++k) rot[0].push_back(k);
  std::vector<std::vector<int>> flip;
  for (int k = 1; k < n - k; ++k) flip.push_back({k, n - k});
  const std::vector<Perm> gens{perm_from_cycles(n, rot), perm_from_cycles(n, flip)};
  return FiniteGroup::from_permutations(n, gens, "D" + std::to_string(n));
}

// 1. Hopf and quasi-triangular axioms.
void hopf_axioms(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const FiniteGroup& g : {FiniteGroup::cyclic(2), FiniteGroup::cyclic(6), FiniteGroup::symmetric(3),
                               FiniteGroup::symmetric(4), FiniteGroup::semidirect(7, 3, 2)}) {
    const SuiteReport r = hopf_axiom_suite(g);
    v.require(r.passed() && r.max_deviation() == 0, g.name());
    v.detail << g.name() << ": " << r.properties.size() << " properties, max deviation " << r.max_deviation() << "; ";
  }
  const double t = seconds_since(t0);
  v.require(t < 30, "runtime");
  v.detail << t << " s";
}

// 2. Braid relations as exact permutations on the regular module of D(S3).
void braid_relations(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport r = braid_relation_suite(QuantumDouble(FiniteGroup::symmetric(3)));
  for (const char* name : {"yang-baxter (regular)", "far commutation (regular)"}) {
    bool found = false;
    for (const auto& p : r.properties)
      if (p.name == name) {
        found = true;
        v.require(p.passed && p.max_deviation == 0 && p.detail.find("skipped") == std::string::npos, name);
        v.detail << name << ": " << p.detail << "; ";
      }
    v.require(found, std::string("missing ") + name);
  }
  v.require(r.passed(), "suite");
  const double t = seconds_since(t0);
  v.require(t < 60, "runtime");
  v.detail << t << " s";
}

// 3. Irrep dimensions square-sum to |G|^2.
void irrep_completeness(Verdict& v) {
  std::vector<FiniteGroup> groups;
  for (int n = 1; n <= 24; ++n) groups.push_back(FiniteGroup::cyclic(n));
  groups.push_back(FiniteGroup::symmetric(3));
  groups.push_back(FiniteGroup::symmetric(4));
  groups.push_back(FiniteGroup::alternating(4));
  groups.push_back(quaternion_group());
  for (int n : {4, 5, 6}) groups.push_back(dihedral_group(n));
  for (const auto& [p, q] : {std::pair{5, 2}, {7, 2}, {7, 3}, {11, 2}, {13, 1}}) {
    int alpha = 1;
    for (int a = 2; a < p && q > 1; ++a) {
      long long x = 1;
      for (int k = 0; k < q; ++k) x = x * a % p;
      if (x == 1) {
        alpha = a;
        break;
      }
    }
    groups.push_back(FiniteGroup::semidirect(p, q, alpha));
  }
  for (const FiniteGroup& g : groups) {
    const QuantumDouble qd(g);
    std::size_t sum = 0;
    for (const auto& l : qd.labels()) sum += qd.dim(l) * qd.dim(l);
    v.require(sum == g.order() * g.order(), g.name());
  }
  const QuantumDouble s3(FiniteGroup::symmetric(3));
  std::multiset<std::size_t> dims;
  for (const auto& l : s3.labels()) dims.insert(s3.dim(l));
  v.require(dims == std::multiset<std::size_t>{1, 1, 2, 2, 2, 2, 3, 3}, "D(S3) dimensions");
  v.detail << groups.size() << " groups up to order 24; D(S3) dims";
  for (std::size_t d : dims) v.detail << ' ' << d;
}

// 4. Fourier transform over D(S3) and D(S4).
void qft(Verdict& v) {
  for (int n : {3, 4}) {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport r = qft_suite(QuantumDouble(FiniteGroup::symmetric(n)), 1);
    const double t = seconds_since(t0);
    const std::map<std::string, double> limits{
        {"unitarity", 1e-9}, {"block structure", 1e-8}, {"restriction", 1e-9}};
    for (const auto& p : r.properties) {
      const auto it = limits.find(p.name);
      if (it != limits.end()) {
        v.require(p.max_deviation < it->second, r.group + " " + p.name);
        v.detail << r.group << ' ' << p.name << ' ' << p.max_deviation << "; ";
      }
    }
    v.require(r.passed(), r.group + " suite");
    v.require(t < 120, r.group + " runtime");
    v.detail << r.group << ' ' << t << " s; ";
  }
}

// 5. Markov moves leave the normalized trace closure unchanged.
void markov(Verdict& v) {
  const QuantumDouble qd(FiniteGroup::symmetric(3));
  const auto labels = qd.labels();
  std::mt19937_64 rng(2024);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const auto theta = random_word(rng, n, 1 + rng() % 8);
    const auto eta = random_word(rng, n, 1 + rng() % 8);
    const auto small = random_word(rng, n - 1, 1 + rng() % 6);
    const BraidWord move(n, {{n - 1, rng() % 2 ? 1 : -1}});
    for (const auto& l : labels) {
      worst = std::max(worst, std::abs(trace_closure(qd, l, theta * eta).value -
                                       trace_closure(qd, l, eta * theta).value));
      worst = std::max(worst, std::abs(trace_closure(qd, l, small).value -
                                       trace_closure(qd, l, small.widened(n) * move).value));
    }
  }
  v.require(worst <= 1e-8, "deviation");
  v.detail << "100 trials x 8 labels, max deviation " << worst;
}

// 6. Hilden moves and the stabilization ratio for fluxon plat closures.
void hilden(Verdict& v) {
  const auto S3 = FiniteGroup::symmetric(3);
  const auto A4 = FiniteGroup::alternating(4);
  const std::vector<FluxSet> sets{
      FluxSet::conjugacy_class(S3, perm_elem(S3, {{0, 1}})),
      FluxSet::conjugacy_class(S3, perm_elem(S3, {{0, 1, 2}})),
      FluxSet::conjugacy_class(A4, perm_elem(A4, {{0, 1}, {2, 3}})),
      FluxSet::inverse_closed_class(A4, perm_elem(A4, {{0, 1, 2}})),
  };
  std::mt19937_64 rng(77);
  double worst = 0;
  for (int strands : {4, 6}) {
    const auto gens = hilden_generators(strands);
    for (int trial = 0; trial < 100; ++trial) {
      const auto theta = random_word(rng, strands, 2 + rng() % 10);
      for (const FluxSet& f : sets) {
        const cplx base = plat_closure(f, theta).value;
        for (const auto& h1 : gens)
          for (const auto& h2 : gens) {
            worst = std::max(worst, std::abs(plat_closure(f, h1 * theta * h2).value - base));
            worst = std::max(worst, std::abs(plat_closure(f, h1.inverse() * theta * h2.inverse()).value - base));
          }
      }
    }
  }
  v.require(worst <= 1e-9, "Hilden deviation");
  v.detail << "B4 and B6, 100 braids each, 4 fluxon labels, max deviation " << worst << "; ";

  double worst_std = 0;
  for (const FluxSet& f : sets) {
    std::vector<double> re, im;
    for (int trial = 0; trial < 50; ++trial) {
      if (auto r = stabilization_ratio(f, random_word(rng, 4, 1 + rng() % 8))) {
        re.push_back(r->real());
        im.push_back(r->imag());
      }
    }
    v.require(re.size() >= 2, f.group().name() + " ratio defined");
    const auto stddev = [](const std::vector<double>& x) {
      double mean = 0, var = 0;
      for (double a : x) mean += a;
      mean /= double(x.size());
      for (double a : x) var += (a - mean) * (a - mean);
      return std::sqrt(var / double(x.size()));
    };
    worst_std = std::max({worst_std, stddev(re), stddev(im)});
    v.detail << f.group().name() << "|S|=" << f.size() << " ratio " << re.front() << " over " << re.size()
             << " braids; ";
  }
  v.require(worst_std < 1e-9, "stabilization spread");
  v.detail << "max std " << worst_std;
}

// 7. Plat amplitudes against homomorphism counts.
void oracle(Verdict& v) {
  const std::pair<const char*, const char*> corpus[] = {
      {"unknot", "B2:"},
      {"trefoil", "B4: s2 s2 s2"},
      {"figure-eight", "B4: s2 s2 S1 s2"},
      {"5_1", "B4: s2 s2 s2 s2 s2"},
      {"granny", "B6: s2 s2 s2 s4 s4 s4"},
  };
  const auto S3 = FiniteGroup::symmetric(3);
  const auto A4 = FiniteGroup::alternating(4);
  const auto A5 = FiniteGroup::alternating(5);
  const std::vector<FluxSet> sets{
      FluxSet::inverse_closed_class(S3, perm_elem(S3, {{0, 1}})),
      FluxSet::inverse_closed_class(A4, perm_elem(A4, {{0, 1, 2}})),
      FluxSet::inverse_closed_class(A5, perm_elem(A5, {{0, 1, 2, 3, 4}})),
  };
  double worst = 0;
  for (const auto& [name, text] : corpus)
    for (const FluxSet& s : sets) {
      const auto r = verify_fluxon_identity(BraidWord::parse(text), s);
      worst = std::max(worst, r.error);
      v.require(r.passed, std::string(name) + " / " + s.group().name());
    }
  const auto trefoil = verify_fluxon_identity(BraidWord::parse("B4: s2 s2 s2"), sets[0]);
  v.require(trefoil.homomorphisms == 9, "trefoil count");
  v.detail << "15 instances, max |Pl - h/|S|^n| " << worst << "; h(trefoil, S3 transpositions) = "
           << trefoil.homomorphisms;
}

// 8. Monte Carlo plat estimator at epsilon = 0.1.
void monte_carlo(Verdict& v) {
  const auto S3 = FiniteGroup::symmetric(3);
  const FluxSet flux = FluxSet::conjugacy_class(S3, perm_elem(S3, {{0, 1}}));
  const std::size_t k = chernoff_sample_count(0.1);
  v.require(k == 2219, "sample count");
  v.detail << "k = " << k;
  for (const char* text : {"B4: s2 s2 s2", "B4: s2 s2 S1 s2"}) {
    const BraidWord w = BraidWord::parse(text);
    const double exact = plat_closure(flux, w).value.real();
    int within = 0;
    bool indicator = true;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const InvariantValue est = plat_closure_fluxon_mc(flux, w, 0.1, seed);
      const SamplingInfo& s = *est.sampling;
      const double hits = s.mean.real() * double(s.samples);
      indicator = indicator && s.samples == k && s.scale == 1.0 && s.mean.imag() == 0 &&
                  std::abs(hits - std::round(hits)) < 1e-6;
      within += std::abs(est.value.real() - exact) <= 0.1;
    }
    v.require(within >= 99, std::string(text) + " concentration");
    v.require(indicator, std::string(text) + " indicator samples");
    v.detail << "; " << text << ": exact " << exact << ", " << within << "/100 within epsilon";
  }
}

// 9. Clebsch-Gordan decompositions.
void clebsch_gordan(Verdict& v) {
  const auto S3 = FiniteGroup::symmetric(3);
  const QuantumDouble qd(S3);
  const std::size_t tr = qd.class_of(perm_elem(S3, {{0, 1}}));
  const CGTransform t = fluxon_cg_transform(qd, tr, tr);
  std::multiset<std::size_t> dims;
  for (const CGBlock& b : t.blocks) dims.insert(b.dim);
  const double err = cg_intertwining_error(t);
  v.require(dims == std::multiset<std::size_t>{1, 2, 2, 2, 2}, "S3 fluxon dimensions");
  v.require(err < 1e-9, "S3 fluxon intertwining");
  v.detail << "S3 transpositions^2 dims";
  for (std::size_t d : dims) v.detail << ' ' << d;
  v.detail << ", intertwining error " << err << "; ";

  const auto S4 = FiniteGroup::symmetric(4);
  const QuantumDouble q4(S4);
  const auto& classes = q4.classes();
  for (std::size_t a = 0; a < classes.size(); ++a)
    for (std::size_t b = 0; b < classes.size(); ++b) {
      const auto dec = fluxon_cg_decompose(q4, a, b);
      std::vector<std::size_t> by_class(classes.size(), 0), product(classes.size(), 0);
      for (const auto& s : dec.summands) by_class[s.label.sector] += s.multiplicity * q4.charge_dim(s.label);
      for (const auto& term : class_algebra_product(S4, classes, b, a)) product[term.class_index] = term.multiplicity;
      v.require(by_class == product && dec.conditions_met() &&
                    dec.total_dim() == classes[a].members.size() * classes[b].members.size(),
                "S4 class pair " + std::to_string(a) + "," + std::to_string(b));
    }
  v.detail << "S4: " << classes.size() * classes.size() << " class pairs conserve class-algebra mass; ";

  const QuantumDouble z(FiniteGroup::semidirect(7, 3, 2));
  const auto& charges = z.charges(z.class_of(0));
  const std::pair<std::pair<int, int>, const char*> cases[] = {{{1, 1}, "rho1 rho3 rho3"},
                                                               {{1, 3}, "rho1 rho3 chi0 chi1 chi2"}};
  for (const auto& [kl, expected] : cases) {
    const CGTransform c = zpzq_cg_transform(z, kl.first, kl.second);
    std::string got;
    for (const CGBlock& b : c.blocks) got += (got.empty() ? "" : " ") + charges[b.label.charge].label;
    const double e = std::max(cg_intertwining_error(c), unitarity_error(c.unitary));
    v.require(got == expected && e < 1e-9, "Z7xZ3 rho" + std::to_string(kl.first) + "*rho" + std::to_string(kl.second));
    v.detail << "rho" << kl.first << "*rho" << kl.second << " = " << got << " (error " << e << "); ";
  }
}

// 10. Equation gadgets.
void gadgets(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto A7 = FiniteGroup::alternating(7);
  const FluxSet c7 = FluxSet::conjugacy_class(A7, perm_elem(A7, {{0, 1, 2}}));
  const auto sol = conjugation_equation_solutions(c7, perm_elem(A7, {{0, 1, 2}}), perm_elem(A7, {{0, 2}, {4, 3}}));
  v.require(sol.size() >= 2, "A7 solutions");
  v.detail << "A7 3-cycles: " << sol.size() << " solutions; ";

  const auto A5 = FiniteGroup::alternating(5);
  const std::vector<Elem> c{perm_elem(A5, {{0, 1, 2}}), perm_elem(A5, {{2, 3, 4}})};
  const std::vector<Elem> d{c[0], c[0]};
  const Subgroup image = pair_subgroup_image(A5, c, d);
  bool normal = true;
  for (Elem x : closure(A5, c))
    for (Elem y : image.members()) normal = normal && image.contains(A5.conj(x, y));
  v.require(normal && image.order() == 60, "kernel image");
  v.detail << "kernel image order " << image.order() << (normal ? ", normal" : ", not normal") << "; ";

  const FluxSet three = FluxSet::conjugacy_class(A5, c[0]);
  for (std::size_t ell : {1, 2}) {
    const auto r = suppression_amplification_check(three, c, d, ell);
    v.require(r.passed && r.solutions_c >= (std::uint64_t(1) << ell) * r.solutions_d, "ell " + std::to_string(ell));
    v.detail << "ell " << ell << ": " << r.solutions_c << " vs " << r.solutions_d << "; ";
  }
  const double t = seconds_since(t0);
  v.require(t < 300, "runtime");
  v.detail << t << " s";
}

// 11. Fusion by measuring the output label.
void fusion(Verdict& v) {
  const auto S3 = FiniteGroup::symmetric(3);
  const QuantumDouble qd(S3);
  const DGIrrepLabel vacuum{qd.class_of(0), 0};
  double worst_vacuum = 0;
  for (const auto& l : qd.labels()) {
    const auto bar = conjugate_irrep(qd, l);
    const auto out = fuse(cg_transform(qd, l, bar), vacuum_state(qd, l, bar), 1);
    v.require(out.label == vacuum, qd.describe(l) + " outcome");
    worst_vacuum = std::max(worst_vacuum, std::abs(out.probability - 1.0));
  }
  const std::size_t tr = qd.class_of(perm_elem(S3, {{0, 1}}));
  const auto flux_out = fuse(fluxon_cg_transform(qd, tr, tr), pair_state(qd, qd.fluxon(tr)), 2);
  v.require(flux_out.label == vacuum, "fluxon pair outcome");
  worst_vacuum = std::max(worst_vacuum, std::abs(flux_out.probability - 1.0));
  v.require(worst_vacuum <= 1e-12, "vacuum probability");

  const auto labels = qd.labels();
  std::mt19937_64 rng(99);
  double worst_sum = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& a = labels[rng() % labels.size()];
    const auto& b = labels[rng() % labels.size()];
    const CGTransform t = cg_transform(qd, a, b);
    const auto out = fuse(t, random_state(rng, std::size_t(t.unitary.rows())), std::uint64_t(trial));
    double total = 0;
    for (const auto& [label, p] : out.distribution) total += p;
    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
  }
  v.require(worst_sum <= 1e-12, "probability sums");
  v.detail << "vacuum probability error " << worst_vacuum << "; 100 random states, max |sum - 1| " << worst_sum;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Verdict&)>> criteria[] = {
      {"Hopf and quasi-triangular axioms", hopf_axioms},
      {"braid relations", braid_relations},
      {"irrep completeness", irrep_completeness},
      {"Fourier transform", qft},
      {"Markov invariance", markov},
      {"Hilden invariance", hilden},
      {"oracle equivalence", oracle},
      {"Monte Carlo concentration", monte_carlo},
      {"Clebsch-Gordan", clebsch_gordan},
      {"equation gadgets", gadgets},
      {"fusion", fusion},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(v);
    } catch (const std::exception& e) {
      v.passed = false;
      v.detail << "[exception: " << e.what() << "]";
    }
    failures += !v.passed;
    std::printf("criterion %2d %s: %s (%.2f s) %s\n", index, v.passed ? "PASS" : "FAIL", name, seconds_since(t0),
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
