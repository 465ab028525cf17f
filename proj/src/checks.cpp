#include "qdk/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "qdk/braid.hpp"
#include "qdk/clebsch_gordan.hpp"
#include "qdk/double_algebra.hpp"
#include "qdk/fourier.hpp"
#include "qdk/invariants.hpp"
#include "qdk/rng.hpp"

namespace qdk {

bool SuiteReport::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed; });
}

double SuiteReport::max_deviation() const {
  double m = 0;
  for (const auto& p : properties) m = std::max(m, p.max_deviation);
  return m;
}

namespace {

constexpr std::uint32_t kZero = ~std::uint32_t(0);
constexpr double kNumericTolerance = 1e-9;
constexpr double kBlockTolerance = 1e-8;
constexpr std::size_t kPermutationStateCap = 5000000;

template <class T>
double multiset_gap(std::vector<T> a, std::vector<T> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a == b) return 0;
  // Largest difference in multiplicity of any element.
  double gap = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    const T& key = (j >= b.size() || (i < a.size() && a[i] < b[j])) ? a[i] : b[j];
    std::size_t ca = 0, cb = 0;
    while (i < a.size() && a[i] == key) ++i, ++ca;
    while (j < b.size() && b[j] == key) ++j, ++cb;
    gap = std::max(gap, std::abs(double(ca) - double(cb)));
  }
  return gap;
}

// Tallies mismatches of one named property.
struct Tally {
  std::string name;
  double gap = 0;
  std::size_t cases = 0;
  std::size_t failures = 0;

  void record(double g) {
    ++cases;
    if (g > 0) ++failures;
    gap = std::max(gap, g);
  }
  PropertyResult result() const {
    return {name, failures == 0, gap,
            std::to_string(cases) + " cases, " + std::to_string(failures) + " mismatches"};
  }
};

PropertyResult numeric(std::string name, double deviation, double tol, std::string detail) {
  return {std::move(name), deviation < tol, deviation, std::move(detail)};
}

// D(G) on flat basis indices g * |G| + h. Products, coproducts and antipodes are
// taken from the algebra module once and then looked up.
class FlatDouble {
 public:
  explicit FlatDouble(const FiniteGroup& g) : g_(g), n_(g.order()), nb_(n_ * n_) {
    prod_.assign(nb_ * nb_, kZero);
    for (std::uint32_t a = 0; a < nb_; ++a)
      for (std::uint32_t b = 0; b < nb_; ++b)
        if (auto p = basis_product(g, basis(a), basis(b))) prod_[a * nb_ + b] = index(*p);
    coproduct_.resize(nb_);
    antipode_.resize(nb_);
    counit_.resize(nb_);
    for (std::uint32_t a = 0; a < nb_; ++a) {
      const auto x = DGElement::basis(g, basis(a).g, basis(a).h);
      const DGTensor delta = comultiply(x);
      for (const auto& [key, c] : delta.terms()) {
        if (c != cplx(1)) ++non_unit_;
        coproduct_[a].push_back({index(key.first), index(key.second)});
      }
      const auto s = antipode(x);
      if (s.terms().size() != 1 || s.terms().begin()->second != cplx(1)) ++non_unit_;
      antipode_[a] = index(s.terms().begin()->first);
      const cplx e = counit(x);
      if (e != cplx(0) && e != cplx(1)) ++non_unit_;
      counit_[a] = e == cplx(1);
    }
  }

  const FiniteGroup& group() const { return g_; }
  std::uint32_t n() const { return std::uint32_t(n_); }
  std::uint32_t size() const { return std::uint32_t(nb_); }
  std::uint32_t index(DGBasis b) const { return b.g * std::uint32_t(n_) + b.h; }
  DGBasis basis(std::uint32_t i) const { return {Elem(i / n_), Elem(i % n_)}; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return a == kZero || b == kZero ? kZero : prod_[std::size_t(a) * nb_ + b];
  }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& coproduct(std::uint32_t a) const {
    return coproduct_[a];
  }
  std::uint32_t antipode_of(std::uint32_t a) const { return a == kZero ? kZero : antipode_[a]; }
  bool counit_of(std::uint32_t a) const { return a != kZero && counit_[a]; }
  // Coefficients other than 0 and 1 would make the multiset comparisons unsound.
  std::size_t non_unit_coefficients() const { return non_unit_; }

  std::vector<std::uint32_t> unit() const {
    std::vector<std::uint32_t> out;
    for (Elem h = 0; h < n_; ++h) out.push_back(index({0, h}));
    return out;
  }

 private:
  FiniteGroup g_;
  std::size_t n_, nb_;
  std::vector<std::uint32_t> prod_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> coproduct_;
  std::vector<std::uint32_t> antipode_;
  std::vector<std::uint8_t> counit_;
  std::size_t non_unit_ = 0;
};

using Pair = std::pair<std::uint32_t, std::uint32_t>;
using Triple = std::array<std::uint32_t, 3>;

std::vector<Pair> tensor_terms(const FlatDouble& d, const DGTensor& t, std::size_t& non_unit) {
  std::vector<Pair> out;
  for (const auto& [key, c] : t.terms()) {
    if (c != cplx(1)) ++non_unit;
    out.push_back({d.index(key.first), d.index(key.second)});
  }
  return out;
}

// Factorwise product of two multisets of triples; y is bucketed by first factor.
std::vector<Triple> triple_product(const FlatDouble& d, const std::vector<Triple>& x, const std::vector<Triple>& y) {
  std::vector<std::vector<std::size_t>> bucket(d.size());
  std::vector<std::uint32_t> keys;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (bucket[y[i][0]].empty()) keys.push_back(y[i][0]);
    bucket[y[i][0]].push_back(i);
  }
  std::vector<Triple> out;
  for (const auto& a : x)
    for (std::uint32_t k : keys) {
      const std::uint32_t first = d.mul(a[0], k);
      if (first == kZero) continue;
      for (std::size_t i : bucket[k]) {
        const std::uint32_t second = d.mul(a[1], y[i][1]);
        const std::uint32_t third = d.mul(a[2], y[i][2]);
        if (second != kZero && third != kZero) out.push_back({first, second, third});
      }
    }
  return out;
}

void hopf_algebra_axioms(const FlatDouble& d, SuiteReport& rep) {
  const std::uint32_t nb = d.size();
  const auto one = d.unit();

  Tally assoc{"associativity"};
  for (std::uint32_t a = 0; a < nb; ++a)
    for (std::uint32_t b = 0; b < nb; ++b) {
      const std::uint32_t ab = d.mul(a, b);
      std::size_t bad = 0;
      for (std::uint32_t c = 0; c < nb; ++c)
        if (d.mul(ab, c) != d.mul(a, d.mul(b, c))) ++bad;
      assoc.record(bad ? 1.0 : 0.0);
    }
  rep.properties.push_back(assoc.result());

  Tally unit{"unit"};
  for (std::uint32_t a = 0; a < nb; ++a) {
    std::vector<std::uint32_t> left, right;
    for (auto u : one) {
      if (auto p = d.mul(u, a); p != kZero) left.push_back(p);
      if (auto p = d.mul(a, u); p != kZero) right.push_back(p);
    }
    unit.record(std::max(multiset_gap(left, {a}), multiset_gap(right, {a})));
  }
  rep.properties.push_back(unit.result());

  Tally coassoc{"coassociativity"};
  Tally counit{"counit"};
  Tally antipode{"antipode axiom"};
  Tally involution{"antipode involution"};
  for (std::uint32_t a = 0; a < nb; ++a) {
    std::vector<Triple> left, right;
    std::vector<std::uint32_t> el, er, sl, sr;
    for (const auto& [x, y] : d.coproduct(a)) {
      for (const auto& [x1, x2] : d.coproduct(x)) left.push_back({x1, x2, y});
      for (const auto& [y1, y2] : d.coproduct(y)) right.push_back({x, y1, y2});
      if (d.counit_of(x)) el.push_back(y);
      if (d.counit_of(y)) er.push_back(x);
      if (auto p = d.mul(d.antipode_of(x), y); p != kZero) sl.push_back(p);
      if (auto p = d.mul(x, d.antipode_of(y)); p != kZero) sr.push_back(p);
    }
    coassoc.record(multiset_gap(left, right));
    counit.record(std::max(multiset_gap(el, {a}), multiset_gap(er, {a})));
    const std::vector<std::uint32_t> expect = d.counit_of(a) ? one : std::vector<std::uint32_t>{};
    antipode.record(std::max(multiset_gap(sl, expect), multiset_gap(sr, expect)));
    involution.record(d.antipode_of(d.antipode_of(a)) == a ? 0.0 : 1.0);
  }
  rep.properties.push_back(coassoc.result());
  rep.properties.push_back(counit.result());

  Tally delta_mul{"comultiplication is multiplicative"};
  Tally eps_mul{"counit is multiplicative"};
  Tally anti{"antipode antihomomorphism"};
  std::vector<std::uint64_t> lhs, rhs;
  auto key = [](std::uint32_t x, std::uint32_t y) { return (std::uint64_t(x) << 32) | y; };
  for (std::uint32_t a = 0; a < nb; ++a)
    for (std::uint32_t b = 0; b < nb; ++b) {
      const std::uint32_t ab = d.mul(a, b);
      lhs.clear();
      rhs.clear();
      if (ab != kZero)
        for (const auto& [x, y] : d.coproduct(ab)) lhs.push_back(key(x, y));
      for (const auto& [x1, x2] : d.coproduct(a))
        for (const auto& [y1, y2] : d.coproduct(b)) {
          const std::uint32_t p = d.mul(x1, y1);
          if (p == kZero) continue;
          const std::uint32_t q = d.mul(x2, y2);
          if (q != kZero) rhs.push_back(key(p, q));
        }
      delta_mul.record(multiset_gap(lhs, rhs));
      eps_mul.record(d.counit_of(ab) == (d.counit_of(a) && d.counit_of(b)) ? 0.0 : 1.0);
      anti.record(d.antipode_of(ab) == d.mul(d.antipode_of(b), d.antipode_of(a)) ? 0.0 : 1.0);
    }
  rep.properties.push_back(delta_mul.result());
  rep.properties.push_back(eps_mul.result());
  rep.properties.push_back(antipode.result());
  rep.properties.push_back(anti.result());
  rep.properties.push_back(involution.result());
}

void quasi_triangular_axioms(const FlatDouble& d, SuiteReport& rep) {
  const FiniteGroup& G = d.group();
  const std::uint32_t nb = d.size();
  std::size_t non_unit = 0;
  const auto r = tensor_terms(d, r_matrix(G), non_unit);

  const auto unit2 = DGTensor::unit(G);
  const double inv_gap = std::max((r_matrix(G) * r_matrix_inverse(G)).max_abs_diff(unit2),
                                  (r_matrix_inverse(G) * r_matrix(G)).max_abs_diff(unit2));
  rep.properties.push_back({"R invertible", inv_gap == 0, inv_gap, "R R^-1 = R^-1 R = 1 (x) 1"});

  // R Delta(a) R^-1 = T Delta(a), compared as operators on the faithful module
  // C[D(G)] (x) C[D(G)] with D(G) acting by left multiplication.
  const std::uint64_t states = std::uint64_t(nb) * nb;
  auto apply_pairs = [&](const std::vector<Pair>& terms, std::uint64_t s, std::vector<std::uint64_t>& out) {
    const std::uint32_t u = std::uint32_t(s / nb), v = std::uint32_t(s % nb);
    for (const auto& [x, y] : terms) {
      const std::uint32_t p = d.mul(x, u);
      if (p == kZero) continue;
      const std::uint32_t q = d.mul(y, v);
      if (q != kZero) out.push_back(std::uint64_t(p) * nb + q);
    }
  };
  std::vector<std::uint64_t> r_perm(states), rinv_perm(states);
  Tally perm{"R acts by permutation"};
  {
    const auto rinv = tensor_terms(d, r_matrix_inverse(G), non_unit);
    std::vector<std::uint64_t> img;
    for (std::uint64_t s = 0; s < states; ++s) {
      img.clear();
      apply_pairs(r, s, img);
      perm.record(img.size() == 1 ? 0.0 : 1.0);
      r_perm[s] = img.empty() ? 0 : img[0];
      img.clear();
      apply_pairs(rinv, s, img);
      perm.record(img.size() == 1 ? 0.0 : 1.0);
      rinv_perm[s] = img.empty() ? 0 : img[0];
    }
  }
  rep.properties.push_back(perm.result());

  Tally cocomm{"quasi-cocommutativity"};
  // For each a, the coproduct terms that act nontrivially on a given first / second factor.
  std::vector<std::vector<std::size_t>> by_first(nb), by_second(nb);
  std::vector<std::uint64_t> lhs, rhs;
  for (std::uint32_t a = 0; a < nb; ++a) {
    const auto& delta = d.coproduct(a);
    for (auto& v : by_first) v.clear();
    for (auto& v : by_second) v.clear();
    for (std::size_t t = 0; t < delta.size(); ++t)
      for (std::uint32_t u = 0; u < nb; ++u) {
        if (d.mul(delta[t].first, u) != kZero) by_first[u].push_back(t);
        if (d.mul(delta[t].second, u) != kZero) by_second[u].push_back(t);
      }
    std::size_t bad = 0;
    for (std::uint64_t s = 0; s < states; ++s) {
      lhs.clear();
      rhs.clear();
      const std::uint64_t w = rinv_perm[s];
      const std::uint32_t wu = std::uint32_t(w / nb), wv = std::uint32_t(w % nb);
      for (std::size_t t : by_first[wu]) {
        const std::uint32_t q = d.mul(delta[t].second, wv);
        if (q != kZero) lhs.push_back(r_perm[std::uint64_t(d.mul(delta[t].first, wu)) * nb + q]);
      }
      const std::uint32_t u = std::uint32_t(s / nb), v = std::uint32_t(s % nb);
      for (std::size_t t : by_second[u]) {
        const std::uint32_t q = d.mul(delta[t].first, v);
        if (q != kZero) rhs.push_back(std::uint64_t(d.mul(delta[t].second, u)) * nb + q);
      }
      if (lhs != rhs && multiset_gap(lhs, rhs) > 0) ++bad;
    }
    cocomm.record(bad ? 1.0 : 0.0);
  }
  rep.properties.push_back(cocomm.result());

  // (Delta (x) 1) R = R13 R23 and (1 (x) Delta) R = R13 R12.
  std::vector<Triple> delta_left, delta_right, r13, r23, r12;
  for (const auto& [x, y] : r) {
    for (const auto& [x1, x2] : d.coproduct(x)) delta_left.push_back({x1, x2, y});
    for (const auto& [y1, y2] : d.coproduct(y)) delta_right.push_back({x, y1, y2});
    for (std::uint32_t k = 0; k < d.n(); ++k) {
      const std::uint32_t e = d.index({0, Elem(k)});
      r13.push_back({x, e, y});
      r23.push_back({e, x, y});
      r12.push_back({x, y, e});
    }
  }
  const double left_gap = multiset_gap(delta_left, triple_product(d, r13, r23));
  const double right_gap = multiset_gap(delta_right, triple_product(d, r13, r12));
  rep.properties.push_back({"R coproduct (first factor)", left_gap == 0, left_gap, "(Delta (x) 1) R = R13 R23"});
  rep.properties.push_back({"R coproduct (second factor)", right_gap == 0, right_gap, "(1 (x) Delta) R = R13 R12"});
  rep.properties.push_back({"unit coefficients", non_unit == 0, double(non_unit),
                            "R and R^-1 have 0/1 coefficients in the basis"});
}

std::string dims_text(std::vector<std::size_t> dims) {
  std::sort(dims.begin(), dims.end());
  std::ostringstream os;
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
  return os.str();
}

std::uint64_t power(std::uint64_t base, int e) {
  std::uint64_t out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

// Compares two words on every basis tuple of a permutation module.
PropertyResult permutation_relation(const std::string& name, const BraidRepresentation& rep, const BraidWord& a,
                                    const BraidWord& b) {
  const std::uint64_t d = rep.local_dim();
  const int n = a.strands();
  const std::uint64_t total = power(d, n);
  if (total > kPermutationStateCap)
    return {name, true, 0, "skipped: " + std::to_string(total) + " basis states exceed the cap " +
                               std::to_string(kPermutationStateCap)};
  std::size_t bad = 0;
  BasisTuple t(std::size_t(n), 0);
  for (std::uint64_t s = 0; s < total; ++s) {
    std::uint64_t r = s;
    for (int k = n - 1; k >= 0; --k) {
      t[std::size_t(k)] = std::uint32_t(r % d);
      r /= d;
    }
    if (rep.apply(a, t) != rep.apply(b, t)) ++bad;
  }
  return {name, bad == 0, bad ? 1.0 : 0.0,
          std::to_string(total) + " basis states, " + std::to_string(bad) + " mismatches"};
}

double dense_relation_gap(const BraidRepresentation& rep, const BraidWord& a, const BraidWord& b) {
  const auto total = Eigen::Index(power(rep.local_dim(), a.strands()));
  double gap = 0;
  for (Eigen::Index i = 0; i < total; ++i) {
    Vec e = Vec::Zero(total);
    e[i] = 1.0;
    gap = std::max(gap, (rep.apply_dense(a, e) - rep.apply_dense(b, e)).cwiseAbs().maxCoeff());
  }
  return gap;
}

}  // namespace

SuiteReport hopf_axiom_suite(const FiniteGroup& g) {
  if (g.order() > kAxiomOrderLimit)
    throw CapExceeded("axiom suite limited to |G| <= " + std::to_string(kAxiomOrderLimit) + ", got " +
                      std::to_string(g.order()));
  SuiteReport rep{"axioms", g.name(), {}};
  const FlatDouble d(g);
  rep.properties.push_back({"basis coefficients", d.non_unit_coefficients() == 0,
                            double(d.non_unit_coefficients()), "Delta, S and eps of basis elements are 0/1"});
  hopf_algebra_axioms(d, rep);
  quasi_triangular_axioms(d, rep);
  return rep;
}

SuiteReport braid_relation_suite(const QuantumDouble& qd) {
  const FiniteGroup& G = qd.group();
  SuiteReport rep{"braid", G.name(), {}};
  const auto yb_left = BraidWord::parse("B3: s1 s2 s1"), yb_right = BraidWord::parse("B3: s2 s1 s2");
  const auto far_left = BraidWord::parse("B4: s1 s3"), far_right = BraidWord::parse("B4: s3 s1");
  const auto cancel = BraidWord::parse("B2: s1 S1"), identity = BraidWord(2);

  const auto regular = BraidRepresentation::regular(G);
  rep.properties.push_back(permutation_relation("yang-baxter (regular)", regular, yb_left, yb_right));
  rep.properties.push_back(permutation_relation("far commutation (regular)", regular, far_left, far_right));
  rep.properties.push_back(permutation_relation("inverse (regular)", regular, cancel, identity));

  for (std::size_t s = 0; s < qd.sector_count(); ++s) {
    const auto flux = BraidRepresentation::fluxon(FluxSet::conjugacy_class(G, qd.sector(s).cls.representative));
    const std::string tag = " (fluxon " + G.element_label(qd.sector(s).cls.representative) + ")";
    rep.properties.push_back(permutation_relation("yang-baxter" + tag, flux, yb_left, yb_right));
    rep.properties.push_back(permutation_relation("far commutation" + tag, flux, far_left, far_right));
  }

  double gap = 0;
  std::size_t checked = 0;
  for (const auto& l : qd.labels()) {
    if (qd.dim(l) > 8) continue;
    const auto irrep = BraidRepresentation::irrep(qd, l);
    gap = std::max({gap, dense_relation_gap(irrep, yb_left, yb_right), dense_relation_gap(irrep, cancel, identity)});
    ++checked;
  }
  rep.properties.push_back(numeric("yang-baxter (irreps)", gap, kNumericTolerance,
                                   std::to_string(checked) + " labels of dimension <= 8"));
  return rep;
}

SuiteReport irrep_suite(const QuantumDouble& qd, std::uint64_t seed) {
  const FiniteGroup& G = qd.group();
  SuiteReport rep{"irreps", G.name(), {}};
  const auto labels = qd.labels();
  std::size_t total = 0;
  std::vector<std::size_t> dims;
  for (const auto& l : labels) {
    dims.push_back(qd.dim(l));
    total += qd.dim(l) * qd.dim(l);
  }
  const std::size_t expect = G.order() * G.order();
  rep.properties.push_back({"dimension count", total == expect, double(total > expect ? total - expect : expect - total),
                            "sum of squares " + std::to_string(total) + ", dims " + dims_text(dims)});

  double unitary = 0, hom = 0, unit = 0, scalar = 0;
  const DGElement one = DGElement::unit(G);
  for (std::size_t li = 0; li < labels.size(); ++li) {
    const auto& l = labels[li];
    const auto d = Eigen::Index(qd.dim(l));
    for (Elem g = 0; g < G.order(); ++g) unitary = std::max(unitary, unitarity_error(irrep_group_matrix(qd, l, g)));
    unit = std::max(unit, max_abs(irrep_matrix(qd, l, one) - Mat::Identity(d, d)));
    CounterRng rng(seed, li);
    for (int k = 0; k < 50; ++k) {
      const DGBasis a{Elem(rng.below(G.order())), Elem(rng.below(G.order()))};
      // Half the samples are composable pairs, which the delta factor would otherwise mostly kill.
      DGBasis b{Elem(rng.below(G.order())), Elem(rng.below(G.order()))};
      if (k % 2 == 0) b.h = G.mul(G.mul(G.inv(b.g), a.h), b.g);
      const auto ab = basis_product(G, a, b);
      const Mat lhs = ab ? irrep_matrix(qd, l, *ab) : Mat::Zero(d, d);
      hom = std::max(hom, max_abs(lhs - irrep_matrix(qd, l, a) * irrep_matrix(qd, l, b)));
    }
    const FluxSector& sec = qd.sector(l.sector);
    const auto& rho = qd.charge_irrep(l);
    const Mat at_flux = rho(Elem(*sec.centralizer.local_index(sec.cls.representative)));
    const auto cd = Eigen::Index(rho.dim);
    scalar = std::max(scalar, max_abs(at_flux - flux_scalar(qd, l) * Mat::Identity(cd, cd)));
  }
  rep.properties.push_back(numeric("unitarity", unitary, kNumericTolerance, "every group element, every label"));
  rep.properties.push_back(numeric("homomorphism", hom, kNumericTolerance, "50 sampled basis pairs per label"));
  rep.properties.push_back(numeric("unit", unit, kNumericTolerance, "1 acts as the identity"));
  rep.properties.push_back(numeric("flux scalar", scalar, kNumericTolerance, "rho(h) = <h> I"));
  return rep;
}

SuiteReport qft_suite(const QuantumDouble& qd, std::uint64_t seed) {
  const FiniteGroup& G = qd.group();
  const std::size_t n = G.order();
  SuiteReport rep{"qft", G.name(), {}};
  const DGQft q(qd);

  double unit = 0;
  for (Elem h = 0; h < n; ++h) unit = std::max(unit, unitarity_error(q.flux_unitary(h)));
  std::string detail = "per-flux blocks";
  if (q.dim() <= UnitaryTransform::kDenseLimit) {
    const Mat dense = q.materialize();
    unit = std::max(unit, unitarity_error(dense));
    detail += " and the dense " + std::to_string(q.dim()) + "-dim matrix";
    double agree = 0;
    CounterRng rng(seed, 0);
    for (int k = 0; k < 4; ++k) {
      Vec v(Eigen::Index(q.dim()));
      for (auto& x : v) x = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
      agree = std::max({agree, (q.apply(v) - dense * v).cwiseAbs().maxCoeff(),
                        (q.apply_inverse(v) - dense.adjoint() * v).cwiseAbs().maxCoeff()});
    }
    rep.properties.push_back(numeric("structured vs dense", agree, kNumericTolerance, "4 random vectors"));
  }
  rep.properties.push_back(numeric("unitarity", unit, kNumericTolerance, detail));

  // The regular action preserves the dual label, so each flux is checked on its own.
  const bool full = n <= kAxiomOrderLimit;
  std::vector<Elem> xs;
  if (full) {
    for (Elem x = 0; x < n; ++x) xs.push_back(x);
  } else {
    xs = G.generators();
    xs.insert(xs.begin(), 0);
  }
  double mass = 0, blocks = 0;
  for (Elem h = 0; h < n; ++h) {
    const Mat uh = q.flux_unitary(h);
    const auto fb = q.flux_blocks(h);
    for (Elem x : xs)
      for (Elem y = 0; y < n; ++y)
        mass = std::max(mass, off_block_mass(uh * regular_flux_matrix(G, {x, y}, h) * uh.adjoint(), fb));
  }
  for (const auto& l : qd.labels()) {
    const Elem h0 = qd.flux_rep(l);
    const Mat uh = q.flux_unitary(h0);
    const auto off = Eigen::Index(q.target_index(h0, l.charge, 0, 0, 0) - std::size_t(h0) * n);
    const auto d = Eigen::Index(qd.dim(l));
    for (Elem x : xs)
      for (Elem y = 0; y < n; ++y) {
        const Mat m = uh * regular_flux_matrix(G, {x, y}, h0) * uh.adjoint();
        blocks = std::max(blocks, max_abs(m.block(off, off, d, d) - irrep_matrix(qd, l, DGBasis{x, y})));
      }
  }
  const std::string scope = full ? "every basis element" : "generators times every dual label";
  rep.properties.push_back(numeric("block structure", mass, kBlockTolerance, scope));
  rep.properties.push_back(numeric("irrep blocks", blocks, kNumericTolerance, scope + ", first copy per label"));

  double err = 0, leak = 0;
  for (Elem h = 0; h < n; ++h) {
    const auto r = qft_inverse_restriction_check(q, h, 4, seed);
    err = std::max(err, r.max_error);
    leak = std::max(leak, r.leaked_mass);
  }
  rep.properties.push_back(numeric("restriction", std::max(err, leak), kNumericTolerance,
                                   "centralizer QFT recovered at every flux"));
  return rep;
}

SuiteReport cg_suite(const QuantumDouble& qd, std::uint64_t seed) {
  const FiniteGroup& G = qd.group();
  SuiteReport rep{"cg", G.name(), {}};
  const auto& classes = qd.classes();

  Tally books{"fluxon bookkeeping"};
  double inter = 0;
  std::size_t transforms = 0;
  for (std::size_t a = 0; a < classes.size(); ++a)
    for (std::size_t b = 0; b < classes.size(); ++b) {
      const auto dec = fluxon_cg_decompose(qd, a, b);
      std::vector<std::size_t> by_class(classes.size(), 0), product(classes.size(), 0);
      for (const auto& s : dec.summands) by_class[s.label.sector] += s.multiplicity * qd.charge_dim(s.label);
      for (const auto& t : class_algebra_product(G, classes, b, a)) product[t.class_index] = t.multiplicity;
      books.record(dec.conditions_met() && by_class == product ? 0.0 : 1.0);
      if (classes[a].members.size() * classes[b].members.size() > 36) continue;
      const auto t = fluxon_cg_transform(qd, a, b);
      inter = std::max({inter, cg_intertwining_error(t), unitarity_error(t.unitary)});
      ++transforms;
    }
  rep.properties.push_back(books.result());
  rep.properties.push_back(numeric("fluxon intertwining", inter, kBlockTolerance,
                                   std::to_string(transforms) + " class pairs of dimension <= 36"));

  const auto labels = qd.labels();
  Tally general{"general decomposition"};
  double generic = 0;
  std::size_t generic_count = 0;
  for (const auto& a : labels)
    for (const auto& b : labels) {
      if (qd.dim(a) * qd.dim(b) > 64 || general.cases >= 300) continue;
      const auto dec = general_cg_decompose(qd, a, b);
      general.record(dec.conditions_met() ? 0.0 : 1.0);
      if (qd.dim(a) * qd.dim(b) > 16 || generic_count >= 100) continue;
      const auto t = cg_transform(qd, a, b);
      std::map<DGIrrepLabel, std::size_t> blocks;
      for (const auto& blk : t.blocks) ++blocks[blk.label];
      generic = std::max({generic, cg_intertwining_error(t), blocks == dec.multiplicities() ? 0.0 : 1.0});
      ++generic_count;
    }
  rep.properties.push_back(general.result());
  rep.properties.push_back(numeric("generic intertwining", generic, kBlockTolerance,
                                   std::to_string(generic_count) + " label pairs of dimension <= 16"));

  if (G.kind() == GroupKind::semidirect) {
    const auto [p, qq, alpha] = G.semidirect_params();
    const auto& charges = qd.charges(qd.class_of(0));
    double err = 0;
    std::ostringstream structure;
    for (int k = 1; k < p; ++k)
      for (int l = 1; l < p; ++l) {
        if (semidirect_orbit_label(p, qq, alpha, k) != k || semidirect_orbit_label(p, qq, alpha, l) != l) continue;
        const auto t = zpzq_cg_transform(qd, k, l);
        err = std::max({err, cg_intertwining_error(t), unitarity_error(t.unitary)});
        if (structure.tellp() > 0) structure << "; ";
        structure << "rho" << k << "*rho" << l << " =";
        for (const auto& b : t.blocks) structure << " " << charges[b.label.charge].label;
      }
    rep.properties.push_back(numeric("chargeon transforms", err, kNumericTolerance, structure.str()));
  }

  double vacuum = 0;
  std::size_t vac_count = 0;
  for (const auto& l : labels) {
    if (qd.dim(l) > 8) continue;
    const auto bar = conjugate_irrep(qd, l);
    const auto t = cg_transform(qd, l, bar);
    const auto out = fuse(t, vacuum_state(qd, l, bar), seed);
    const bool vac = out.label == DGIrrepLabel{qd.class_of(0), 0};
    vacuum = std::max(vacuum, vac ? std::abs(out.probability - 1.0) : 1.0);
    ++vac_count;
  }
  rep.properties.push_back(numeric("vacuum fusion", vacuum, 1e-12,
                                   std::to_string(vac_count) + " conjugate pairs of dimension <= 8"));

  double sums = 0;
  CounterRng rng(seed, 1);
  std::vector<DGIrrepLabel> small;
  for (const auto& l : labels)
    if (qd.dim(l) <= 4) small.push_back(l);
  for (int trial = 0; trial < 100 && !small.empty(); ++trial) {
    const auto a = small[rng.below(small.size())], b = small[rng.below(small.size())];
    const auto t = cg_transform(qd, a, b);
    Vec v(t.unitary.cols());
    for (auto& x : v) x = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
    const auto out = fuse(t, v, rng.next());
    double total = 0;
    for (const auto& e : out.distribution) total += e.second;
    sums = std::max(sums, std::abs(total - 1.0));
  }
  rep.properties.push_back(numeric("fusion probabilities", sums, 1e-12, "100 random states"));
  return rep;
}

}  // namespace qdk
