#include "qdk/invariants.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "qdk/parallel.hpp"
#include "qdk/rng.hpp"

namespace qdk {

std::size_t chernoff_sample_count(double epsilon) {
  if (!(epsilon > 0)) throw GroupError("epsilon must be positive");
  const double bound = 32.0 * std::numbers::ln2 / (epsilon * epsilon);
  if (bound > 1e12) throw CapExceeded("epsilon too small: sample count above the cap 1e12");
  return std::size_t(std::floor(bound)) + 1;
}

namespace {

std::size_t checked_power(std::size_t base, int exp, std::size_t limit, const char* what) {
  std::size_t out = 1;
  for (int k = 0; k < exp; ++k) {
    if (base != 0 && out > limit / base)
      throw CapExceeded(std::string(what) + " exceeds the exact limit " + std::to_string(limit));
    out *= base;
  }
  if (out > limit) throw CapExceeded(std::string(what) + " exceeds the exact limit " + std::to_string(limit));
  return out;
}

// Advances a mixed-radix counter; false once it wraps around.
bool next_tuple(std::vector<std::uint32_t>& t, std::size_t radix) {
  for (std::size_t p = t.size(); p-- > 0;) {
    if (++t[p] < radix) return true;
    t[p] = 0;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------- trace closure

cplx braid_trace(const QuantumDouble& qd, const DGIrrepLabel& l, const BraidWord& w) {
  const FiniteGroup& G = qd.group();
  const FluxSector& sec = qd.sector(l.sector);
  const GroupIrrep& rho = qd.charge_irrep(l);
  const std::size_t m = sec.cls.members.size();
  const auto n = std::size_t(w.strands());
  checked_power(qd.dim(l), w.strands(), kExactStateLimit, "dim(Lambda)^n");

  // Each position carries (flux member, starting strand, accumulated charge matrix).
  struct Slot {
    std::size_t flux;
    std::size_t origin;
    Mat charge;
  };
  const Mat id = Mat::Identity(Eigen::Index(rho.dim), Eigen::Index(rho.dim));
  cplx total = 0;
  std::vector<std::uint32_t> fluxes(n, 0);
  std::vector<Slot> slots(n);
  do {
    for (std::size_t p = 0; p < n; ++p) slots[p] = {fluxes[p], p, id};
    for (const auto& letter : w.letters()) {
      Slot& a = slots[std::size_t(letter.index - 1)];
      Slot& b = slots[std::size_t(letter.index)];
      const Elem xa = sec.cls.members[a.flux];
      const Elem xb = sec.cls.members[b.flux];
      if (letter.sign > 0) {
        // |a, b> -> |b, (x_b acting on a)>
        Slot moved{qd.member_position(G.conj(xb, xa)), a.origin,
                   rho(Elem(qd.charge_element(l.sector, a.flux, xb))) * a.charge};
        a = std::move(b);
        b = std::move(moved);
      } else {
        // |a, b> -> |(x_a^-1 acting on b), a>
        const Elem ai = G.inv(xa);
        Slot moved{qd.member_position(G.conj(ai, xb)), b.origin,
                   rho(Elem(qd.charge_element(l.sector, b.flux, ai))) * b.charge};
        b = std::move(a);
        a = std::move(moved);
      }
    }
    bool fixed = true;
    for (std::size_t p = 0; p < n && fixed; ++p) fixed = slots[p].flux == fluxes[p];
    if (!fixed) continue;
    // The charge part maps v_{origin(p)} to position p; its trace factorizes over
    // cycles of the strand permutation as tr(A_p A_origin(p) ...).
    cplx term = 1;
    std::vector<bool> seen(n, false);
    for (std::size_t p = 0; p < n; ++p) {
      if (seen[p]) continue;
      Mat prod = id;
      std::size_t q = p;
      do {
        seen[q] = true;
        prod = prod * slots[q].charge;
        q = slots[q].origin;
      } while (q != p);
      term *= prod.trace();
    }
    total += term;
  } while (next_tuple(fluxes, m));
  return total;
}

InvariantValue trace_closure(const QuantumDouble& qd, const DGIrrepLabel& l, const BraidWord& w) {
  const cplx tr = braid_trace(qd, l, w);
  const cplx twist = std::pow(flux_scalar(qd, l), linking_number(w));
  return {tr / (double(qd.dim(l)) * twist), ClosureKind::trace, qd.describe(l), std::nullopt};
}

namespace {

// Embedded images of the irrep basis vectors, as sparse regular-basis vectors.
struct EmbeddedBasis {
  std::vector<std::unordered_map<std::uint32_t, cplx>> vectors;

  EmbeddedBasis(const DGQft& qft, const DGIrrepLabel& l) {
    const std::size_t d = qft.double_group().dim(l);
    for (std::size_t k = 0; k < d; ++k) {
      Vec e = Vec::Zero(Eigen::Index(d));
      e[Eigen::Index(k)] = 1.0;
      const Vec x = embed_irrep_vector(qft, l, e);
      std::unordered_map<std::uint32_t, cplx> sparse;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > 1e-13) sparse.emplace(std::uint32_t(i), x[i]);
      vectors.push_back(std::move(sparse));
    }
  }
};

constexpr std::size_t kSupportLimit = 1000000;

cplx embedded_overlap(const FiniteGroup& G, const EmbeddedBasis& eb, const BraidWord& w,
                      const BasisTuple& v) {
  const std::size_t n = v.size();
  std::vector<std::vector<std::pair<std::uint32_t, cplx>>> support(n);
  std::size_t total = 1;
  for (std::size_t p = 0; p < n; ++p) {
    const auto& vec = eb.vectors.at(v[p]);
    support[p].assign(vec.begin(), vec.end());
    total *= support[p].size();
    if (total > kSupportLimit) throw CapExceeded("embedded support exceeds the sampling cap " + std::to_string(kSupportLimit));
  }
  cplx sum = 0;
  std::vector<std::uint32_t> pick(n, 0);
  BasisTuple t(n);
  do {
    cplx amp = 1;
    for (std::size_t p = 0; p < n; ++p) {
      t[p] = support[p][pick[p]].first;
      amp *= support[p][pick[p]].second;
    }
    for (const auto& letter : w.letters()) {
      auto& a = t[std::size_t(letter.index - 1)];
      auto& b = t[std::size_t(letter.index)];
      std::tie(a, b) = regular_generator(G, letter.sign, a, b);
    }
    cplx image = 1;
    for (std::size_t p = 0; p < n && image != cplx(0); ++p) {
      const auto& vec = eb.vectors[v[p]];
      auto it = vec.find(t[p]);
      image = it == vec.end() ? cplx(0) : image * it->second;
    }
    sum += std::conj(image) * amp;
  } while ([&] {
    for (std::size_t p = n; p-- > 0;) {
      if (++pick[p] < support[p].size()) return true;
      pick[p] = 0;
    }
    return false;
  }());
  return sum;
}

}  // namespace

cplx embedded_diagonal(const DGQft& qft, const DGIrrepLabel& l, const BraidWord& w,
                       const BasisTuple& v) {
  if (v.size() != std::size_t(w.strands())) throw GroupError("basis tuple has the wrong length");
  return embedded_overlap(qft.double_group().group(), EmbeddedBasis(qft, l), w, v);
}

InvariantValue trace_closure_sampled(const DGQft& qft, const DGIrrepLabel& l, const BraidWord& w,
                                     double epsilon, std::uint64_t seed, unsigned threads) {
  const QuantumDouble& qd = qft.double_group();
  const std::size_t k = chernoff_sample_count(epsilon);
  const std::size_t d = qd.dim(l);
  const EmbeddedBasis eb(qft, l);
  const auto n = std::size_t(w.strands());

  std::vector<cplx> values(k);
  parallel_for(k, threads, [&](std::size_t i) {
    CounterRng rng(seed, i);
    BasisTuple v(n);
    for (auto& x : v) x = std::uint32_t(rng.below(d));
    values[i] = embedded_overlap(qd.group(), eb, w, v);
  });
  cplx mean = 0;
  for (const auto& x : values) mean += x;
  mean /= double(k);

  // tr = d^n * mean, L = tr / (d <h>^e).
  const double scale = std::pow(double(d), double(n) - 1.0);
  const cplx twist = std::pow(flux_scalar(qd, l), linking_number(w));
  SamplingInfo info{epsilon, k, seed, mean, scale};
  return {scale * mean / twist, ClosureKind::trace, qd.describe(l), info};
}

MarkovValue markov_trace_normalize(const BraidWord& w, cplx phi, cplx z) {
  const double r = std::abs(z);
  if (r == 0) return {phi, false};
  const cplx phase = std::conj(z) / r;
  return {std::pow(r, -(w.strands() - 1)) * std::pow(phase, linking_number(w)) * phi, true};
}

cplx normalized_trace(const QuantumDouble& qd, const DGIrrepLabel& l, const BraidWord& w) {
  return braid_trace(qd, l, w) / std::pow(double(qd.dim(l)), w.strands());
}

cplx markov_parameter(const QuantumDouble& qd, const DGIrrepLabel& l) {
  return normalized_trace(qd, l, BraidWord(2, {{1, 1}}));
}

// ---------------------------------------------------------------- plat closure

Vec vacuum_state(const QuantumDouble& qd, const DGIrrepLabel& first, const DGIrrepLabel& second) {
  const FiniteGroup& G = qd.group();
  const auto d1 = Eigen::Index(qd.dim(first)), d2 = Eigen::Index(qd.dim(second));
  // Vacuum projector: Delta of (1/|G|) sum_g g e*, which is sum over h of g h^-1* (x) g h*.
  Mat proj = Mat::Zero(d1 * d2, d1 * d2);
  for (Elem g = 0; g < G.order(); ++g)
    for (Elem h : qd.sector(second.sector).cls.members)
      proj += kron(irrep_matrix(qd, first, DGBasis{g, G.inv(h)}), irrep_matrix(qd, second, DGBasis{g, h}));
  proj /= double(G.order());
  if (std::abs(proj.trace() - 1.0) > 1e-8)
    throw GroupError(qd.describe(first) + " and " + qd.describe(second) + " do not fuse to the vacuum once");
  Eigen::Index best = 0;
  proj.colwise().norm().maxCoeff(&best);
  Vec v = proj.col(best);
  v.normalize();
  Eigen::Index lead = 0;
  v.cwiseAbs().maxCoeff(&lead);
  v *= std::abs(v[lead]) / v[lead];
  return v;
}

Vec pair_state(const QuantumDouble& qd, const DGIrrepLabel& l) {
  if (!is_self_dual(qd, l)) throw GroupError("plat closure needs a self-dual label, got " + qd.describe(l));
  return vacuum_state(qd, l, l);
}

StateVector plat_state(const QuantumDouble& qd, const DGIrrepLabel& l, std::size_t pairs) {
  const Vec phi = pair_state(qd, l);
  const auto d = std::uint32_t(qd.dim(l));
  StateVector s = StateVector::basis(BasisScheme::irrep, {});
  for (std::size_t k = 0; k < pairs; ++k) {
    StateVector next{BasisScheme::irrep, s.strands + 2, {}};
    for (const auto& [t, a] : s.amplitudes)
      for (Eigen::Index i = 0; i < phi.size(); ++i) {
        if (std::abs(phi[i]) < 1e-15) continue;
        BasisTuple u = t;
        u.push_back(std::uint32_t(i) / d);
        u.push_back(std::uint32_t(i) % d);
        next.amplitudes.emplace(std::move(u), a * phi[i]);
      }
    s = std::move(next);
  }
  return s;
}

StateVector plat_state(const FluxSet& flux, std::size_t pairs) {
  if (!flux.inverse_closed()) throw GroupError("plat closure needs an inverse-closed flux set");
  const FiniteGroup& G = flux.group();
  const double amp = std::pow(double(flux.size()), -0.5 * double(pairs));
  StateVector s{BasisScheme::fluxon, 2 * pairs, {}};
  std::vector<std::uint32_t> pick(pairs, 0);
  do {
    BasisTuple t;
    for (auto c : pick) {
      t.push_back(c);
      t.push_back(std::uint32_t(flux.position(G.inv(flux.members()[c]))));
    }
    s.amplitudes.emplace(std::move(t), amp);
  } while (next_tuple(pick, flux.size()));
  return s;
}

namespace {

void check_plat_word(const BraidWord& w) {
  if (w.strands() % 2 != 0) throw GroupError("plat closure needs an even number of strands");
}

std::string flux_label(const FluxSet& f) {
  return "fluxon[" + f.group().element_label(f.members().front()) + ", |S|=" + std::to_string(f.size()) + "]";
}

bool caps_match(const FiniteGroup& G, const std::vector<Elem>& t) {
  for (std::size_t p = 0; p < t.size(); p += 2)
    if (G.mul(t[p], t[p + 1]) != 0) return false;
  return true;
}

void push_fluxes(const FiniteGroup& G, const BraidWord& w, std::vector<Elem>& t) {
  for (const auto& letter : w.letters()) {
    auto& a = t[std::size_t(letter.index - 1)];
    auto& b = t[std::size_t(letter.index)];
    std::tie(a, b) = fluxon_generator(G, letter.sign, a, b);
  }
}

}  // namespace

InvariantValue plat_closure(const QuantumDouble& qd, const DGIrrepLabel& l, const BraidWord& w) {
  check_plat_word(w);
  const std::size_t d = qd.dim(l);
  checked_power(d, w.strands(), kExactStateLimit, "dim(Lambda)^n");
  const Vec phi = pair_state(qd, l);
  Vec alpha = Vec::Ones(1);
  for (int k = 0; k < w.strands() / 2; ++k) alpha = kron(alpha, phi);
  const auto rep = BraidRepresentation::irrep(qd, l);
  const Vec out = rep.apply_dense(w, alpha);
  return {alpha.dot(out), ClosureKind::plat, qd.describe(l), std::nullopt};
}

std::uint64_t plat_fixed_caps(const FluxSet& flux, const BraidWord& w, unsigned threads) {
  check_plat_word(w);
  if (!flux.inverse_closed()) throw GroupError("plat closure needs an inverse-closed flux set");
  const FiniteGroup& G = flux.group();
  const auto pairs = std::size_t(w.strands() / 2);
  constexpr std::size_t kCapColoringLimit = 100000000;
  checked_power(flux.size(), int(pairs), kCapColoringLimit, "cap colorings");
  const auto& S = flux.members();

  std::vector<std::uint64_t> counts(S.size(), 0);
  parallel_for(S.size(), threads, [&](std::size_t first) {
    std::vector<std::uint32_t> rest(pairs - 1, 0);
    std::vector<Elem> t(2 * pairs);
    std::uint64_t c = 0;
    do {
      t[0] = S[first];
      t[1] = G.inv(S[first]);
      for (std::size_t j = 1; j < pairs; ++j) {
        t[2 * j] = S[rest[j - 1]];
        t[2 * j + 1] = G.inv(S[rest[j - 1]]);
      }
      push_fluxes(G, w, t);
      c += caps_match(G, t);
    } while (next_tuple(rest, S.size()));
    counts[first] = c;
  });
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

InvariantValue plat_closure(const FluxSet& flux, const BraidWord& w) {
  const double fixed = double(plat_fixed_caps(flux, w));
  const double value = fixed / std::pow(double(flux.size()), w.strands() / 2);
  return {value, ClosureKind::plat, flux_label(flux), std::nullopt};
}

InvariantValue plat_closure_fluxon_mc(const FluxSet& flux, const BraidWord& w, double epsilon,
                                      std::uint64_t seed, unsigned threads) {
  check_plat_word(w);
  if (!flux.inverse_closed()) throw GroupError("plat closure needs an inverse-closed flux set");
  const std::size_t k = chernoff_sample_count(epsilon);
  const FiniteGroup& G = flux.group();
  const auto& S = flux.members();
  const auto n = std::size_t(w.strands());

  std::vector<std::uint8_t> hits(k, 0);
  parallel_for(k, threads, [&](std::size_t i) {
    CounterRng rng(seed, i);
    std::vector<Elem> t(n);
    for (std::size_t p = 0; p < n; p += 2) {
      t[p] = S[rng.below(S.size())];
      t[p + 1] = G.inv(t[p]);
    }
    push_fluxes(G, w, t);
    hits[i] = caps_match(G, t);
  });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  const double mean = double(total) / double(k);
  SamplingInfo info{epsilon, k, seed, mean, 1.0};
  return {mean, ClosureKind::plat, flux_label(flux), info};
}

std::vector<BraidWord> hilden_generators(int strands) {
  if (strands < 2 || strands % 2 != 0) throw GroupError("Hilden generators need 2n strands, n >= 1");
  std::vector<BraidWord> out;
  out.emplace_back(strands, std::vector<BraidLetter>{{1, 1}});
  if (strands >= 4) out.emplace_back(strands, std::vector<BraidLetter>{{2, 1}, {1, 1}, {1, 1}, {2, 1}});
  for (int i = 1; 2 * i + 1 < strands; ++i)
    out.emplace_back(strands, std::vector<BraidLetter>{{2 * i, 1}, {2 * i - 1, 1}, {2 * i + 1, 1}, {2 * i, 1}});
  return out;
}

namespace {

BraidWord stabilized(const BraidWord& w) {
  const int n = w.strands();
  return BraidWord(n + 2, {{n, 1}}) * w.widened(n + 2);
}

std::optional<cplx> ratio(cplx num, cplx den) {
  if (std::abs(den) < 1e-12) return std::nullopt;
  return num / den;
}

}  // namespace

std::optional<cplx> stabilization_ratio(const FluxSet& flux, const BraidWord& w) {
  return ratio(plat_closure(flux, stabilized(w)).value, plat_closure(flux, w).value);
}

std::optional<cplx> stabilization_ratio(const QuantumDouble& qd, const DGIrrepLabel& l,
                                        const BraidWord& w) {
  return ratio(plat_closure(qd, l, stabilized(w)).value, plat_closure(qd, l, w).value);
}

}  // namespace qdk
