#include "qdk/knot_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <numeric>

#include "qdk/invariants.hpp"
#include "qdk/parallel.hpp"

namespace qdk {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

// ---------------------------------------------------------------- presentations

WirtingerPresentation wirtinger_from_plat(const BraidWord& w) {
  if (w.strands() % 2 != 0) throw GroupError("plat diagrams need an even number of strands");
  const int m = w.strands();
  const int len = int(w.length());
  const auto& letters = w.letters();
  auto vertex = [&](int p, int t) { return std::size_t(t) * std::size_t(m) + std::size_t(p); };
  auto edge = [&](int p, int t) { return std::size_t(t) * std::size_t(m) + std::size_t(p); };
  // Position reached from p across the letter at time t (an involution).
  auto step = [&](int t, int p) {
    const int a = letters[std::size_t(t)].index - 1;
    return p == a ? a + 1 : p == a + 1 ? a : p;
  };

  DisjointSets sets(std::size_t(len + 1) * std::size_t(m));
  for (int p = 0; p < m; p += 2) {
    sets.unite(vertex(p, 0), vertex(p + 1, 0));
    sets.unite(vertex(p, len), vertex(p + 1, len));
  }
  struct Crossing {
    int t, under_top, over_top, sign;
  };
  std::vector<Crossing> crossings;
  for (int t = 0; t < len; ++t) {
    const int a = letters[std::size_t(t)].index - 1;
    const int sign = letters[std::size_t(t)].sign;
    // s_i: the strand from position i+1 (0-based a+1) passes over.
    const int over_top = sign > 0 ? a + 1 : a;
    const int under_top = sign > 0 ? a : a + 1;
    crossings.push_back({t, under_top, over_top, sign});
    for (int p = 0; p < m; ++p)
      if (p != under_top) sets.unite(vertex(p, t), vertex(step(t, p), t + 1));
  }

  // Orient each component from its first top cap, heading down.
  WirtingerPresentation out;
  std::vector<int> dir(std::size_t(len) * std::size_t(m), 0);
  if (len == 0) {
    out.components = std::size_t(m / 2);
  } else {
    for (int start = 0; start < m; start += 2) {
      if (dir[edge(start, 0)] != 0) continue;
      ++out.components;
      int p = start, t = 0;
      bool down = true;
      do {
        if (down) {
          if (t == len) {
            p ^= 1;
            down = false;
            continue;
          }
          dir[edge(p, t)] = 1;
          p = step(t, p);
          ++t;
        } else {
          if (t == 0) {
            p ^= 1;
            down = true;
            continue;
          }
          p = step(t - 1, p);
          --t;
          dir[edge(p, t)] = -1;
        }
      } while (!(p == start && t == 0 && down));
    }
  }

  std::vector<std::size_t> label(sets.parent.size(), SIZE_MAX);
  auto stroke = [&](std::size_t v) {
    std::size_t& l = label[sets.find(v)];
    if (l == SIZE_MAX) l = out.strokes++;
    return l;
  };
  for (int p = 0; p < m; p += 2) {
    const std::size_t s = stroke(vertex(p, 0));
    if (std::find(out.seeds.begin(), out.seeds.end(), s) == out.seeds.end()) out.seeds.push_back(s);
  }
  for (const auto& c : crossings) {
    const int du = dir[edge(c.under_top, c.t)];
    const int dov = dir[edge(c.over_top, c.t)];
    const std::size_t top = stroke(vertex(c.under_top, c.t));
    const std::size_t bottom = stroke(vertex(step(c.t, c.under_top), c.t + 1));
    WirtingerCrossing x;
    x.over = stroke(vertex(c.over_top, c.t));
    x.sign = c.sign * du * dov;
    x.in = du > 0 ? top : bottom;
    x.out = du > 0 ? bottom : top;
    out.crossings.push_back(x);
  }
  for (std::size_t v = 0; v < label.size(); ++v) stroke(v);
  return out;
}

WirtingerPresentation split_union(const WirtingerPresentation& a, const WirtingerPresentation& b) {
  WirtingerPresentation out = a;
  const std::size_t shift = a.strokes;
  out.strokes += b.strokes;
  out.components += b.components;
  for (auto c : b.crossings) {
    c.over += shift;
    c.in += shift;
    c.out += shift;
    out.crossings.push_back(c);
  }
  for (auto s : b.seeds) out.seeds.push_back(s + shift);
  return out;
}

BraidWord plat_split_union(const BraidWord& a, const BraidWord& b) {
  if (a.strands() % 2 != 0 || b.strands() % 2 != 0) throw GroupError("plat braids need even strand counts");
  const int n = a.strands() + b.strands();
  return a.widened(n) * b.shifted(a.strands(), n);
}

// ---------------------------------------------------------------- counting

namespace {

class ColoringSolver {
 public:
  ColoringSolver(const WirtingerPresentation& p, const FluxSet& s, std::uint64_t limit)
      : p_(p), s_(s), g_(s.group()), touching_(p.strokes), limit_(limit) {
    for (std::size_t c = 0; c < p.crossings.size(); ++c) {
      const auto& x = p.crossings[c];
      for (auto v : {x.over, x.in, x.out}) {
        if (v >= p.strokes) throw GroupError("crossing refers to a missing stroke");
        if (touching_[v].empty() || touching_[v].back() != c) touching_[v].push_back(c);
      }
    }
    std::vector<bool> listed(p.strokes, false);
    for (auto s : p.seeds) {
      if (s >= p.strokes) throw GroupError("seed refers to a missing stroke");
      if (!listed[s]) order_.push_back(s), listed[s] = true;
    }
    for (std::size_t v = 0; v < p.strokes; ++v)
      if (!listed[v]) order_.push_back(v);
  }

  using Values = std::vector<std::int64_t>;

  std::size_t first_variable() const { return order_.front(); }

  // Assigns v = x and propagates; false on contradiction.
  bool assign(Values& val, std::size_t v, Elem x) const {
    val[v] = x;
    std::vector<std::size_t> queue{v};
    while (!queue.empty()) {
      const std::size_t cur = queue.back();
      queue.pop_back();
      for (auto c : touching_[cur]) {
        const auto& x = p_.crossings[c];
        if (val[x.over] < 0) continue;
        const Elem o = Elem(val[x.over]);
        const Elem op = x.sign > 0 ? o : g_.inv(o);
        if (val[x.in] >= 0) {
          const Elem expect = g_.conj(op, Elem(val[x.in]));
          if (val[x.out] >= 0) {
            if (Elem(val[x.out]) != expect) return false;
          } else {
            if (!s_.contains(expect)) return false;
            val[x.out] = expect;
            queue.push_back(x.out);
          }
        } else if (val[x.out] >= 0) {
          const Elem expect = g_.conj(g_.inv(op), Elem(val[x.out]));
          if (!s_.contains(expect)) return false;
          val[x.in] = expect;
          queue.push_back(x.in);
        }
      }
    }
    return true;
  }

  std::uint64_t count(const Values& val, std::atomic<std::uint64_t>& nodes) const {
    if (nodes.fetch_add(1, std::memory_order_relaxed) >= limit_)
      throw CapExceeded("homomorphism enumeration exceeded its node limit " + std::to_string(limit_));
    auto it = std::find_if(order_.begin(), order_.end(), [&](std::size_t v) { return val[v] < 0; });
    if (it == order_.end()) return 1;
    std::uint64_t total = 0;
    for (Elem x : s_.members()) {
      Values next = val;
      if (assign(next, *it, x)) total += count(next, nodes);
    }
    return total;
  }

 private:
  const WirtingerPresentation& p_;
  const FluxSet& s_;
  const FiniteGroup& g_;
  std::vector<std::vector<std::size_t>> touching_;
  std::vector<std::size_t> order_;
  std::uint64_t limit_;
};

}  // namespace

std::uint64_t count_homomorphisms(const WirtingerPresentation& p, const FluxSet& s, const CountOptions& opt) {
  if (p.strokes == 0) return 1;
  const ColoringSolver solver(p, s, opt.node_limit);
  const auto& members = s.members();
  std::atomic<std::uint64_t> nodes{0};
  std::vector<std::uint64_t> partial(members.size(), 0);
  parallel_for(members.size(), opt.threads, [&](std::size_t i) {
    ColoringSolver::Values val(p.strokes, -1);
    if (solver.assign(val, solver.first_variable(), members[i])) partial[i] = solver.count(val, nodes);
  });
  return std::accumulate(partial.begin(), partial.end(), std::uint64_t(0));
}

FluxonIdentityReport verify_fluxon_identity(const BraidWord& w, const FluxSet& s, const CountOptions& opt) {
  FluxonIdentityReport r;
  r.cap_pairs = std::size_t(w.strands() / 2);
  r.flux_set_size = s.size();
  r.homomorphisms = count_homomorphisms(wirtinger_from_plat(w), s, opt);
  r.plat = double(plat_fixed_caps(s, w, opt.threads)) / std::pow(double(s.size()), double(r.cap_pairs));
  r.rescaled = double(r.homomorphisms) / std::pow(double(s.size()), double(r.cap_pairs));
  r.error = std::abs(r.plat - r.rescaled);
  r.passed = r.error < 1e-9;
  return r;
}

// ---------------------------------------------------------------- equations

void GroupEquationSystem::add_conjugation(std::size_t b, std::size_t a, std::size_t t) {
  if (std::max({a, b, t}) >= variables) throw GroupError("equation variable out of range");
  const auto ut = std::uint32_t(t);
  equations.push_back({{{true, std::uint32_t(b), 1}}, {{true, ut, -1}, {true, std::uint32_t(a), 1}, {true, ut, 1}}});
}

Elem evaluate(const FiniteGroup& g, const GroupWord& w, std::span<const Elem> values) {
  Elem acc = 0;
  for (const auto& l : w) {
    Elem x = l.variable ? values[l.index] : Elem(l.index);
    acc = g.mul(acc, g.pow(x, l.exponent));
  }
  return acc;
}

bool satisfied(const FiniteGroup& g, const GroupEquationSystem& sys, std::span<const Elem> values) {
  return std::all_of(sys.equations.begin(), sys.equations.end(), [&](const WordEquation& e) {
    return evaluate(g, e.lhs, values) == evaluate(g, e.rhs, values);
  });
}

std::uint64_t count_solutions(const GroupEquationSystem& sys, const FluxSet& s,
                              std::span<const std::optional<Elem>> fixed, std::uint64_t node_limit) {
  if (fixed.size() != sys.variables) throw GroupError("fixed assignment has the wrong length");
  const FiniteGroup& g = s.group();
  std::vector<std::size_t> order;
  for (std::size_t v = 0; v < sys.variables; ++v)
    if (!fixed[v]) order.push_back(v);
  std::vector<std::size_t> depth_of(sys.variables, 0);
  for (std::size_t k = 0; k < order.size(); ++k) depth_of[order[k]] = k + 1;
  // Equations grouped by the depth at which their last variable is set.
  std::vector<std::vector<const WordEquation*>> at_depth(order.size() + 1);
  for (const auto& e : sys.equations) {
    std::size_t depth = 0;
    for (const auto* side : {&e.lhs, &e.rhs})
      for (const auto& l : *side) {
        if (!l.variable) continue;
        if (l.index >= sys.variables) throw GroupError("equation variable out of range");
        depth = std::max(depth, depth_of[l.index]);
      }
    at_depth[depth].push_back(&e);
  }
  std::vector<Elem> values(sys.variables, 0);
  for (std::size_t v = 0; v < sys.variables; ++v)
    if (fixed[v]) values[v] = *fixed[v];
  std::uint64_t nodes = 0;
  auto ok = [&](std::size_t depth) {
    return std::all_of(at_depth[depth].begin(), at_depth[depth].end(), [&](const WordEquation* e) {
      return evaluate(g, e->lhs, values) == evaluate(g, e->rhs, values);
    });
  };
  auto rec = [&](auto&& self, std::size_t depth) -> std::uint64_t {
    if (++nodes > node_limit) throw CapExceeded("equation enumeration exceeded its node limit " + std::to_string(node_limit));
    if (!ok(depth)) return 0;
    if (depth == order.size()) return 1;
    std::uint64_t total = 0;
    for (Elem x : s.members()) {
      values[order[depth]] = x;
      total += self(self, depth + 1);
    }
    return total;
  };
  return rec(rec, 0);
}

std::vector<Elem> conjugation_equation_solutions(const FluxSet& c, Elem a, Elem b) {
  const FiniteGroup& g = c.group();
  std::vector<Elem> out;
  for (Elem y : c.members())
    if (g.conj(g.mul(b, y), a) == y) out.push_back(y);
  return out;
}

// ---------------------------------------------------------------- kernel images

Elem evaluate_word(const FiniteGroup& g, const GeneratorWord& w, std::span<const Elem> generators) {
  Elem acc = 0;
  for (auto [i, sign] : w) acc = g.mul(acc, sign > 0 ? generators[i] : g.inv(generators[i]));
  return acc;
}

namespace {

// Breadth-first search over E from (e, e), right-multiplying by (c_i, d_i)^{+-1}.
struct PairSearch {
  static constexpr std::size_t kPairLimit = 10000000;
  std::size_t n;
  std::vector<std::int64_t> parent;  // -1 unvisited, otherwise code of the predecessor
  std::vector<std::int32_t> move;    // generator index * 2 + (sign < 0)
  std::vector<std::size_t> visited;  // in BFS order

  PairSearch(const FiniteGroup& g, std::span<const Elem> c, std::span<const Elem> d) : n(g.order()) {
    if (c.size() != d.size()) throw GroupError("generator tuples differ in length");
    if (n * n > kPairLimit) throw CapExceeded("G x G exceeds the pair search cap " + std::to_string(kPairLimit));
    parent.assign(n * n, -1);
    move.assign(n * n, -1);
    parent[0] = 0;
    visited.push_back(0);
    for (std::size_t head = 0; head < visited.size(); ++head) {
      const std::size_t code = visited[head];
      const Elem a = Elem(code / n), b = Elem(code % n);
      for (std::size_t i = 0; i < c.size(); ++i)
        for (int sign : {1, -1}) {
          const Elem ci = sign > 0 ? c[i] : g.inv(c[i]);
          const Elem di = sign > 0 ? d[i] : g.inv(d[i]);
          const std::size_t next = std::size_t(g.mul(a, ci)) * n + g.mul(b, di);
          if (parent[next] >= 0) continue;
          parent[next] = std::int64_t(code);
          move[next] = std::int32_t(i * 2 + (sign < 0));
          visited.push_back(next);
        }
    }
  }

  bool reached(Elem a, Elem b) const { return parent[std::size_t(a) * n + b] >= 0; }

  GeneratorWord word(Elem a, Elem b) const {
    GeneratorWord w;
    for (std::size_t code = std::size_t(a) * n + b; code != 0; code = std::size_t(parent[code]))
      w.emplace_back(std::size_t(move[code] / 2), move[code] % 2 ? -1 : 1);
    std::reverse(w.begin(), w.end());
    return w;
  }
};

}  // namespace

Subgroup pair_subgroup_image(const FiniteGroup& g, std::span<const Elem> c, std::span<const Elem> d) {
  const PairSearch search(g, c, d);
  std::vector<Elem> members;
  for (auto code : search.visited)
    if (code % search.n == 0) members.push_back(Elem(code / search.n));
  std::sort(members.begin(), members.end());
  return Subgroup::from_members(g, std::move(members));
}

GeneratorWord find_pair_word(const FiniteGroup& g, std::span<const Elem> c, std::span<const Elem> d,
                             Elem target_c, Elem target_d) {
  const PairSearch search(g, c, d);
  if (!search.reached(target_c, target_d))
    throw NotReachable("(" + g.element_label(target_c) + ", " + g.element_label(target_d) +
                       ") is not generated by the pairs");
  return search.word(target_c, target_d);
}

GeneratorWord find_relating_word(const FiniteGroup& g, std::span<const Elem> c, std::span<const Elem> d,
                                 Elem alpha) {
  return find_pair_word(g, c, d, alpha, 0);
}

AmplificationReport suppression_amplification_check(const FluxSet& cls, std::span<const Elem> c,
                                                     std::span<const Elem> d, std::size_t ell,
                                                     std::optional<Elem> alpha) {
  const FiniteGroup& g = cls.group();
  const std::size_t k = c.size();
  if (k == 0 || d.size() != k) throw GroupError("need two generator tuples of the same positive length");
  for (std::size_t i = 0; i < k; ++i)
    if (!cls.contains(c[i]) || !cls.contains(d[i])) throw GroupError("tuple entries must lie in the class");

  const PairSearch search(g, c, d);
  AmplificationReport r;
  r.ell = ell;
  if (alpha) {
    if (!search.reached(*alpha, 0)) throw NotReachable("alpha is outside the kernel image");
    r.alpha = *alpha;
  } else {
    std::size_t best = 0;
    for (auto code : search.visited) {
      if (code % search.n != 0) continue;
      const Elem a = Elem(code / search.n);
      const std::size_t count = conjugation_equation_solutions(cls, c[0], a).size();
      if (count > best || (count == best && a < r.alpha)) best = count, r.alpha = a;
    }
  }
  r.word = search.word(r.alpha, 0);

  auto as_variables = [](const GeneratorWord& w, bool inverted) {
    GroupWord out;
    for (auto [i, sign] : w) out.push_back({true, std::uint32_t(i), sign});
    if (inverted) {
      std::reverse(out.begin(), out.end());
      for (auto& l : out) l.exponent = -l.exponent;
    }
    return out;
  };
  auto concat = [](std::initializer_list<GroupWord> parts) {
    GroupWord out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
  };

  GroupEquationSystem& sys = r.system;
  sys.variables = k + ell;
  const GroupWord x1{{true, 0, 1}};
  // Base relations: a conjugator valid on both tuples at once.
  for (std::size_t i = 1; i < k; ++i) {
    std::optional<std::size_t> found;
    for (auto code : search.visited) {
      const Elem u = Elem(code / search.n), v = Elem(code % search.n);
      if (g.conj(u, c[0]) == c[i] && g.conj(v, d[0]) == d[i]) {
        found = code;
        break;
      }
    }
    if (!found) throw NotReachable("no common conjugator for base relation " + std::to_string(i + 1));
    const auto u = search.word(Elem(*found / search.n), Elem(*found % search.n));
    sys.equations.push_back({{{true, std::uint32_t(i), 1}}, concat({as_variables(u, false), x1, as_variables(u, true)})});
  }
  const GroupWord w = as_variables(r.word, false), w_inv = as_variables(r.word, true);
  for (std::size_t j = 0; j < ell; ++j) {
    const auto y = std::uint32_t(k + j);
    sys.equations.push_back(
        {{{true, y, 1}}, concat({w, {{true, y, 1}}, x1, {{true, y, -1}}, w_inv})});
  }

  std::vector<std::optional<Elem>> fixed_c(sys.variables), fixed_d(sys.variables);
  for (std::size_t i = 0; i < k; ++i) fixed_c[i] = c[i], fixed_d[i] = d[i];
  r.solutions_c = count_solutions(sys, cls, fixed_c);
  r.solutions_d = count_solutions(sys, cls, fixed_d);
  const double bound = std::ldexp(1.0, int(ell)) * double(r.solutions_d);
  r.passed = double(r.solutions_c) >= bound;
  return r;
}

}  // namespace qdk
