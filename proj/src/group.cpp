#include "qdk/group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace qdk {

namespace {

std::uint64_t pack_perm(const Perm& p) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < p.size(); ++i) key |= std::uint64_t(p[i]) << (4 * i);
  return key;
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long long mod_pow(long long b, long long e, long long m) {
  long long r = 1 % m;
  b %= m;
  if (b < 0) b += m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

}  // namespace

struct FiniteGroup::Data {
  GroupKind kind = GroupKind::table;
  std::string name;
  std::size_t order = 0;
  std::vector<Elem> table;  // order*order when present
  std::vector<Elem> inverse;
  std::vector<Elem> gens;
  bool abelian = false;
  // permutation kind
  int degree = 0;
  std::vector<Perm> perms;
  std::unordered_map<std::uint64_t, Elem> perm_index;
  // semidirect kind
  SemidirectParams sd;
  std::vector<int> alpha_pow;

  Elem raw_mul(Elem a, Elem b) const {
    if (!table.empty()) return table[std::size_t(a) * order + b];
    if (kind == GroupKind::semidirect) {
      const int p = sd.p, q = sd.q;
      const int a1 = int(a) % p, b1 = int(a) / p, a2 = int(b) % p, b2 = int(b) / p;
      const int na = (a1 + a2 * alpha_pow[b1]) % p;
      const int nb = (b1 + b2) % q;
      return Elem(nb * p + na);
    }
    const Perm& pa = perms[a];
    const Perm& pb = perms[b];
    Perm c(pa.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = pa[pb[i]];
    return perm_index.at(pack_perm(c));
  }
};

namespace {

using DataPtr = std::shared_ptr<FiniteGroup::Data>;

}  // namespace

// Builds inverse table, optional multiplication table and generators.
static void finalize(FiniteGroup::Data& d, bool build_table) {
  if (d.order > FiniteGroup::kOrderLimit && d.kind != GroupKind::table)
    throw CapExceeded("group order " + std::to_string(d.order) + " exceeds limit " +
                      std::to_string(FiniteGroup::kOrderLimit));
  if (build_table && d.table.empty() && d.order <= FiniteGroup::kTableLimit) {
    std::vector<Elem> t(d.order * d.order);
    for (Elem a = 0; a < d.order; ++a)
      for (Elem b = 0; b < d.order; ++b) t[std::size_t(a) * d.order + b] = d.raw_mul(a, b);
    d.table = std::move(t);
  }
  d.inverse.assign(d.order, 0);
  if (d.kind == GroupKind::permutation) {
    for (Elem a = 0; a < d.order; ++a) d.inverse[a] = d.perm_index.at(pack_perm(perm_inverse(d.perms[a])));
  } else if (d.kind == GroupKind::semidirect) {
    const int p = d.sd.p, q = d.sd.q;
    for (Elem x = 0; x < d.order; ++x) {
      const int a = int(x) % p, b = int(x) / p;
      const int nb = (q - b) % q;
      // (a,b)^-1 = (-a * alpha^{-b}, -b) = (-a * alpha^{nb}, nb)
      const int na = ((p - a) % p) * d.alpha_pow[nb] % p;
      d.inverse[x] = Elem(nb * p + na);
    }
  } else {
    for (Elem a = 0; a < d.order; ++a) {
      bool found = false;
      for (Elem b = 0; b < d.order; ++b)
        if (d.table[std::size_t(a) * d.order + b] == 0) {
          d.inverse[a] = b;
          found = true;
          break;
        }
      if (!found) throw GroupError("element without inverse in multiplication table");
    }
  }
}

static std::vector<Elem> closure_with(const FiniteGroup::Data& d, std::span<const Elem> gens) {
  std::vector<std::uint8_t> seen(d.order, 0);
  std::vector<Elem> out{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (Elem s : gens) {
      const Elem y = d.raw_mul(out[i], s);
      if (!seen[y]) {
        seen[y] = 1;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

static std::vector<Elem> greedy_gens(const FiniteGroup::Data& d, std::span<const Elem> members) {
  std::vector<Elem> gens;
  std::vector<std::uint8_t> in(d.order, 0);
  in[0] = 1;
  std::size_t covered = 1;
  for (Elem x : members) {
    if (covered == members.size()) break;
    if (in[x]) continue;
    gens.push_back(x);
    const auto span = closure_with(d, gens);
    for (Elem y : span) in[y] = 1;
    covered = span.size();
  }
  return gens;
}

static void compute_abelian(FiniteGroup::Data& d) {
  d.abelian = true;
  for (Elem a : d.gens)
    for (Elem b : d.gens)
      if (d.raw_mul(a, b) != d.raw_mul(b, a)) d.abelian = false;
}

FiniteGroup FiniteGroup::from_permutations(int degree, std::span<const Perm> generators,
                                           std::string name) {
  if (degree < 1 || degree > 16) throw GroupError("permutation degree must be in 1..16");
  auto d = std::make_shared<Data>();
  d->kind = GroupKind::permutation;
  d->degree = degree;
  d->name = std::move(name);
  for (const Perm& g : generators) {
    if (int(g.size()) != degree) throw GroupError("generator degree mismatch");
    Perm s = g;
    std::sort(s.begin(), s.end());
    for (int i = 0; i < degree; ++i)
      if (s[i] != i) throw GroupError("generator is not a permutation");
  }
  // Closure over permutations directly, then canonical lexicographic ordering.
  std::unordered_map<std::uint64_t, std::size_t> seen;
  std::vector<Perm> elems{perm_identity(degree)};
  seen.emplace(pack_perm(elems[0]), 0);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const Perm& s : generators) {
      Perm y = perm_compose(elems[i], s);
      const auto key = pack_perm(y);
      if (seen.emplace(key, elems.size()).second) {
        elems.push_back(std::move(y));
        if (elems.size() > kOrderLimit)
          throw CapExceeded("generated group exceeds order limit " + std::to_string(kOrderLimit));
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  d->order = elems.size();
  d->perms = std::move(elems);
  for (Elem i = 0; i < d->order; ++i) d->perm_index.emplace(pack_perm(d->perms[i]), i);
  finalize(*d, true);
  std::vector<Elem> gen_idx;
  for (const Perm& s : generators) {
    const Elem e = d->perm_index.at(pack_perm(s));
    if (e != 0 && std::find(gen_idx.begin(), gen_idx.end(), e) == gen_idx.end()) gen_idx.push_back(e);
  }
  d->gens = gen_idx;
  compute_abelian(*d);
  return FiniteGroup(d);
}

FiniteGroup FiniteGroup::symmetric(int n) {
  if (n < 1) throw GroupError("symmetric group needs n >= 1");
  std::vector<Perm> gens;
  if (n >= 2) {
    gens.push_back(perm_from_cycles(n, {{0, 1}}));
    std::vector<int> c(n);
    std::iota(c.begin(), c.end(), 0);
    if (n >= 3) gens.push_back(perm_from_cycles(n, {c}));
  }
  return from_permutations(n, gens, "S" + std::to_string(n));
}

FiniteGroup FiniteGroup::alternating(int n) {
  if (n < 1) throw GroupError("alternating group needs n >= 1");
  std::vector<Perm> gens;
  for (int k = 2; k < n; ++k) gens.push_back(perm_from_cycles(n, {{0, 1, k}}));
  return from_permutations(n, gens, "A" + std::to_string(n));
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw GroupError("cyclic group needs n >= 1");
  if (std::size_t(n) > kOrderLimit) throw CapExceeded("cyclic group order exceeds limit");
  auto d = std::make_shared<Data>();
  d->kind = GroupKind::table;
  d->name = "Z" + std::to_string(n);
  d->order = std::size_t(n);
  if (d->order <= kTableLimit) {
    d->table.resize(d->order * d->order);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) d->table[std::size_t(a) * n + b] = Elem((a + b) % n);
  } else {
    // Reuse the semidirect formula with trivial action: Z_n x| Z_1.
    d->kind = GroupKind::semidirect;
    d->sd = {n, 1, 1};
    d->alpha_pow = {1};
  }
  d->inverse.resize(d->order);
  for (int a = 0; a < n; ++a) d->inverse[a] = Elem((n - a) % n);
  if (n > 1) d->gens = {1};
  d->abelian = true;
  return FiniteGroup(d);
}

FiniteGroup FiniteGroup::semidirect(int p, int q, int alpha) {
  if (!is_prime(p)) throw GroupError("semidirect: p must be prime");
  if (!(q == 1 || is_prime(q))) throw GroupError("semidirect: q must be prime (or 1)");
  if ((p - 1) % q != 0) throw GroupError("semidirect: q must divide p-1");
  alpha %= p;
  if (alpha <= 0) throw GroupError("semidirect: alpha must be a unit mod p");
  if (mod_pow(alpha, q, p) != 1) throw GroupError("semidirect: alpha^q must be 1 mod p");
  if (q != 1 && alpha == 1) throw GroupError("semidirect: alpha must be nontrivial when q > 1");
  auto d = std::make_shared<Data>();
  d->kind = GroupKind::semidirect;
  d->name = "Z" + std::to_string(p) + "xZ" + std::to_string(q);
  d->order = std::size_t(p) * std::size_t(q);
  d->sd = {p, q, alpha};
  d->alpha_pow.resize(q);
  for (int b = 0; b < q; ++b) d->alpha_pow[b] = int(mod_pow(alpha, b, p));
  finalize(*d, true);
  if (p > 1) d->gens.push_back(1);            // (1, 0)
  if (q > 1) d->gens.push_back(Elem(p));      // (0, 1)
  compute_abelian(*d);
  return FiniteGroup(d);
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<Elem>> mul, std::string name) {
  const std::size_t n = mul.size();
  if (n == 0) throw GroupError("empty multiplication table");
  auto d = std::make_shared<Data>();
  d->kind = GroupKind::table;
  d->name = name.empty() ? "table" + std::to_string(n) : std::move(name);
  d->order = n;
  d->table.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    if (mul[a].size() != n) throw GroupError("multiplication table is not square");
    std::vector<std::uint8_t> row_seen(n, 0);
    for (std::size_t b = 0; b < n; ++b) {
      const Elem v = mul[a][b];
      if (v >= n) throw GroupError("multiplication table entry out of range");
      if (row_seen[v]) throw GroupError("multiplication table row is not a permutation");
      row_seen[v] = 1;
      d->table[a * n + b] = v;
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    if (d->table[a] != a || d->table[a * n] != a) throw GroupError("element 0 is not the identity");
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<std::uint8_t> col_seen(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
      if (col_seen[d->table[a * n + b]]) throw GroupError("multiplication table column is not a permutation");
      col_seen[d->table[a * n + b]] = 1;
    }
  }
  std::vector<Elem> all(n);
  std::iota(all.begin(), all.end(), 0);
  d->gens = greedy_gens(*d, all);
  // Light's test: associativity only needs checking against a generating set.
  for (Elem s : d->gens)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (d->raw_mul(d->raw_mul(Elem(x), s), Elem(y)) != d->raw_mul(Elem(x), d->raw_mul(s, Elem(y))))
          throw GroupError("multiplication table is not associative");
  finalize(*d, false);
  compute_abelian(*d);
  return FiniteGroup(d);
}

GroupKind FiniteGroup::kind() const { return d_->kind; }
std::size_t FiniteGroup::order() const { return d_->order; }
const std::string& FiniteGroup::name() const { return d_->name; }
Elem FiniteGroup::mul(Elem a, Elem b) const { return d_->raw_mul(a, b); }
Elem FiniteGroup::inv(Elem a) const { return d_->inverse[a]; }
bool FiniteGroup::is_abelian() const { return d_->abelian; }
const std::vector<Elem>& FiniteGroup::generators() const { return d_->gens; }

Elem FiniteGroup::pow(Elem a, long long k) const {
  if (k < 0) {
    a = inv(a);
    k = -k;
  }
  Elem r = 0;
  Elem b = a;
  while (k > 0) {
    if (k & 1) r = mul(r, b);
    b = mul(b, b);
    k >>= 1;
  }
  return r;
}

std::size_t FiniteGroup::element_order(Elem a) const {
  std::size_t k = 1;
  for (Elem x = a; x != 0; x = mul(x, a)) ++k;
  return k;
}

int FiniteGroup::degree() const {
  if (d_->kind != GroupKind::permutation) throw GroupError("not a permutation group");
  return d_->degree;
}

const Perm& FiniteGroup::permutation(Elem a) const {
  if (d_->kind != GroupKind::permutation) throw GroupError("not a permutation group");
  return d_->perms.at(a);
}

std::optional<Elem> FiniteGroup::find(const Perm& p) const {
  if (d_->kind != GroupKind::permutation || int(p.size()) != d_->degree) return std::nullopt;
  auto it = d_->perm_index.find(pack_perm(p));
  if (it == d_->perm_index.end()) return std::nullopt;
  return it->second;
}

std::vector<int> FiniteGroup::cycle_type(Elem a) const {
  const Perm& p = permutation(a);
  std::vector<std::uint8_t> seen(p.size(), 0);
  std::vector<int> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = 1;
      ++len;
    }
    if (len > 1) out.push_back(len);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

std::string FiniteGroup::cycle_notation(Elem a) const {
  const Perm& p = permutation(a);
  std::vector<std::uint8_t> seen(p.size(), 0);
  std::ostringstream os;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == i) continue;
    os << '(';
    bool first = true;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = 1;
      if (!first) os << ' ';
      os << j + 1;
      first = false;
    }
    os << ')';
  }
  const std::string s = os.str();
  return s.empty() ? "e" : s;
}

const SemidirectParams& FiniteGroup::semidirect_params() const {
  if (d_->kind != GroupKind::semidirect) throw GroupError("not a semidirect product");
  return d_->sd;
}

std::pair<int, int> FiniteGroup::semidirect_pair(Elem x) const {
  const int p = semidirect_params().p;
  return {int(x) % p, int(x) / p};
}

Elem FiniteGroup::semidirect_elem(int a, int b) const {
  const auto& s = semidirect_params();
  a = ((a % s.p) + s.p) % s.p;
  b = ((b % s.q) + s.q) % s.q;
  return Elem(b * s.p + a);
}

std::string FiniteGroup::element_label(Elem a) const {
  switch (d_->kind) {
    case GroupKind::permutation:
      return cycle_notation(a);
    case GroupKind::semidirect: {
      const auto [x, y] = semidirect_pair(a);
      return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
    }
    case GroupKind::table:
      break;
  }
  return std::to_string(a);
}

std::vector<Elem> closure(const FiniteGroup& g, std::span<const Elem> generators) {
  std::vector<std::uint8_t> seen(g.order(), 0);
  std::vector<Elem> out{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (Elem s : generators) {
      const Elem y = g.mul(out[i], s);
      if (!seen[y]) {
        seen[y] = 1;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Elem> greedy_generators(const FiniteGroup& g, std::span<const Elem> members) {
  std::vector<Elem> gens;
  std::vector<std::uint8_t> in(g.order(), 0);
  in[0] = 1;
  std::size_t covered = 1;
  for (Elem x : members) {
    if (covered == members.size()) break;
    if (in[x]) continue;
    gens.push_back(x);
    const auto span = closure(g, gens);
    for (Elem y : span) in[y] = 1;
    covered = span.size();
  }
  return gens;
}

// ---------------------------------------------------------------- Subgroup

Subgroup::Subgroup(FiniteGroup parent, std::vector<Elem> members, std::vector<Elem> generators)
    : parent_(std::move(parent)), members_(std::move(members)), generators_(std::move(generators)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty() || members_.front() != 0) throw GroupError("subgroup must contain the identity");
  member_flag_.assign(parent_.order(), 0);
  for (Elem x : members_) {
    if (x >= parent_.order()) throw GroupError("subgroup member out of range");
    member_flag_[x] = 1;
  }
}

Subgroup Subgroup::whole(const FiniteGroup& g) {
  std::vector<Elem> all(g.order());
  std::iota(all.begin(), all.end(), 0);
  return Subgroup(g, std::move(all), g.generators());
}

Subgroup Subgroup::generated_by(const FiniteGroup& g, std::span<const Elem> generators) {
  std::vector<Elem> gens;
  for (Elem s : generators)
    if (s != 0) gens.push_back(s);
  return Subgroup(g, closure(g, gens), gens);
}

Subgroup Subgroup::from_members(const FiniteGroup& g, std::vector<Elem> members) {
  std::sort(members.begin(), members.end());
  auto gens = greedy_generators(g, members);
  return Subgroup(g, std::move(members), std::move(gens));
}

std::optional<std::size_t> Subgroup::local_index(Elem x) const {
  if (x >= member_flag_.size() || !member_flag_[x]) return std::nullopt;
  return std::size_t(std::lower_bound(members_.begin(), members_.end(), x) - members_.begin());
}

FiniteGroup Subgroup::as_group() const {
  if (is_whole()) return parent_;
  const std::size_t n = members_.size();
  std::vector<std::vector<Elem>> table(n, std::vector<Elem>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      table[a][b] = Elem(*local_index(parent_.mul(members_[a], members_[b])));
  return FiniteGroup::from_table(std::move(table), parent_.name() + "-sub" + std::to_string(n));
}

// ---------------------------------------------------------------- classes

std::vector<ConjugacyClass> conjugacy_classes(const FiniteGroup& g) {
  const std::size_t n = g.order();
  std::vector<std::uint8_t> assigned(n, 0);
  std::vector<ConjugacyClass> out;
  const auto& gens = g.generators();
  for (Elem x = 0; x < n; ++x) {
    if (assigned[x]) continue;
    ConjugacyClass c;
    c.representative = x;
    c.members.push_back(x);
    assigned[x] = 1;
    for (std::size_t i = 0; i < c.members.size(); ++i)
      for (Elem s : gens) {
        const Elem y = g.conj(s, c.members[i]);
        if (!assigned[y]) {
          assigned[y] = 1;
          c.members.push_back(y);
        }
      }
    std::sort(c.members.begin(), c.members.end());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::uint32_t> class_lookup(const FiniteGroup& g, std::span<const ConjugacyClass> classes) {
  std::vector<std::uint32_t> out(g.order(), 0);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (Elem x : classes[c].members) out[x] = std::uint32_t(c);
  return out;
}

Subgroup centralizer(const FiniteGroup& g, Elem x) {
  if (x == 0) return Subgroup::whole(g);
  std::vector<Elem> members;
  for (Elem y = 0; y < g.order(); ++y)
    if (g.commute(x, y)) members.push_back(y);
  return Subgroup::from_members(g, std::move(members));
}

Subgroup centralizer_intersection(const FiniteGroup& g, Elem x, Elem y) {
  std::vector<Elem> members;
  for (Elem z = 0; z < g.order(); ++z)
    if (g.commute(x, z) && g.commute(y, z)) members.push_back(z);
  return Subgroup::from_members(g, std::move(members));
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  std::vector<Elem> members;
  for (Elem x : a.members())
    if (b.contains(x)) members.push_back(x);
  return Subgroup::from_members(a.parent(), std::move(members));
}

Transversal left_transversal(const FiniteGroup& g, const Subgroup& h) {
  const std::size_t n = g.order();
  constexpr std::uint32_t kUnset = ~std::uint32_t(0);
  Transversal t{h, {}, std::vector<std::uint32_t>(n, kUnset)};
  for (Elem x = 0; x < n; ++x) {
    if (t.coset_of[x] != kUnset) continue;
    const auto idx = std::uint32_t(t.representatives.size());
    t.representatives.push_back(x);
    for (Elem z : h.members()) t.coset_of[g.mul(x, z)] = idx;
  }
  return t;
}

CosetFactor coset_factorize(const Transversal& t, Elem g) {
  const FiniteGroup& G = t.subgroup.parent();
  const Elem rep = t.representatives[t.coset_of[g]];
  return {rep, G.mul(G.inv(rep), g)};
}

DoubleCosetReps double_coset_reps(const FiniteGroup& g, const Subgroup& h, const Subgroup& k) {
  const std::size_t n = g.order();
  std::vector<std::uint8_t> seen(n, 0);
  DoubleCosetReps out{h, k, {}, {}};
  for (Elem x = 0; x < n; ++x) {
    if (seen[x]) continue;
    std::size_t size = 0;
    for (Elem a : h.members()) {
      const Elem ax = g.mul(a, x);
      for (Elem b : k.members()) {
        const Elem y = g.mul(ax, b);
        if (!seen[y]) {
          seen[y] = 1;
          ++size;
        }
      }
    }
    out.representatives.push_back(x);
    out.sizes.push_back(size);
  }
  return out;
}

std::vector<ClassProductTerm> class_algebra_product(const FiniteGroup& g,
                                                    std::span<const ConjugacyClass> classes,
                                                    std::size_t cx, std::size_t cy) {
  const auto lookup = class_lookup(g, classes);
  const Elem x = classes[cx].representative;
  const Elem y = classes[cy].representative;
  const Subgroup zx = centralizer(g, x);
  const Subgroup zy = centralizer(g, y);
  const auto dc = double_coset_reps(g, zx, zy);
  std::vector<std::size_t> mult(classes.size(), 0);
  for (Elem d : dc.representatives) {
    const Elem yd = g.conj(d, y);
    const Elem prod = g.mul(x, yd);
    const std::size_t num = centralizer(g, prod).order();
    const std::size_t den = centralizer_intersection(g, x, yd).order();
    mult[lookup[prod]] += num / den;
  }
  std::vector<ClassProductTerm> out;
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (mult[c] > 0) out.push_back({c, mult[c]});
  return out;
}

// ---------------------------------------------------------------- permutations

Perm perm_compose(const Perm& a, const Perm& b) {
  Perm c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[b[i]];
  return c;
}

Perm perm_inverse(const Perm& a) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[a[i]] = std::uint8_t(i);
  return r;
}

Perm perm_identity(int n) {
  Perm p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), std::uint8_t(0));
  return p;
}

Perm perm_from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
  Perm p = perm_identity(n);
  for (const auto& c : cycles) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const int from = c[i];
      const int to = c[(i + 1) % c.size()];
      if (from < 0 || from >= n || to < 0 || to >= n) throw GroupError("cycle entry out of range");
      p[std::size_t(from)] = std::uint8_t(to);
    }
  }
  return p;
}

bool perm_is_even(const Perm& p) {
  std::vector<std::uint8_t> seen(p.size(), 0);
  std::size_t transpositions = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = 1;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 0;
}

}  // namespace qdk
