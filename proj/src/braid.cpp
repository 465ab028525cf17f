#include "qdk/braid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

namespace qdk {

// ---------------------------------------------------------------- words

BraidWord::BraidWord(int strands, std::vector<BraidLetter> letters)
    : strands_(strands), letters_(std::move(letters)) {
  if (strands_ < 1) throw GroupError("braid needs at least one strand");
  for (const auto& l : letters_) {
    if (l.index < 1 || l.index >= strands_)
      throw GroupError("generator s" + std::to_string(l.index) + " out of range for B" +
                       std::to_string(strands_));
    if (l.sign != 1 && l.sign != -1) throw GroupError("generator sign must be +1 or -1");
  }
}

namespace {

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != ',') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

BraidWord BraidWord::parse(std::string_view text, int default_strands) {
  int strands = default_strands;
  std::string_view body = text;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    auto head = split_tokens(text.substr(0, colon));
    if (head.size() != 1 || head[0].size() < 2 || (head[0][0] != 'B' && head[0][0] != 'b'))
      throw ParseError("braid prefix must look like 'B4:'");
    strands = parse_int(head[0].substr(1), "strand count");
    body = text.substr(colon + 1);
  }
  if (strands < 1) throw ParseError("braid word is missing its 'Bn:' strand count");
  std::vector<BraidLetter> letters;
  for (auto tok : split_tokens(body)) {
    if (tok.size() < 2 || (tok[0] != 's' && tok[0] != 'S'))
      throw ParseError("bad braid letter '" + std::string(tok) + "'");
    letters.push_back({parse_int(tok.substr(1), "generator index"), tok[0] == 's' ? 1 : -1});
  }
  try {
    return BraidWord(strands, std::move(letters));
  } catch (const GroupError& e) {
    throw ParseError(e.what());
  }
}

std::string BraidWord::to_string() const {
  std::string out = "B" + std::to_string(strands_) + ":";
  for (const auto& l : letters_) out += (l.sign > 0 ? " s" : " S") + std::to_string(l.index);
  return out;
}

BraidWord BraidWord::inverse() const {
  std::vector<BraidLetter> inv(letters_.rbegin(), letters_.rend());
  for (auto& l : inv) l.sign = -l.sign;
  return BraidWord(strands_, std::move(inv));
}

BraidWord BraidWord::operator*(const BraidWord& o) const {
  if (o.strands_ != strands_) throw GroupError("cannot compose braids on different strand counts");
  auto letters = letters_;
  letters.insert(letters.end(), o.letters_.begin(), o.letters_.end());
  return BraidWord(strands_, std::move(letters));
}

BraidWord& BraidWord::append(BraidLetter l) {
  if (l.index < 1 || l.index >= strands_ || (l.sign != 1 && l.sign != -1))
    throw GroupError("bad braid letter");
  letters_.push_back(l);
  return *this;
}

BraidWord BraidWord::widened(int strands) const {
  if (strands < strands_) throw GroupError("cannot narrow a braid");
  return BraidWord(strands, letters_);
}

BraidWord BraidWord::shifted(int offset, int strands) const {
  auto letters = letters_;
  for (auto& l : letters) l.index += offset;
  return BraidWord(strands, std::move(letters));
}

std::vector<int> BraidWord::permutation() const {
  std::vector<int> at(static_cast<std::size_t>(strands_));  // at[position] = starting strand
  std::iota(at.begin(), at.end(), 0);
  for (const auto& l : letters_) std::swap(at[std::size_t(l.index - 1)], at[std::size_t(l.index)]);
  std::vector<int> perm(at.size());
  for (std::size_t p = 0; p < at.size(); ++p) perm[std::size_t(at[p])] = int(p);
  return perm;
}

int linking_number(const BraidWord& w) {
  int e = 0;
  for (const auto& l : w.letters()) e += l.sign;
  return e;
}

// ---------------------------------------------------------------- flux sets

FluxSet::FluxSet(FiniteGroup g, std::vector<Elem> members)
    : group_(std::move(g)), members_(std::move(members)), position_(group_.order(), -1) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty()) throw GroupError("flux set is empty");
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] >= group_.order()) throw GroupError("flux set element out of range");
    position_[members_[i]] = std::int32_t(i);
  }
  for (Elem x : members_)
    for (Elem g : group_.generators())
      if (!contains(group_.conj(g, x))) throw GroupError("flux set is not closed under conjugation");
}

FluxSet FluxSet::from_members(const FiniteGroup& g, std::vector<Elem> members) {
  return FluxSet(g, std::move(members));
}

FluxSet FluxSet::conjugacy_class(const FiniteGroup& g, Elem representative) {
  std::vector<Elem> members;
  for (Elem k = 0; k < g.order(); ++k) members.push_back(g.conj(k, representative));
  return FluxSet(g, std::move(members));
}

FluxSet FluxSet::inverse_closed_class(const FiniteGroup& g, Elem x) {
  std::vector<Elem> members;
  for (Elem k = 0; k < g.order(); ++k) {
    members.push_back(g.conj(k, x));
    members.push_back(g.conj(k, g.inv(x)));
  }
  return FluxSet(g, std::move(members));
}

std::size_t FluxSet::position(Elem x) const {
  if (x >= position_.size() || position_[x] < 0)
    throw GroupError("element " + group_.element_label(x) + " is outside the flux set");
  return std::size_t(position_[x]);
}

bool FluxSet::inverse_closed() const {
  return std::all_of(members_.begin(), members_.end(), [&](Elem x) { return contains(group_.inv(x)); });
}

// ---------------------------------------------------------------- states

StateVector StateVector::basis(BasisScheme scheme, BasisTuple t) {
  StateVector s;
  s.scheme = scheme;
  s.strands = t.size();
  s.amplitudes.emplace(std::move(t), 1.0);
  return s;
}

double StateVector::norm() const {
  double n = 0;
  for (const auto& [t, a] : amplitudes) n += std::norm(a);
  return std::sqrt(n);
}

cplx StateVector::inner(const StateVector& o) const {
  cplx s = 0;
  for (const auto& [t, a] : amplitudes)
    if (auto it = o.amplitudes.find(t); it != o.amplitudes.end()) s += std::conj(a) * it->second;
  return s;
}

double StateVector::distance(const StateVector& o) const {
  double d = 0;
  for (const auto& [t, a] : amplitudes) {
    auto it = o.amplitudes.find(t);
    d += std::norm(a - (it == o.amplitudes.end() ? cplx(0) : it->second));
  }
  for (const auto& [t, b] : o.amplitudes)
    if (!amplitudes.count(t)) d += std::norm(b);
  return std::sqrt(d);
}

// ---------------------------------------------------------------- generators

std::pair<std::uint32_t, std::uint32_t> regular_generator(const FiniteGroup& g, int sign,
                                                          std::uint32_t a, std::uint32_t b) {
  const auto n = std::uint32_t(g.order());
  const Elem ga = a / n, ha = a % n, gb = b / n, hb = b % n;
  if (sign > 0) {
    const Elem flux_b = g.conj(gb, hb);
    return {b, g.mul(flux_b, ga) * n + ha};
  }
  const Elem flux_a = g.conj(ga, ha);
  return {g.mul(g.inv(flux_a), gb) * n + hb, a};
}

std::pair<Elem, Elem> fluxon_generator(const FiniteGroup& g, int sign, Elem a, Elem b) {
  if (sign > 0) return {b, g.conj(b, a)};
  return {g.conj(g.inv(a), b), a};
}

BraidRepresentation BraidRepresentation::regular(const FiniteGroup& g) {
  BraidRepresentation r(BasisScheme::regular, g);
  r.local_dim_ = g.order() * g.order();
  r.build_gates();
  return r;
}

BraidRepresentation BraidRepresentation::fluxon(FluxSet flux) {
  BraidRepresentation r(BasisScheme::fluxon, flux.group());
  r.local_dim_ = flux.size();
  r.flux_.push_back(std::move(flux));
  r.build_gates();
  return r;
}

BraidRepresentation BraidRepresentation::irrep(const QuantumDouble& qd, const DGIrrepLabel& l) {
  BraidRepresentation r(BasisScheme::irrep, qd.group());
  const std::size_t d = qd.dim(l);
  const std::size_t dc = qd.charge_dim(l);
  const auto& members = qd.sector(l.sector).cls.members;
  r.local_dim_ = d;
  // R = sum_g g (x) g*: the dual factor selects g = flux of the second factor.
  std::vector<Mat> action(members.size());
  for (std::size_t c = 0; c < members.size(); ++c) action[c] = irrep_group_matrix(qd, l, members[c]);
  r.plus_ = Mat::Zero(Eigen::Index(d * d), Eigen::Index(d * d));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const Mat& act = action[b / dc];
      for (std::size_t out = 0; out < d; ++out)
        r.plus_(Eigen::Index(b * d + out), Eigen::Index(a * d + b)) = act(Eigen::Index(out), Eigen::Index(a));
    }
  r.minus_ = r.plus_.adjoint();
  return r;
}

void BraidRepresentation::build_gates() {
  constexpr std::size_t kGateLimit = 4096;
  const std::size_t d = local_dim_;
  if (d * d > kGateLimit) return;
  plus_ = Mat::Zero(Eigen::Index(d * d), Eigen::Index(d * d));
  minus_ = plus_;
  for (std::uint32_t a = 0; a < d; ++a)
    for (std::uint32_t b = 0; b < d; ++b) {
      auto [p, q] = permute(1, a, b);
      plus_(Eigen::Index(p * d + q), Eigen::Index(a * d + b)) = 1.0;
      auto [r, s] = permute(-1, a, b);
      minus_(Eigen::Index(r * d + s), Eigen::Index(a * d + b)) = 1.0;
    }
}

std::pair<std::uint32_t, std::uint32_t> BraidRepresentation::permute(int sign, std::uint32_t a,
                                                                     std::uint32_t b) const {
  switch (scheme_) {
    case BasisScheme::regular:
      return regular_generator(group_, sign, a, b);
    case BasisScheme::fluxon: {
      const auto& f = flux_.front();
      auto [x, y] = fluxon_generator(group_, sign, f.members()[a], f.members()[b]);
      return {std::uint32_t(f.position(x)), std::uint32_t(f.position(y))};
    }
    case BasisScheme::irrep:
      break;
  }
  throw GroupError("charged irrep braiding is not a permutation");
}

const Mat& BraidRepresentation::gate(int sign) const {
  if (plus_.size() == 0) throw CapExceeded("two-site gate too large to materialize");
  return sign > 0 ? plus_ : minus_;
}

void BraidRepresentation::check(const BraidWord& w, std::size_t strands) const {
  if (std::size_t(w.strands()) != strands)
    throw GroupError("braid on " + std::to_string(w.strands()) + " strands applied to a " +
                     std::to_string(strands) + "-strand state");
}

BasisTuple BraidRepresentation::apply(const BraidWord& w, BasisTuple t) const {
  check(w, t.size());
  for (auto v : t)
    if (v >= local_dim_) throw GroupError("basis index out of range");
  for (const auto& l : w.letters()) {
    auto& a = t[std::size_t(l.index - 1)];
    auto& b = t[std::size_t(l.index)];
    std::tie(a, b) = permute(l.sign, a, b);
  }
  return t;
}

StateVector BraidRepresentation::apply(const BraidWord& w, const StateVector& s) const {
  if (s.scheme != scheme_) throw GroupError("state and representation use different bases");
  check(w, s.strands);
  for (const auto& [t, a] : s.amplitudes)
    for (auto v : t)
      if (v >= local_dim_) throw GroupError("basis index out of range");
  if (is_permutation()) {
    StateVector out{s.scheme, s.strands, {}};
    for (const auto& [t, a] : s.amplitudes) out.amplitudes[apply(w, t)] += a;
    return out;
  }
  StateVector cur = s;
  const auto d = Eigen::Index(local_dim_);
  for (const auto& l : w.letters()) {
    const Mat& g = gate(l.sign);
    StateVector next{s.scheme, s.strands, {}};
    const auto p = std::size_t(l.index - 1);
    for (const auto& [t, amp] : cur.amplitudes) {
      const Eigen::Index col = Eigen::Index(t[p]) * d + Eigen::Index(t[p + 1]);
      for (Eigen::Index row = 0; row < d * d; ++row) {
        const cplx c = g(row, col);
        if (c == cplx(0)) continue;
        BasisTuple u = t;
        u[p] = std::uint32_t(row / d);
        u[p + 1] = std::uint32_t(row % d);
        next.amplitudes[u] += c * amp;
      }
    }
    std::erase_if(next.amplitudes, [](const auto& kv) { return std::abs(kv.second) < 1e-15; });
    cur = std::move(next);
  }
  return cur;
}

void apply_two_site(Vec& v, const Mat& gate, std::size_t local_dim, int strands, int pos) {
  const std::size_t d2 = local_dim * local_dim;
  std::size_t inner = 1;
  for (int k = pos + 2; k < strands; ++k) inner *= local_dim;
  const std::size_t outer = std::size_t(v.size()) / (d2 * inner);
  Vec x(static_cast<Eigen::Index>(d2));
  for (std::size_t hi = 0; hi < outer; ++hi)
    for (std::size_t lo = 0; lo < inner; ++lo) {
      const std::size_t base = hi * d2 * inner + lo;
      for (std::size_t k = 0; k < d2; ++k) x[Eigen::Index(k)] = v[Eigen::Index(base + k * inner)];
      Vec y = gate * x;
      for (std::size_t k = 0; k < d2; ++k) v[Eigen::Index(base + k * inner)] = y[Eigen::Index(k)];
    }
}

Vec BraidRepresentation::apply_dense(const BraidWord& w, Vec v) const {
  std::size_t expected = 1;
  for (int k = 0; k < w.strands(); ++k) expected *= local_dim_;
  if (std::size_t(v.size()) != expected) throw GroupError("dense state has the wrong dimension");
  for (const auto& l : w.letters()) apply_two_site(v, gate(l.sign), local_dim_, w.strands(), l.index - 1);
  return v;
}

}  // namespace qdk
