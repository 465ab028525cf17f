#include "qdk/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

namespace qdk {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<long long> parse_int(std::string_view s) {
  s = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

long long require_int(std::string_view s, std::string_view what) {
  if (auto v = parse_int(s)) return *v;
  throw ParseError("bad " + std::string(what) + " '" + std::string(s) + "'");
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type");
  }
}

int least_alpha(int p, int q) {
  for (int a = 2; a < p; ++a) {
    long long v = 1;
    for (int k = 0; k < q; ++k) v = v * a % p;
    if (v == 1) return a;
  }
  throw ParseError("no element of order " + std::to_string(q) + " mod " + std::to_string(p));
}

// Group constructors report bad parameters as GroupError; on input they are parse errors.
template <class F>
FiniteGroup build(F&& f) {
  try {
    return f();
  } catch (const GroupError& e) {
    throw ParseError(e.what());
  }
}

FiniteGroup group_from_json(const Json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "symmetric") return build([&] { return FiniteGroup::symmetric(field<int>(j, "n")); });
  if (kind == "alternating") return build([&] { return FiniteGroup::alternating(field<int>(j, "n")); });
  if (kind == "cyclic") return build([&] { return FiniteGroup::cyclic(field<int>(j, "n")); });
  if (kind == "semidirect") {
    const int p = field<int>(j, "p");
    const int q = field<int>(j, "q");
    const int alpha = j.contains("alpha") ? field<int>(j, "alpha") : least_alpha(p, q);
    return build([&] { return FiniteGroup::semidirect(p, q, alpha); });
  }
  if (kind == "table") {
    auto mul = field<std::vector<std::vector<Elem>>>(j, "mul");
    std::string name = j.contains("name") ? field<std::string>(j, "name") : std::string{};
    return build([&] { return FiniteGroup::from_table(std::move(mul), std::move(name)); });
  }
  throw ParseError("unknown group kind '" + kind + "'");
}

FiniteGroup group_from_name(std::string_view s) {
  if (s.size() >= 2 && (s[0] == 'S' || s[0] == 'A')) {
    const int n = int(require_int(s.substr(1), "group name"));
    return build([&] { return s[0] == 'S' ? FiniteGroup::symmetric(n) : FiniteGroup::alternating(n); });
  }
  if (s.size() >= 2 && s[0] == 'Z') {
    const auto x = s.find("xZ");
    if (x == std::string_view::npos) {
      const int n = int(require_int(s.substr(1), "group name"));
      return build([&] { return FiniteGroup::cyclic(n); });
    }
    const int p = int(require_int(s.substr(1, x - 1), "group name"));
    std::string_view rest = s.substr(x + 2);
    const auto colon = rest.find(':');
    const int q = int(require_int(rest.substr(0, colon), "group name"));
    const int alpha = colon == std::string_view::npos ? least_alpha(p, q)
                                                      : int(require_int(rest.substr(colon + 1), "alpha"));
    return build([&] { return FiniteGroup::semidirect(p, q, alpha); });
  }
  throw ParseError("unknown group '" + std::string(s) + "'");
}

std::optional<Elem> find_by_cycle_type(const FiniteGroup& g, const std::vector<int>& type) {
  for (Elem x = 0; x < g.order(); ++x)
    if (g.cycle_type(x) == type) return x;
  return std::nullopt;
}

Elem parse_cycles(const FiniteGroup& g, std::string_view s) {
  std::vector<std::vector<int>> cycles;
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    if (s[i] != '(') throw ParseError("bad cycle notation '" + std::string(s) + "'");
    const auto close = s.find(')', i);
    if (close == std::string_view::npos) throw ParseError("unclosed cycle in '" + std::string(s) + "'");
    std::vector<int> cycle;
    std::istringstream in{std::string(s.substr(i + 1, close - i - 1))};
    std::string tok;
    while (in >> tok) {
      const long long v = require_int(tok, "cycle entry");
      if (v < 1 || v > g.degree()) throw ParseError("cycle entry " + tok + " out of range");
      cycle.push_back(int(v - 1));
    }
    cycles.push_back(std::move(cycle));
    i = close + 1;
  }
  Perm p;
  try {
    p = perm_from_cycles(g.degree(), cycles);
  } catch (const GroupError& e) {
    throw ParseError(e.what());
  }
  if (auto x = g.find(p)) return *x;
  throw ParseError("permutation '" + std::string(s) + "' is not in " + g.name());
}

Elem parse_pair(const FiniteGroup& g, std::string_view s) {
  const auto comma = s.find(',');
  if (s.back() != ')' || comma == std::string_view::npos) throw ParseError("bad pair '" + std::string(s) + "'");
  const auto [p, q, alpha] = g.semidirect_params();
  const long long a = require_int(s.substr(1, comma - 1), "pair entry");
  const long long b = require_int(s.substr(comma + 1, s.size() - comma - 2), "pair entry");
  return g.semidirect_elem(int(((a % p) + p) % p), int(((b % q) + q) % q));
}

std::size_t parse_charge(const QuantumDouble& qd, std::size_t sector, std::string_view s) {
  s = trim(s);
  const auto& charges = qd.charges(sector);
  if (auto v = parse_int(s)) {
    if (*v < 0 || std::size_t(*v) >= charges.size())
      throw ParseError("charge index " + std::string(s) + " out of range (" + std::to_string(charges.size()) +
                       " centralizer irreps)");
    return std::size_t(*v);
  }
  if (s == "trivial" || s == qd.charge_irrep({sector, 0}).label) return 0;
  for (std::size_t i = 0; i < charges.size(); ++i)
    if (charges[i].label == s) return i;
  throw ParseError("unknown charge '" + std::string(s) + "'");
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void render(std::ostringstream& out, const Json& j, int indent);

void render_scalar(std::ostringstream& out, const Json& j) {
  if (j.is_string())
    out << j.get<std::string>();
  else
    out << j.dump();
}

bool is_flat(const Json& j) {
  if (!j.is_array()) return !j.is_object();
  return std::all_of(j.begin(), j.end(), [](const Json& x) { return is_flat(x); });
}

void render(std::ostringstream& out, const Json& j, int indent) {
  const std::string pad(std::size_t(indent) * 2, ' ');
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      out << pad << key << ":";
      if (is_flat(value)) {
        out << ' ';
        render_scalar(out, value);
        out << '\n';
      } else {
        out << '\n';
        render(out, value, indent + 1);
      }
    }
  } else if (j.is_array()) {
    for (const auto& item : j) {
      if (is_flat(item)) {
        out << pad << "- ";
        render_scalar(out, item);
        out << '\n';
      } else {
        out << pad << "-\n";
        render(out, item, indent + 1);
      }
    }
  } else {
    out << pad;
    render_scalar(out, j);
    out << '\n';
  }
}

}  // namespace

FiniteGroup parse_group(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ParseError("empty group spec");
  if (text.front() == '{') return group_from_json(parse_json(text));
  return group_from_name(text);
}

Json group_to_json(const FiniteGroup& g) {
  const std::string& name = g.name();
  const bool numbered = name.size() >= 2 && std::all_of(name.begin() + 1, name.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
  if (g.kind() == GroupKind::permutation && numbered && (name[0] == 'S' || name[0] == 'A'))
    return {{"kind", name[0] == 'S' ? "symmetric" : "alternating"}, {"n", g.degree()}};
  if (numbered && name[0] == 'Z') return {{"kind", "cyclic"}, {"n", g.order()}};
  if (g.kind() == GroupKind::semidirect) {
    const auto& sd = g.semidirect_params();
    return {{"kind", "semidirect"}, {"p", sd.p}, {"q", sd.q}, {"alpha", sd.alpha}};
  }
  if (g.order() > FiniteGroup::kTableLimit) throw CapExceeded("group too large to serialize as a table");
  Json mul = Json::array();
  for (Elem a = 0; a < g.order(); ++a) {
    Json row = Json::array();
    for (Elem b = 0; b < g.order(); ++b) row.push_back(g.mul(a, b));
    mul.push_back(std::move(row));
  }
  return {{"kind", "table"}, {"mul", std::move(mul)}};
}

Elem parse_element(const FiniteGroup& g, std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty element");
  if (s == "e" || s == "identity") return 0;
  if (auto v = parse_int(s)) {
    if (*v < 0 || std::size_t(*v) >= g.order()) throw ParseError("element index " + std::string(s) + " out of range");
    return Elem(*v);
  }
  if (g.kind() == GroupKind::permutation) {
    std::optional<Elem> x;
    if (s == "transpositions" || s == "transposition") {
      x = find_by_cycle_type(g, {2});
    } else if (s == "double-transpositions" || s == "double-transposition") {
      x = find_by_cycle_type(g, {2, 2});
    } else if (const auto dash = s.find("-cycle"); dash != std::string_view::npos) {
      x = find_by_cycle_type(g, {int(require_int(s.substr(0, dash), "cycle length"))});
    } else if (s.front() == '(') {
      return parse_cycles(g, s);
    } else {
      throw ParseError("unknown element '" + std::string(s) + "'");
    }
    if (!x) throw ParseError("no element of type '" + std::string(s) + "' in " + g.name());
    return *x;
  }
  if (g.kind() == GroupKind::semidirect && s.front() == '(') return parse_pair(g, s);
  throw ParseError("unknown element '" + std::string(s) + "' for " + g.name());
}

DGIrrepLabel parse_label(const QuantumDouble& qd, std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty irrep label");
  const FiniteGroup& g = qd.group();
  if (s.front() == '{') {
    const Json j = parse_json(s);
    if (!j.is_object() || !j.contains("class_rep")) throw ParseError("missing field 'class_rep'");
    const Json& rep = j.at("class_rep");
    const Elem h = rep.is_string() ? parse_element(g, rep.get<std::string>())
                                   : parse_element(g, std::to_string(field<long long>(j, "class_rep")));
    const std::size_t sector = qd.class_of(h);
    if (qd.flux_rep({sector, 0}) != h)
      throw ParseError("class_rep " + std::to_string(h) + " is not the canonical representative " +
                       std::to_string(qd.flux_rep({sector, 0})));
    const long long c = field<long long>(j, "centralizer_irrep");
    return {sector, parse_charge(qd, sector, std::to_string(c))};
  }
  const auto colon = s.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("irrep label must be JSON, fluxon:<class>, chargeon:<charge> or <class>:<charge>");
  const std::string_view head = s.substr(0, colon);
  const std::string_view tail = s.substr(colon + 1);
  if (head == "fluxon") return qd.fluxon(qd.class_of(parse_element(g, tail)));
  if (head == "chargeon") {
    const std::size_t sector = qd.class_of(0);
    return {sector, parse_charge(qd, sector, tail)};
  }
  const std::size_t sector = qd.class_of(parse_element(g, head));
  return {sector, parse_charge(qd, sector, tail)};
}

Json label_to_json(const QuantumDouble& qd, const DGIrrepLabel& l) {
  return {{"class_rep", qd.flux_rep(l)}, {"centralizer_irrep", l.charge}};
}

BraidWord parse_braid(std::string_view text) {
  const std::string_view s = trim(text);
  try {
    if (s.empty() || s.front() != '{') return BraidWord::parse(s);
    const Json j = parse_json(s);
    std::vector<BraidLetter> letters;
    for (const auto& [index, sign] : field<std::vector<std::pair<int, int>>>(j, "word"))
      letters.push_back({index, sign});
    return BraidWord(field<int>(j, "strands"), std::move(letters));
  } catch (const GroupError& e) {
    throw ParseError(e.what());
  }
}

Json braid_to_json(const BraidWord& w) {
  Json word = Json::array();
  for (const BraidLetter& l : w.letters()) word.push_back({l.index, l.sign});
  return {{"strands", w.strands()}, {"word", std::move(word)}};
}

Json complex_to_json(cplx z) { return Json::array({number_or_null(z.real()), number_or_null(z.imag())}); }

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const InvariantValue& v) {
  Json j = {{"value", complex_to_json(v.value)},
            {"closure", v.kind == ClosureKind::trace ? "trace" : "plat"},
            {"label", v.label},
            {"exact", v.exact()}};
  if (v.sampling) {
    const SamplingInfo& s = *v.sampling;
    j["sampling"] = {{"epsilon", s.epsilon},
                     {"samples", s.samples},
                     {"seed", s.seed},
                     {"mean", complex_to_json(s.mean)},
                     {"scale", s.scale}};
  }
  return j;
}

Json to_json(const SuiteReport& r) {
  Json props = Json::array();
  for (const PropertyResult& p : r.properties)
    props.push_back({{"name", p.name}, {"passed", p.passed}, {"max_deviation", p.max_deviation}, {"detail", p.detail}});
  return {{"suite", r.suite},
          {"group", r.group},
          {"passed", r.passed()},
          {"max_deviation", r.max_deviation()},
          {"properties", std::move(props)}};
}

Json to_json(const QuantumDouble& qd, const CGDecomposition& d) {
  Json summands = Json::array();
  for (const CGSummand& s : d.summands)
    summands.push_back({{"flux_class", qd.flux_rep(s.label)},
                        {"charge", s.label.charge},
                        {"name", qd.describe(s.label)},
                        {"multiplicity", s.multiplicity},
                        {"dim", s.dim},
                        {"coset_rep", s.coset_rep}});
  Json conditions = Json::array();
  for (const CGCondition& c : d.conditions)
    conditions.push_back(
        {{"name", c.name}, {"satisfied", c.satisfied}, {"deviation", c.deviation}, {"detail", c.detail}});
  return {{"first", label_to_json(qd, d.first)},
          {"second", label_to_json(qd, d.second)},
          {"total_dim", d.total_dim()},
          {"summands", std::move(summands)},
          {"conditions", std::move(conditions)}};
}

Json to_json(const FluxonIdentityReport& r) {
  return {{"h", r.homomorphisms},
          {"pl_rescaled", r.rescaled},
          {"plat", r.plat},
          {"cap_pairs", r.cap_pairs},
          {"flux_set_size", r.flux_set_size},
          {"error", r.error},
          {"passed", r.passed}};
}

Json to_json(const FiniteGroup& g, const AmplificationReport& r) {
  Json word = Json::array();
  for (const auto& [gen, sign] : r.word) word.push_back({gen, sign});
  return {{"ell", r.ell},
          {"alpha", g.element_label(r.alpha)},
          {"relating_word", std::move(word)},
          {"variables", r.system.variables},
          {"equations", r.system.equations.size()},
          {"solutions_c", r.solutions_c},
          {"solutions_d", r.solutions_d},
          {"required_ratio", std::uint64_t(1) << r.ell},
          {"passed", r.passed}};
}

std::string to_text(const Json& j) {
  std::ostringstream out;
  render(out, j, 0);
  return out.str();
}

}  // namespace qdk
