#include "qdk/double_algebra.hpp"

#include <cmath>

namespace qdk {

namespace {

void check_same(const FiniteGroup& a, const FiniteGroup& b) {
  if (!a.same_as(b)) throw GroupError("D(G) elements over different groups");
}

}  // namespace

DGElement DGElement::basis(const FiniteGroup& g, Elem x, Elem h, cplx c) {
  DGElement e(g);
  e.add({x, h}, c);
  return e;
}

DGElement DGElement::unit(const FiniteGroup& g) { return group_element(g, 0); }

DGElement DGElement::group_element(const FiniteGroup& g, Elem x) {
  DGElement e(g);
  for (Elem h = 0; h < g.order(); ++h) e.add({x, h}, 1.0);
  return e;
}

DGElement DGElement::dual_element(const FiniteGroup& g, Elem h) { return basis(g, 0, h); }

void DGElement::add(DGBasis b, cplx c) {
  if (c == cplx(0)) return;
  auto [it, inserted] = terms_.emplace(b, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0)) terms_.erase(it);
  }
}

cplx DGElement::coefficient(DGBasis b) const {
  auto it = terms_.find(b);
  return it == terms_.end() ? cplx(0) : it->second;
}

DGElement DGElement::operator+(const DGElement& o) const {
  check_same(group_, o.group_);
  DGElement r = *this;
  for (const auto& [b, c] : o.terms_) r.add(b, c);
  return r;
}

DGElement DGElement::operator-(const DGElement& o) const { return *this + o * cplx(-1); }

DGElement DGElement::operator*(cplx s) const {
  DGElement r(group_);
  for (const auto& [b, c] : terms_) r.add(b, c * s);
  return r;
}

double DGElement::max_abs_diff(const DGElement& o) const {
  double m = 0;
  for (const auto& [b, c] : (*this - o).terms_) m = std::max(m, std::abs(c));
  return m;
}

std::optional<DGBasis> basis_product(const FiniteGroup& g, DGBasis a, DGBasis b) {
  // h1^{g2} = g2^-1 h1 g2 must equal h2.
  if (g.mul(g.mul(g.inv(b.g), a.h), b.g) != b.h) return std::nullopt;
  return DGBasis{g.mul(a.g, b.g), b.h};
}

DGElement dg_multiply(const DGElement& a, const DGElement& b) {
  check_same(a.group(), b.group());
  DGElement r(a.group());
  for (const auto& [ba, ca] : a.terms())
    for (const auto& [bb, cb] : b.terms())
      if (auto p = basis_product(a.group(), ba, bb)) r.add(*p, ca * cb);
  return r;
}

DGElement antipode(const DGElement& a) {
  const FiniteGroup& g = a.group();
  DGElement r(g);
  for (const auto& [b, c] : a.terms()) r.add({g.inv(b.g), g.conj(b.g, g.inv(b.h))}, c);
  return r;
}

cplx counit(const DGElement& a) {
  cplx s = 0;
  for (const auto& [b, c] : a.terms())
    if (b.h == 0) s += c;
  return s;
}

// ---------------------------------------------------------------- tensors

DGTensor DGTensor::pure(const DGElement& a, const DGElement& b) {
  check_same(a.group(), b.group());
  DGTensor t(a.group());
  for (const auto& [ba, ca] : a.terms())
    for (const auto& [bb, cb] : b.terms()) t.add({ba, bb}, ca * cb);
  return t;
}

DGTensor DGTensor::unit(const FiniteGroup& g) { return pure(DGElement::unit(g), DGElement::unit(g)); }

void DGTensor::add(const Key& k, cplx c) {
  if (c == cplx(0)) return;
  auto [it, inserted] = terms_.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0)) terms_.erase(it);
  }
}

DGTensor DGTensor::operator*(const DGTensor& o) const {
  check_same(group_, o.group_);
  DGTensor r(group_);
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_) {
      auto p1 = basis_product(group_, ka.first, kb.first);
      if (!p1) continue;
      auto p2 = basis_product(group_, ka.second, kb.second);
      if (!p2) continue;
      r.add({*p1, *p2}, ca * cb);
    }
  return r;
}

DGTensor DGTensor::swapped() const {
  DGTensor r(group_);
  for (const auto& [k, c] : terms_) r.add({k.second, k.first}, c);
  return r;
}

double DGTensor::max_abs_diff(const DGTensor& o) const {
  DGTensor d = *this;
  for (const auto& [k, c] : o.terms_) d.add(k, -c);
  double m = 0;
  for (const auto& [k, c] : d.terms_) m = std::max(m, std::abs(c));
  return m;
}

DGTensor comultiply(const DGElement& a) {
  const FiniteGroup& g = a.group();
  DGTensor r(g);
  for (const auto& [b, c] : a.terms())
    for (Elem h1 = 0; h1 < g.order(); ++h1) {
      const Elem h2 = g.mul(g.inv(h1), b.h);  // h1 h2 = h
      r.add({{b.g, h2}, {b.g, h1}}, c);
    }
  return r;
}

DGTensor r_matrix(const FiniteGroup& g) {
  DGTensor r(g);
  for (Elem x = 0; x < g.order(); ++x)
    for (Elem k = 0; k < g.order(); ++k) r.add({{x, k}, {0, x}}, 1.0);
  return r;
}

DGTensor r_matrix_inverse(const FiniteGroup& g) {
  DGTensor r(g);
  for (Elem x = 0; x < g.order(); ++x)
    for (Elem k = 0; k < g.order(); ++k) r.add({{g.inv(x), g.conj(x, g.inv(k))}, {0, x}}, 1.0);
  return r;
}

// ---------------------------------------------------------------- regular action

std::optional<std::size_t> regular_basis_action(const FiniteGroup& g, DGBasis a, std::size_t basis_index) {
  const std::size_t n = g.order();
  const Elem x = Elem(basis_index / n);
  const Elem h = Elem(basis_index % n);
  auto p = basis_product(g, a, {x, h});
  if (!p) return std::nullopt;
  return regular_index(n, p->g, p->h);
}

Vec regular_action(const DGElement& a, const Vec& v) {
  const FiniteGroup& g = a.group();
  const std::size_t dim = g.order() * g.order();
  if (std::size_t(v.size()) != dim) throw GroupError("regular_action: dimension mismatch");
  Vec out = Vec::Zero(Eigen::Index(dim));
  for (const auto& [b, c] : a.terms())
    for (std::size_t i = 0; i < dim; ++i) {
      if (v[Eigen::Index(i)] == cplx(0)) continue;
      if (auto j = regular_basis_action(g, b, i)) out[Eigen::Index(*j)] += c * v[Eigen::Index(i)];
    }
  return out;
}

}  // namespace qdk
