// The quantum double D(G) as an algebra over the basis {g h*}.
//
// Conventions: x^y = y^-1 x y.
//   (g1 h1*)(g2 h2*) = [h1^g2 == h2] g1 g2 h2*
//   Delta(g h*)      = sum_{h1 h2 = h} g h2* (x) g h1*
//   eps(g h*)        = [h == e]
//   S(g h*)          = g^-1 (g h^-1 g^-1)*
//   R                = sum_g g (x) g*,   g = sum_h g h*,  g* = e g*
#pragma once

#include <compare>
#include <map>
#include <optional>
#include <utility>

#include "qdk/group.hpp"
#include "qdk/linalg.hpp"

namespace qdk {

struct DGBasis {
  Elem g = 0;
  Elem h = 0;
  auto operator<=>(const DGBasis&) const = default;
};

class DGElement {
 public:
  using Terms = std::map<DGBasis, cplx>;

  explicit DGElement(FiniteGroup g) : group_(std::move(g)) {}
  static DGElement basis(const FiniteGroup& g, Elem x, Elem h, cplx c = 1.0);
  static DGElement unit(const FiniteGroup& g);
  static DGElement group_element(const FiniteGroup& g, Elem x);  // sum_h x h*
  static DGElement dual_element(const FiniteGroup& g, Elem h);   // e h*

  const FiniteGroup& group() const { return group_; }
  const Terms& terms() const { return terms_; }
  void add(DGBasis b, cplx c);
  cplx coefficient(DGBasis b) const;

  DGElement operator+(const DGElement& o) const;
  DGElement operator-(const DGElement& o) const;
  DGElement operator*(cplx s) const;
  double max_abs_diff(const DGElement& o) const;

 private:
  FiniteGroup group_;
  Terms terms_;
};

// Exact basis product; nullopt when the delta factor vanishes.
std::optional<DGBasis> basis_product(const FiniteGroup& g, DGBasis a, DGBasis b);

DGElement dg_multiply(const DGElement& a, const DGElement& b);
DGElement antipode(const DGElement& a);
cplx counit(const DGElement& a);

// Elements of D(G) (x) D(G).
class DGTensor {
 public:
  using Key = std::pair<DGBasis, DGBasis>;
  using Terms = std::map<Key, cplx>;

  explicit DGTensor(FiniteGroup g) : group_(std::move(g)) {}
  static DGTensor pure(const DGElement& a, const DGElement& b);
  static DGTensor unit(const FiniteGroup& g);

  const FiniteGroup& group() const { return group_; }
  const Terms& terms() const { return terms_; }
  void add(const Key& k, cplx c);

  DGTensor operator*(const DGTensor& o) const;  // factorwise product
  DGTensor swapped() const;                     // T: a (x) b -> b (x) a
  double max_abs_diff(const DGTensor& o) const;

 private:
  FiniteGroup group_;
  Terms terms_;
};

DGTensor comultiply(const DGElement& a);
DGTensor r_matrix(const FiniteGroup& g);
DGTensor r_matrix_inverse(const FiniteGroup& g);  // (S (x) 1) R

// Regular representation on C[G x G], basis |g, h*> at index g*|G| + h:
//   x y* |g, h*> = [y^g == h] |x g, h*>.
inline std::size_t regular_index(std::size_t order, Elem g, Elem h) { return std::size_t(g) * order + h; }
std::optional<std::size_t> regular_basis_action(const FiniteGroup& g, DGBasis a, std::size_t basis_index);
Vec regular_action(const DGElement& a, const Vec& v);

}  // namespace qdk
