#include "qdk/group_irreps.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdk/rng.hpp"

namespace qdk {

namespace {

cplx root_of_unity(long long num, long long den) {
  const double ang = 2.0 * std::numbers::pi * double(((num % den) + den) % den) / double(den);
  return {std::cos(ang), std::sin(ang)};
}

// Left-regular action applied to the columns of e: (L(g) e)[g x] = e[x].
Mat left_shift(const FiniteGroup& g, Elem s, const Mat& e) {
  Mat out(e.rows(), e.cols());
  for (Elem x = 0; x < g.order(); ++x) out.row(g.mul(s, x)) = e.row(x);
  return out;
}

bool lex_less_characters(const GroupIrrep& a, const GroupIrrep& b) {
  if (a.dim != b.dim) return a.dim < b.dim;
  constexpr double tol = 1e-6;
  for (std::size_t x = 0; x < a.images.size(); ++x) {
    const cplx ca = a.character(Elem(x)), cb = b.character(Elem(x));
    if (std::abs(ca.real() - cb.real()) > tol) return ca.real() > cb.real();
    if (std::abs(ca.imag() - cb.imag()) > tol) return ca.imag() > cb.imag();
  }
  return false;
}

}  // namespace

int semidirect_orbit_label(int p, int q, int alpha, int k) {
  k = ((k % p) + p) % p;
  int best = k;
  long long v = k;
  for (int s = 0; s < q; ++s) {
    best = std::min(best, int(v));
    v = v * alpha % p;
  }
  return best;
}

std::vector<GroupIrrep> semidirect_irreps(const FiniteGroup& g) {
  const auto [p, q, alpha] = g.semidirect_params();
  std::vector<int> apow(q);
  apow[0] = 1;
  for (int s = 1; s < q; ++s) apow[s] = int((long long)apow[s - 1] * alpha % p);
  std::vector<GroupIrrep> out;
  for (int j = 0; j < q; ++j) {
    GroupIrrep r{"chi" + std::to_string(j), 1, {}};
    for (Elem x = 0; x < g.order(); ++x) {
      const int b = g.semidirect_pair(x).second;
      r.images.push_back(Mat::Constant(1, 1, root_of_unity((long long)j * b, q)));
    }
    out.push_back(std::move(r));
  }
  std::vector<int> reps;
  for (int k = 1; k < p; ++k)
    if (semidirect_orbit_label(p, q, alpha, k) == k) reps.push_back(k);
  for (int k : reps) {
    GroupIrrep r{"rho" + std::to_string(k), std::size_t(q), {}};
    for (Elem x = 0; x < g.order(); ++x) {
      const auto [a, b] = g.semidirect_pair(x);
      Mat m = Mat::Zero(q, q);
      // rho_k(a,b) = sum_s w_p^{k a alpha^{-s}} |s><s-b|
      for (int s = 0; s < q; ++s) {
        const int col = ((s - b) % q + q) % q;
        const int inv_pow = apow[(q - s) % q];
        m(s, col) = root_of_unity((long long)k * a % p * inv_pow, p);
      }
      r.images.push_back(std::move(m));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<GroupIrrep> semidirect_irreps(int p, int q, int alpha) {
  return semidirect_irreps(FiniteGroup::semidirect(p, q, alpha));
}

std::vector<GroupIrrep> cyclic_irreps(const FiniteGroup& g) {
  const std::size_t n = g.order();
  Elem gen = 0;
  bool found = n == 1;
  for (Elem x = 1; x < n && !found; ++x)
    if (g.element_order(x) == n) {
      gen = x;
      found = true;
    }
  if (!found || !g.is_abelian()) throw GroupError("cyclic_irreps: group is not cyclic");
  std::vector<long long> expo(n, 0);
  Elem cur = 0;
  for (std::size_t m = 0; m < n; ++m) {
    expo[cur] = (long long)m;
    cur = g.mul(cur, gen);
  }
  std::vector<GroupIrrep> out;
  for (std::size_t j = 0; j < n; ++j) {
    GroupIrrep r{"chi" + std::to_string(j), 1, {}};
    r.images.reserve(n);
    for (Elem x = 0; x < n; ++x)
      r.images.push_back(Mat::Constant(1, 1, root_of_unity((long long)j * expo[x], (long long)n)));
    out.push_back(std::move(r));
  }
  return out;
}

static bool is_cyclic(const FiniteGroup& g) {
  if (!g.is_abelian()) return false;
  if (g.order() == 1) return true;
  for (Elem x = 1; x < g.order(); ++x)
    if (g.element_order(x) == g.order()) return true;
  return false;
}

std::vector<GroupIrrep> group_irreps(const FiniteGroup& g) {
  if (g.kind() == GroupKind::semidirect && g.semidirect_params().q > 1) return semidirect_irreps(g);
  if (is_cyclic(g)) return cyclic_irreps(g);
  return numeric_irreps(g);
}

double homomorphism_error(const FiniteGroup& g, const GroupIrrep& rho) {
  double err = 0;
  const Mat id = Mat::Identity(rho.dim, rho.dim);
  for (Elem x = 0; x < g.order(); ++x) {
    err = std::max(err, max_abs(rho(x).adjoint() * rho(x) - id));
    for (Elem y = 0; y < g.order(); ++y) err = std::max(err, max_abs(rho(x) * rho(y) - rho(g.mul(x, y))));
  }
  return err;
}

std::vector<GroupIrrep> numeric_irreps(const FiniteGroup& g, const NumericIrrepOptions& opt) {
  const std::size_t n = g.order();
  if (n > opt.max_order)
    throw CapExceeded("numeric_irreps: group order " + std::to_string(n) + " exceeds cap " +
                      std::to_string(opt.max_order));
  for (int attempt = 0; attempt < opt.attempts; ++attempt) {
    CounterRng rng(opt.seed ^ n, std::uint64_t(attempt));
    // Random element of the right-regular algebra, which commutes with left multiplication.
    Mat a = Mat::Zero(n, n);
    for (Elem s = 0; s < n; ++s) {
      const cplx c{2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
      const Elem sinv = g.inv(s);
      for (Elem x = 0; x < n; ++x) a(g.mul(x, sinv), x) += c;
    }
    const Mat herm = a + a.adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es(herm);
    const Eigen::VectorXd& vals = es.eigenvalues();
    const Mat& vecs = es.eigenvectors();
    const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
    const double same_tol = 1e-9 * scale;

    std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;  // [begin, end)
    bool ok = true;
    Eigen::Index begin = 0;
    for (Eigen::Index i = 1; i <= Eigen::Index(n); ++i) {
      if (i < Eigen::Index(n)) {
        const double gap = vals[i] - vals[i - 1];
        if (gap <= same_tol) continue;
        if (gap < opt.cluster_gap) {
          ok = false;
          break;
        }
      }
      clusters.emplace_back(begin, i);
      begin = i;
    }
    if (!ok) continue;

    std::vector<GroupIrrep> found;
    std::vector<std::size_t> copies;
    for (const auto& [b, e] : clusters) {
      const Mat block = vecs.middleCols(b, e - b);
      GroupIrrep r{"", std::size_t(e - b), {}};
      r.images.reserve(n);
      for (Elem s = 0; s < n; ++s) r.images.push_back(block.adjoint() * left_shift(g, s, block));
      double norm2 = 0;
      for (Elem s = 0; s < n; ++s) norm2 += std::norm(r.character(s));
      if (std::abs(norm2 / double(n) - 1.0) > 1e-6) {
        ok = false;
        break;
      }
      bool matched = false;
      for (std::size_t k = 0; k < found.size() && !matched; ++k) {
        if (found[k].dim != r.dim) continue;
        double diff = 0;
        for (Elem s = 0; s < n; ++s) diff = std::max(diff, std::abs(found[k].character(s) - r.character(s)));
        if (diff < 1e-6) {
          ++copies[k];
          matched = true;
        }
      }
      if (!matched) {
        found.push_back(std::move(r));
        copies.push_back(1);
      }
    }
    if (!ok) continue;
    std::size_t total = 0;
    for (std::size_t k = 0; k < found.size(); ++k) {
      if (copies[k] != found[k].dim) ok = false;
      total += found[k].dim * found[k].dim;
    }
    if (!ok || total != n) continue;
    for (const auto& r : found)
      if (homomorphism_error(g, r) > 1e-8) ok = false;
    if (!ok) continue;
    std::sort(found.begin(), found.end(), lex_less_characters);
    for (std::size_t k = 0; k < found.size(); ++k) found[k].label = "irrep" + std::to_string(k);
    return found;
  }
  throw GroupError("numeric_irreps: eigenvalue clusters not separated after " +
                   std::to_string(opt.attempts) + " attempts");
}

std::vector<double> character_multiplicities(const std::vector<cplx>& chi,
                                             const std::vector<GroupIrrep>& irreps) {
  std::vector<double> out;
  for (const auto& r : irreps) {
    cplx s = 0;
    for (std::size_t x = 0; x < chi.size(); ++x) s += chi[x] * std::conj(r.character(Elem(x)));
    out.push_back(s.real() / double(chi.size()));
  }
  return out;
}

BlockDiagonalization decompose_representation(const std::vector<Mat>& rep,
                                              const std::vector<GroupIrrep>& irreps) {
  const std::size_t order = rep.size();
  const Eigen::Index dim = rep.at(0).rows();
  std::vector<cplx> chi(order);
  for (std::size_t x = 0; x < order; ++x) chi[x] = rep[x].trace();
  const auto mult_real = character_multiplicities(chi, irreps);

  BlockDiagonalization out;
  out.unitary = Mat::Zero(dim, dim);
  Eigen::Index row = 0;
  for (std::size_t s = 0; s < irreps.size(); ++s) {
    const auto m = std::size_t(std::llround(mult_real[s]));
    out.multiplicity.push_back(m);
    if (m == 0) continue;
    const auto& sigma = irreps[s];
    const double scale = double(sigma.dim) / double(order);
    // Transfer operators P_{i0} = (d/|K|) sum_k conj(sigma(k)_{i0}) rep(k).
    std::vector<Mat> transfer(sigma.dim, Mat::Zero(dim, dim));
    for (std::size_t x = 0; x < order; ++x)
      for (std::size_t i = 0; i < sigma.dim; ++i) transfer[i] += std::conj(sigma(Elem(x))(i, 0)) * rep[x];
    for (auto& t : transfer) t *= scale;
    const Mat p00 = (transfer[0] + transfer[0].adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(p00);
    std::vector<Eigen::Index> range;
    for (Eigen::Index i = 0; i < dim; ++i)
      if (es.eigenvalues()[i] > 0.5) range.push_back(i);
    if (range.size() != m)
      throw GroupError("decompose_representation: isotypic range disagrees with character multiplicity");
    for (std::size_t c = 0; c < m; ++c) {
      const Vec w = es.eigenvectors().col(range[c]);
      out.blocks.push_back({s, c, std::size_t(row), sigma.dim});
      for (std::size_t i = 0; i < sigma.dim; ++i) out.unitary.row(row++) = (transfer[i] * w).adjoint();
    }
  }
  if (row != dim) throw GroupError("decompose_representation: irreps do not exhaust the representation");
  return out;
}

BlockDiagonalization restrict_block_diagonalize(const GroupIrrep& rho, const Subgroup& k,
                                                const std::vector<GroupIrrep>& k_irreps) {
  std::vector<Mat> rep;
  rep.reserve(k.order());
  for (Elem x : k.members()) rep.push_back(rho(x));
  return decompose_representation(rep, k_irreps);
}

BlockDiagonalization restrict_block_diagonalize(const GroupIrrep& rho, const Subgroup& k) {
  return restrict_block_diagonalize(rho, k, group_irreps(k.as_group()));
}

}  // namespace qdk
