#include <algorithm>
#include <map>

#include "qdk/group.hpp"

namespace qdk {

namespace {

// Cycles of p (fixed points included), each starting at its smallest point,
// listed by increasing smallest point.
std::vector<std::vector<int>> cycles_of(const Perm& p) {
  std::vector<std::uint8_t> seen(p.size(), 0);
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::vector<int> c;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = 1;
      c.push_back(int(j));
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

// The centralizer of sigma is a product of wreath products Z_k wr S_{c_k}. The
// coset pi*Z(sigma) is determined by tau = pi sigma pi^-1, so the representative
// is read off tau's cycle structure through the chain
//   S_n > prod_k S_{k c_k} > prod_k (S_k^{c_k} x| S_{c_k}) > prod_k Z_k wr S_{c_k}:
//   1. which points carry k-cycles of tau (a set of size k*c_k per length k),
//   2. how that set splits into c_k blocks of size k (blocks sorted by smallest point),
//   3. which block receives which cycle of sigma (sorted order matched to sorted order),
//   4. the rotation inside each block (smallest point matched to smallest point).
PermFactor sn_coset_factorize(const Perm& sigma, const Perm& pi) {
  if (sigma.size() != pi.size()) throw GroupError("sn_coset_factorize: degree mismatch");
  const Perm tau = perm_compose(perm_compose(pi, sigma), perm_inverse(pi));

  std::map<std::size_t, std::vector<std::vector<int>>> source_blocks;  // stage 1 for sigma
  for (auto& c : cycles_of(sigma)) source_blocks[c.size()].push_back(std::move(c));
  std::map<std::size_t, std::vector<std::vector<int>>> target_blocks;  // stages 1-2 for tau
  for (auto& c : cycles_of(tau)) target_blocks[c.size()].push_back(std::move(c));

  Perm t(sigma.size());
  for (const auto& [len, src] : source_blocks) {
    const auto& dst = target_blocks.at(len);
    for (std::size_t j = 0; j < src.size(); ++j)     // stage 3
      for (std::size_t m = 0; m < len; ++m)          // stage 4
        t[std::size_t(src[j][m])] = std::uint8_t(dst[j][m]);
  }
  Perm z = perm_compose(perm_inverse(t), pi);
  return {std::move(t), std::move(z)};
}

}  // namespace qdk
