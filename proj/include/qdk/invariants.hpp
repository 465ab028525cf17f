// Link invariants from trace and plat closures of braid representations.
//
//   trace: L(w) = tr tau(w) / (d <h>^e(w)),  d = dim Lambda, <h> the flux scalar
//   plat:  Pl(w) = <alpha| tau(w) |alpha>,   alpha a product of vacuum pair states
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdk/braid.hpp"
#include "qdk/fourier.hpp"

namespace qdk {

enum class ClosureKind { trace, plat };

struct SamplingInfo {
  double epsilon = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  // The Chernoff guarantee is on this mean of per-sample values in the unit disc;
  // value = scale * mean.
  cplx mean = 0;
  double scale = 1;
};

struct InvariantValue {
  cplx value = 0;
  ClosureKind kind = ClosureKind::trace;
  std::string label;
  std::optional<SamplingInfo> sampling;  // empty for exact values

  bool exact() const { return !sampling; }
};

// Dense limit on dim(Lambda)^n for exact evaluation.
inline constexpr std::size_t kExactStateLimit = 1000000;

// Smallest integer k with k > 32 ln 2 / eps^2.
std::size_t chernoff_sample_count(double epsilon);

// ---------------------------------------------------------------- trace closure

// tr tau(w) on V_Lambda^{(x) n}, by following fluxes along each strand.
cplx braid_trace(const QuantumDouble& qd, const DGIrrepLabel& l, const BraidWord& w);
InvariantValue trace_closure(const QuantumDouble& qd, const DGIrrepLabel& l, const BraidWord& w);

// Diagonal entry <v|tau(w)|v> of a basis tuple of V_Lambda^{(x) n}, evaluated in the
// regular representation on the QFT embedding of each strand.
cplx embedded_diagonal(const DGQft& qft, const DGIrrepLabel& l, const BraidWord& w,
                       const BasisTuple& v);
// Monte Carlo over uniform basis tuples; per-sample values are embedded_diagonal.
InvariantValue trace_closure_sampled(const DGQft& qft, const DGIrrepLabel& l, const BraidWord& w,
                                     double epsilon, std::uint64_t seed, unsigned threads = 1);

struct MarkovValue {
  cplx value = 0;
  bool normalizable = true;  // false when z == 0; value is then phi itself
};
// (z zbar)^{-(n-1)/2} (zbar/z)^{e/2} phi, with phi the trace normalized to 1 on the identity.
MarkovValue markov_trace_normalize(const BraidWord& w, cplx phi, cplx z);
// phi(w) = tr tau(w) / d^n and z = phi(s_1 in B_2).
cplx normalized_trace(const QuantumDouble& qd, const DGIrrepLabel& l, const BraidWord& w);
cplx markov_parameter(const QuantumDouble& qd, const DGIrrepLabel& l);

// ---------------------------------------------------------------- plat closure

// Normalized vacuum vector of V_first (x) V_second; throws unless second is the conjugate of first.
Vec vacuum_state(const QuantumDouble& qd, const DGIrrepLabel& first, const DGIrrepLabel& second);
// vacuum_state(l, l); requires a self-dual label.
Vec pair_state(const QuantumDouble& qd, const DGIrrepLabel& l);
StateVector plat_state(const QuantumDouble& qd, const DGIrrepLabel& l, std::size_t pairs);
// |S|^{-1/2} sum_g |g, g^-1> per pair, over an inverse-closed flux set.
StateVector plat_state(const FluxSet& flux, std::size_t pairs);

InvariantValue plat_closure(const QuantumDouble& qd, const DGIrrepLabel& l, const BraidWord& w);
InvariantValue plat_closure(const FluxSet& flux, const BraidWord& w);
// Number of cap colorings x in S^n whose image under the braid is again a cap coloring.
std::uint64_t plat_fixed_caps(const FluxSet& flux, const BraidWord& w, unsigned threads = 1);
// Indicator estimator: uniform cap coloring in, score 1 if the output is a cap coloring.
InvariantValue plat_closure_fluxon_mc(const FluxSet& flux, const BraidWord& w, double epsilon,
                                      std::uint64_t seed, unsigned threads = 1);

std::vector<BraidWord> hilden_generators(int strands);

// Pl(s_{2n} iota(w)) / Pl(w) for w in B_{2n}, iota the inclusion into B_{2n+2}.
std::optional<cplx> stabilization_ratio(const FluxSet& flux, const BraidWord& w);
std::optional<cplx> stabilization_ratio(const QuantumDouble& qd, const DGIrrepLabel& l,
                                        const BraidWord& w);

}  // namespace qdk
