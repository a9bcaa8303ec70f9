#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qsafe/quantum.hpp"
#include "qsafe/rng.hpp"

namespace qsafe {

// Which Gini sum is maximised.
//   Single          G + G~ of a single qudit (dimension d)
//   LocalTotal      G_T + G~_T
//   LocalComponent  max_i G_i + G~_i
//   GlobalComponent max_i G_i + G^_i
//   GlobalTotal     G_T + G^_T
enum class EtaMode { Single, LocalTotal, LocalComponent, GlobalComponent, GlobalTotal };

const char* to_string(EtaMode m);
// accepts the names above in snake case ("local_total", ...); InvalidInput otherwise
EtaMode parse_eta_mode(std::string_view name);

// Hilbert-space dimension the mode works in: d for Single, d^d otherwise.
int state_dim(int d, EtaMode mode);
// 2(n-1)/(n+1) with n = d for Single and the component modes, d^d for the totals
double eta_bound(int d, EtaMode mode);

double objective(const PureState& psi, int d, EtaMode mode);
double objective(const DensityMatrix& rho, int d, EtaMode mode);

// eta_bound - objective
double deficit_of(const PureState& psi, int d, EtaMode mode);

struct EtaOptions {
  // start 0 begins here instead of at a random state
  std::optional<PureState> initial_state;
  // evaluation slot owned by each start; 0 picks 200 (nparams + 1)
  std::uint64_t evals_per_start = 0;
  unsigned threads = 1;
};

struct EtaEstimate {
  int d = 0;
  EtaMode mode = EtaMode::Single;
  double best_sum = 0.0;
  double bound = 0.0;
  double eta_upper = 0.0;  // bound - best_sum
  PureState best_state;
  std::uint64_t evaluations = 0;
  std::uint64_t starts = 0;
  // best_sum after each start, in start order
  std::vector<double> best_by_start;
};

// Multi-start Nelder-Mead over normalised pure states. Start s draws its
// state from rng.substream(s) and may spend at most evals_per_start
// evaluations; the budget truncates the sequence of slots. A larger budget
// therefore replays every evaluation of a smaller one.
EtaEstimate estimate_eta(int d, EtaMode mode, std::uint64_t budget, const SeededRng& rng,
                         const EtaOptions& opts = {});

struct DeficitSweep {
  double min_deficit = 0.0;
  std::uint64_t argmin = 0;  // index into included states, then random samples
  std::uint64_t samples = 0;
};

// Minimum deficit over the included states followed by n random pure states
// (sample k drawn from rng.substream(k)).
DeficitSweep deficit_sweep(int d, EtaMode mode, std::uint64_t n, const SeededRng& rng,
                           std::span<const PureState> included = {}, unsigned threads = 1);

// Hyperspherical parametrisation used by the search: D-1 angles then D-1
// relative phases (amplitude 0 is real and non-negative).
PureState state_from_params(std::span<const double> params, int dim);
std::vector<double> params_from_state(const PureState& psi);

}  // namespace qsafe
