#include "qsafe/eta_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "qsafe/error.hpp"

namespace qsafe {

namespace {

constexpr double kSimplexTol = 1e-6;
constexpr double kInitialStep = 0.3;

bool is_global(EtaMode m) { return m == EtaMode::GlobalComponent || m == EtaMode::GlobalTotal; }

void check_mode_dim(int d, EtaMode mode) {
  if (d < 2) throw Error(ErrorKind::InvalidInput, "d must be at least 2");
  if (is_global(mode) && d > 4) {
    throw Error(ErrorKind::DimensionTooLarge, "global modes are limited to d <= 4");
  }
  if (mode != EtaMode::Single) multipartite_dim(d);
}

double gini_of(std::span<const double> p) { return gini_index(ProbVector::validate(p, 1e-8)); }

double combine(const std::vector<double>& plain, const std::vector<double>& dual, int d,
               EtaMode mode) {
  if (mode == EtaMode::Single) return gini_of(plain) + gini_of(dual);
  const auto a = gini_summary(plain, d);
  const auto b = gini_summary(dual, d);
  if (mode == EtaMode::LocalTotal || mode == EtaMode::GlobalTotal) return a.total + b.total;
  double best = 0.0;
  for (std::size_t i = 0; i < a.local.size(); ++i) best = std::max(best, a.local[i] + b.local[i]);
  return best;
}

FourierMode fourier_for(EtaMode mode) {
  switch (mode) {
    case EtaMode::Single: return FourierMode::Single;
    case EtaMode::LocalTotal:
    case EtaMode::LocalComponent: return FourierMode::Local;
    default: return FourierMode::Global;
  }
}

void check_state_dim(int dim, int d, EtaMode mode) {
  if (dim != state_dim(d, mode)) {
    throw Error(ErrorKind::DimensionMismatch, "state dimension does not match d and mode");
  }
}

struct StartResult {
  double best = -1.0;
  std::vector<double> best_params;
  std::uint64_t evaluations = 0;
};

// Nelder-Mead maximising f, with the dimension-adaptive coefficients of
// Gao and Han. Stops when the simplex extent falls below kSimplexTol or the
// evaluation allowance runs out; the best evaluated point is kept.
template <typename F>
StartResult nelder_mead_max(F&& f, std::vector<double> x0, std::uint64_t allowance) {
  StartResult out;
  const std::size_t n = x0.size();
  auto eval = [&](const std::vector<double>& x, double& value) {
    if (out.evaluations >= allowance) return false;
    ++out.evaluations;
    value = -f(x);
    if (-value > out.best) {
      out.best = -value;
      out.best_params = x;
    }
    return true;
  };

  const double nd = static_cast<double>(std::max<std::size_t>(n, 1));
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / nd;
  const double gamma = 0.75 - 1.0 / (2.0 * nd);
  const double delta = 1.0 - 1.0 / nd;

  std::vector<std::vector<double>> xs{x0};
  std::vector<double> fs(1);
  if (!eval(x0, fs[0])) return out;
  for (std::size_t k = 0; k < n; ++k) {
    auto x = x0;
    x[k] += kInitialStep;
    double v = 0.0;
    if (!eval(x, v)) return out;
    xs.push_back(std::move(x));
    fs.push_back(v);
  }

  std::vector<std::size_t> order(n + 1);
  auto affine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    // a + t (b - a)
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = a[k] + t * (b[k] - a[k]);
    return r;
  };

  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    {
      std::vector<std::vector<double>> xs2;
      std::vector<double> fs2;
      for (auto k : order) {
        xs2.push_back(std::move(xs[k]));
        fs2.push_back(fs[k]);
      }
      xs = std::move(xs2);
      fs = std::move(fs2);
    }

    double extent = 0.0;
    for (std::size_t v = 1; v <= n; ++v)
      for (std::size_t k = 0; k < n; ++k) extent = std::max(extent, std::abs(xs[v][k] - xs[0][k]));
    if (extent < kSimplexTol) break;

    std::vector<double> c(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t k = 0; k < n; ++k) c[k] += xs[v][k] / nd;

    const auto& worst = xs[n];
    const auto xr = affine(c, worst, -alpha);
    double fr = 0.0;
    if (!eval(xr, fr)) break;

    if (fr < fs[0]) {
      const auto xe = affine(c, xr, beta);
      double fe = 0.0;
      if (!eval(xe, fe)) break;
      if (fe < fr) {
        xs[n] = xe;
        fs[n] = fe;
      } else {
        xs[n] = xr;
        fs[n] = fr;
      }
      continue;
    }
    if (fr < fs[n - 1]) {
      xs[n] = xr;
      fs[n] = fr;
      continue;
    }

    bool accepted = false;
    if (fr < fs[n]) {
      const auto xoc = affine(c, xr, gamma);
      double foc = 0.0;
      if (!eval(xoc, foc)) break;
      if (foc <= fr) {
        xs[n] = xoc;
        fs[n] = foc;
        accepted = true;
      }
    } else {
      const auto xic = affine(c, worst, gamma);
      double fic = 0.0;
      if (!eval(xic, fic)) break;
      if (fic < fs[n]) {
        xs[n] = xic;
        fs[n] = fic;
        accepted = true;
      }
    }
    if (accepted) continue;

    bool exhausted = false;
    for (std::size_t v = 1; v <= n; ++v) {
      xs[v] = affine(xs[0], xs[v], delta);
      if (!eval(xs[v], fs[v])) {
        exhausted = true;
        break;
      }
    }
    if (exhausted) break;
  }
  return out;
}

template <typename Body>
void parallel_for(std::uint64_t count, unsigned threads, Body&& body) {
  threads = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, count)));
  auto work = [&](unsigned worker) {
    for (std::uint64_t k = worker; k < count; k += threads) body(k);
  };
  if (threads <= 1) {
    work(0);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  for (auto& t : pool) t.join();
}

}  // namespace

const char* to_string(EtaMode m) {
  switch (m) {
    case EtaMode::Single: return "single";
    case EtaMode::LocalTotal: return "local_total";
    case EtaMode::LocalComponent: return "local_component";
    case EtaMode::GlobalComponent: return "global_component";
    case EtaMode::GlobalTotal: return "global_total";
  }
  return "unknown";
}

EtaMode parse_eta_mode(std::string_view name) {
  for (auto m : {EtaMode::Single, EtaMode::LocalTotal, EtaMode::LocalComponent,
                 EtaMode::GlobalComponent, EtaMode::GlobalTotal}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorKind::InvalidInput, "unknown eta mode '" + std::string(name) + "'");
}

int state_dim(int d, EtaMode mode) {
  if (mode == EtaMode::Single) return d;
  return static_cast<int>(multipartite_dim(d));
}

double eta_bound(int d, EtaMode mode) {
  if (mode == EtaMode::LocalTotal || mode == EtaMode::GlobalTotal) {
    return gini_pair_bound(static_cast<double>(state_dim(d, mode)));
  }
  return gini_pair_bound(static_cast<double>(d));
}

double objective(const PureState& psi, int d, EtaMode mode) {
  check_mode_dim(d, mode);
  check_state_dim(psi.dim(), d, mode);
  const auto dual = dual_state(psi, fourier_for(mode));
  return combine(psi.probabilities(), dual.probabilities(), d, mode);
}

double objective(const DensityMatrix& rho, int d, EtaMode mode) {
  check_mode_dim(d, mode);
  check_state_dim(rho.dim(), d, mode);
  const auto dual = dual_state(rho, fourier_for(mode));
  return combine(rho.diagonal(), dual.diagonal(), d, mode);
}

double deficit_of(const PureState& psi, int d, EtaMode mode) {
  return eta_bound(d, mode) - objective(psi, d, mode);
}

PureState state_from_params(std::span<const double> params, int dim) {
  if (dim < 1 || params.size() != static_cast<std::size_t>(2 * dim - 2)) {
    throw Error(ErrorKind::DimensionMismatch, "need 2 dim - 2 parameters");
  }
  const auto m = static_cast<std::size_t>(dim - 1);
  CVector v(dim);
  double tail = 1.0;  // product of sines so far
  for (int k = 0; k < dim; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double r = (ku < m) ? tail * std::cos(params[ku]) : tail;
    if (ku < m) tail *= std::sin(params[ku]);
    const double phase = (k == 0) ? 0.0 : params[m + ku - 1];
    v(k) = std::polar(1.0, phase) * r;
  }
  return PureState::normalized(std::move(v));
}

std::vector<double> params_from_state(const PureState& psi) {
  const int dim = psi.dim();
  const auto m = static_cast<std::size_t>(dim - 1);
  std::vector<double> params(2 * m, 0.0);
  const CVector& a = psi.amplitudes();
  // remove the global phase so amplitude 0 is real and non-negative
  const double phase0 = std::abs(a(0)) > 0.0 ? std::arg(a(0)) : 0.0;
  std::vector<double> tail(static_cast<std::size_t>(dim) + 1, 0.0);
  for (int k = dim - 1; k >= 0; --k) tail[static_cast<std::size_t>(k)] = tail[static_cast<std::size_t>(k) + 1] + std::norm(a(k));
  for (std::size_t k = 0; k < m; ++k) {
    params[k] = std::atan2(std::sqrt(tail[k + 1]), std::abs(a(static_cast<Eigen::Index>(k))));
    params[m + k] = std::arg(a(static_cast<Eigen::Index>(k) + 1)) - phase0;
  }
  return params;
}

EtaEstimate estimate_eta(int d, EtaMode mode, std::uint64_t budget, const SeededRng& rng,
                         const EtaOptions& opts) {
  check_mode_dim(d, mode);
  if (budget == 0) throw Error(ErrorKind::InvalidInput, "budget must be at least 1");
  const int dim = state_dim(d, mode);
  const std::uint64_t nparams = 2 * static_cast<std::uint64_t>(dim) - 2;
  const std::uint64_t slot = opts.evals_per_start > 0 ? opts.evals_per_start : 200 * (nparams + 1);
  const std::uint64_t starts = (budget + slot - 1) / slot;
  if (opts.initial_state) check_state_dim(opts.initial_state->dim(), d, mode);

  std::vector<StartResult> results(starts);
  parallel_for(starts, opts.threads, [&](std::uint64_t s) {
    SeededRng sub = rng.substream(s);
    const PureState start = (s == 0 && opts.initial_state) ? *opts.initial_state : random_pure_state(dim, sub);
    const std::uint64_t allowance = std::min(slot, budget - s * slot);
    auto f = [&](const std::vector<double>& x) { return objective(state_from_params(x, dim), d, mode); };
    results[s] = nelder_mead_max(f, params_from_state(start), allowance);
  });

  EtaEstimate est;
  est.d = d;
  est.mode = mode;
  est.bound = eta_bound(d, mode);
  est.starts = starts;
  std::size_t winner = 0;
  double best = -1.0;
  for (std::size_t s = 0; s < results.size(); ++s) {
    est.evaluations += results[s].evaluations;
    if (results[s].best > best) {
      best = results[s].best;
      winner = s;
    }
    est.best_by_start.push_back(best);
  }
  est.best_sum = best;
  est.eta_upper = est.bound - best;
  est.best_state = state_from_params(results[winner].best_params, dim);
  return est;
}

DeficitSweep deficit_sweep(int d, EtaMode mode, std::uint64_t n, const SeededRng& rng,
                           std::span<const PureState> included, unsigned threads) {
  check_mode_dim(d, mode);
  const int dim = state_dim(d, mode);
  const std::uint64_t total = included.size() + n;
  if (total == 0) throw Error(ErrorKind::InvalidInput, "sweep needs at least one state");
  std::vector<double> deficits(total);
  parallel_for(total, threads, [&](std::uint64_t k) {
    if (k < included.size()) {
      deficits[k] = deficit_of(included[k], d, mode);
      return;
    }
    SeededRng sub = rng.substream(k - included.size());
    deficits[k] = deficit_of(random_pure_state(dim, sub), d, mode);
  });
  const auto it = std::min_element(deficits.begin(), deficits.end());
  return DeficitSweep{*it, static_cast<std::uint64_t>(it - deficits.begin()), total};
}

}  // namespace qsafe
