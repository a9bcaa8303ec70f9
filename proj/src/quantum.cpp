#include "qsafe/quantum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "qsafe/error.hpp"

namespace qsafe {

namespace {

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

// omega_n(k) for k in [0, n), from an exact residue so phases never drift
std::vector<Complex> roots_of_unity(std::uint64_t n) {
  std::vector<Complex> w(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    w[k] = Complex(std::cos(angle), std::sin(angle));
  }
  return w;
}

void require_local_dim(int d) {
  if (d < 2) throw Error(ErrorKind::InvalidInput, "local dimension must be at least 2");
  if (d > kMaxQuantumDim) {
    std::ostringstream msg;
    msg << "d = " << d << " gives a " << d << "^" << d << "-dimensional space; limit is d = "
        << kMaxQuantumDim;
    throw Error(ErrorKind::DimensionTooLarge, msg.str());
  }
}

CMatrix hermitise(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace

// ---------------------------------------------------------------------------

IndexCodec::IndexCodec(int d) : d_(d), D_(0) {
  if (d < 1 || d > kMaxFunctionDim) throw Error(ErrorKind::InvalidInput, "codec needs 1 <= d <= 15");
  D_ = ipow(static_cast<std::uint64_t>(d), d);
}

std::uint64_t IndexCodec::encode(std::span<const int> components) const {
  if (components.size() != static_cast<std::size_t>(d_)) {
    throw Error(ErrorKind::DimensionMismatch, "codec needs exactly d components");
  }
  std::uint64_t index = 0;
  for (int i = d_ - 1; i >= 0; --i) {
    const int c = ((components[static_cast<std::size_t>(i)] % d_) + d_) % d_;
    index = index * static_cast<std::uint64_t>(d_) + static_cast<std::uint64_t>(c);
  }
  return index;
}

std::vector<int> IndexCodec::decode(std::uint64_t index) const {
  index %= D_;
  std::vector<int> out(static_cast<std::size_t>(d_));
  for (auto& c : out) {
    c = static_cast<int>(index % static_cast<std::uint64_t>(d_));
    index /= static_cast<std::uint64_t>(d_);
  }
  return out;
}

int IndexCodec::digit(std::uint64_t index, int position) const {
  return static_cast<int>((index / ipow(static_cast<std::uint64_t>(d_), position)) %
                          static_cast<std::uint64_t>(d_));
}

std::uint64_t IndexCodec::product_mod(std::uint64_t a, std::uint64_t b) const {
  // D <= 15^15 < 2^59, so go through 128 bits
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a % D_) * (b % D_)) % D_);
}

std::uint64_t multipartite_dim(int d) {
  require_local_dim(d);
  return ipow(static_cast<std::uint64_t>(d), d);
}

int local_dim_from(std::int64_t D) {
  for (int d = 2; d <= kMaxQuantumDim; ++d) {
    if (static_cast<std::int64_t>(ipow(static_cast<std::uint64_t>(d), d)) == D) return d;
  }
  std::ostringstream msg;
  msg << "dimension " << D << " is not d^d for 2 <= d <= " << kMaxQuantumDim;
  throw Error(ErrorKind::DimensionMismatch, msg.str());
}

// ---------------------------------------------------------------------------

CMatrix fourier_single(int d) {
  if (d < 2) throw Error(ErrorKind::InvalidInput, "Fourier transform needs d >= 2");
  const auto w = roots_of_unity(static_cast<std::uint64_t>(d));
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  CMatrix f(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) f(j, k) = w[static_cast<std::size_t>((j * k) % d)] * scale;
  return f;
}

CMatrix local_fourier(int d) {
  const auto D = static_cast<Eigen::Index>(multipartite_dim(d));
  const IndexCodec codec(d);
  const auto w = roots_of_unity(static_cast<std::uint64_t>(d));
  const double scale = 1.0 / std::sqrt(static_cast<double>(D));
  std::vector<std::vector<int>> digits(static_cast<std::size_t>(D));
  for (Eigen::Index j = 0; j < D; ++j) digits[static_cast<std::size_t>(j)] = codec.decode(static_cast<std::uint64_t>(j));
  CMatrix f(D, D);
  for (Eigen::Index j = 0; j < D; ++j) {
    const auto& jd = digits[static_cast<std::size_t>(j)];
    for (Eigen::Index k = 0; k < D; ++k) {
      const auto& kd = digits[static_cast<std::size_t>(k)];
      int phase = 0;
      for (int i = 0; i < d; ++i) phase = (phase + jd[static_cast<std::size_t>(i)] * kd[static_cast<std::size_t>(i)]) % d;
      f(j, k) = w[static_cast<std::size_t>(phase)] * scale;
    }
  }
  return f;
}

CMatrix global_fourier(int d) {
  const std::uint64_t D = multipartite_dim(d);
  const IndexCodec codec(d);
  const auto w = roots_of_unity(D);
  const double scale = 1.0 / std::sqrt(static_cast<double>(D));
  const auto n = static_cast<Eigen::Index>(D);
  CMatrix f(n, n);
  for (std::uint64_t j = 0; j < D; ++j)
    for (std::uint64_t k = 0; k < D; ++k)
      f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = w[codec.product_mod(j, k)] * scale;
  return f;
}

CMatrix parity_single(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
  CMatrix p = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) p((d - j) % d, j) = 1.0;
  return p;
}

CMatrix parity_multipartite(int d) {
  const auto D = multipartite_dim(d);
  const IndexCodec codec(d);
  const auto n = static_cast<Eigen::Index>(D);
  CMatrix p = CMatrix::Zero(n, n);
  for (std::uint64_t j = 0; j < D; ++j) {
    auto comps = codec.decode(j);
    for (auto& c : comps) c = -c;
    p(static_cast<Eigen::Index>(codec.encode(comps)), static_cast<Eigen::Index>(j)) = 1.0;
  }
  return p;
}

CMatrix projector_local(int i, int j, int d) {
  const auto D = multipartite_dim(d);
  if (i < 0 || i >= d || j < 0 || j >= d) {
    throw Error(ErrorKind::IndexOutOfRange, "projector position and level must lie in [0,d)");
  }
  const IndexCodec codec(d);
  const auto n = static_cast<Eigen::Index>(D);
  CMatrix p = CMatrix::Zero(n, n);
  for (std::uint64_t k = 0; k < D; ++k) {
    if (codec.digit(k, i) == j) p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
  }
  return p;
}

CMatrix projector_function(const FunctionMap& f) {
  const auto D = static_cast<Eigen::Index>(multipartite_dim(f.dim()));
  CMatrix p = CMatrix::Zero(D, D);
  const auto k = static_cast<Eigen::Index>(f.encode());
  p(k, k) = 1.0;
  return p;
}

const char* to_string(FourierMode m) {
  switch (m) {
    case FourierMode::Single: return "single";
    case FourierMode::Local: return "local";
    case FourierMode::Global: return "global";
  }
  return "unknown";
}

const CMatrix& fourier_matrix(FourierMode mode, int d) {
  if (mode == FourierMode::Single) {
    if (d < 2 || d > 64) throw Error(ErrorKind::InvalidInput, "single-qudit d must be in [2,64]");
  } else {
    require_local_dim(d);
  }
  struct Slot {
    std::once_flag once;
    std::unique_ptr<CMatrix> m;
  };
  static std::array<std::array<Slot, 65>, 3> cache;
  Slot& slot = cache[static_cast<std::size_t>(mode)][static_cast<std::size_t>(d)];
  std::call_once(slot.once, [&] {
    switch (mode) {
      case FourierMode::Single: slot.m = std::make_unique<CMatrix>(fourier_single(d)); break;
      case FourierMode::Local: slot.m = std::make_unique<CMatrix>(local_fourier(d)); break;
      case FourierMode::Global: slot.m = std::make_unique<CMatrix>(global_fourier(d)); break;
    }
  });
  return *slot.m;
}

// ---------------------------------------------------------------------------

PureState PureState::validate(CVector amplitudes, double tol) {
  if (amplitudes.size() == 0) throw Error(ErrorKind::InvalidInput, "state has no amplitudes");
  if (!amplitudes.allFinite()) throw Error(ErrorKind::InvalidInput, "amplitude is not finite");
  const double norm2 = amplitudes.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "squared norm " << norm2 << " differs from 1 by more than " << tol;
    throw Error(ErrorKind::NotNormalized, msg.str());
  }
  return PureState(std::move(amplitudes));
}

PureState PureState::normalized(CVector amplitudes) {
  if (amplitudes.size() == 0) throw Error(ErrorKind::InvalidInput, "state has no amplitudes");
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorKind::NotNormalized, "cannot normalise a zero or non-finite vector");
  }
  amplitudes /= norm;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(int dim, std::uint64_t index) {
  if (dim < 1) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
  if (index >= static_cast<std::uint64_t>(dim)) throw Error(ErrorKind::IndexOutOfRange, "basis index outside [0,dim)");
  CVector v = CVector::Zero(dim);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v));
}

PureState PureState::basis(const FunctionMap& f) {
  return basis(static_cast<int>(multipartite_dim(f.dim())), f.encode());
}

std::vector<double> PureState::probabilities() const {
  std::vector<double> p(static_cast<std::size_t>(amps_.size()));
  for (Eigen::Index k = 0; k < amps_.size(); ++k) p[static_cast<std::size_t>(k)] = std::norm(amps_(k));
  return p;
}

PureState random_pure_state(int dim, SeededRng& rng) {
  CVector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(k) = Complex(re, im);
  }
  return PureState::normalized(std::move(v));
}

// ---------------------------------------------------------------------------

DensityMatrix DensityMatrix::validate(const CMatrix& m, DensityOptions opts) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "density matrix must be square and non-empty");
  }
  if (!m.allFinite()) throw Error(ErrorKind::InvalidInput, "density matrix entry is not finite");
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > opts.tol) {
    std::ostringstream msg;
    msg << "max |rho - rho^dagger| = " << asym << " exceeds " << opts.tol;
    throw Error(ErrorKind::NotHermitian, msg.str());
  }
  const Complex tr = m.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > opts.tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "trace " << tr.real() << " differs from 1 by more than " << opts.tol;
    throw Error(ErrorKind::NotNormalized, msg.str());
  }
  CMatrix h = hermitise(m);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  const double lowest = eig.eigenvalues().minCoeff();
  if (lowest < opts.eigen_floor) {
    if (!opts.repair) {
      std::ostringstream msg;
      msg << "eigenvalue " << lowest << " is below " << opts.eigen_floor;
      throw Error(ErrorKind::NotPositive, msg.str());
    }
  }
  if (opts.repair && lowest < 0.0) {
    Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(0.0);
    vals /= vals.sum();
    h = eig.eigenvectors() * vals.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
    h = hermitise(h);
  }
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const CVector& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim < 1) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
  return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::mixture(std::span<const PureState> states,
                                     std::span<const double> weights) {
  if (states.empty() || states.size() != weights.size()) {
    throw Error(ErrorKind::DimensionMismatch, "mixture needs one weight per state");
  }
  const auto w = ProbVector::validate(weights);
  const int dim = states.front().dim();
  CMatrix m = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].dim() != dim) throw Error(ErrorKind::DimensionMismatch, "mixture states differ in dim");
    const CVector& a = states[k].amplitudes();
    m += w[k] * (a * a.adjoint());
  }
  return DensityMatrix(hermitise(m));
}

std::vector<double> DensityMatrix::diagonal() const {
  std::vector<double> p(static_cast<std::size_t>(rho_.rows()));
  for (Eigen::Index k = 0; k < rho_.rows(); ++k) p[static_cast<std::size_t>(k)] = std::max(0.0, rho_(k, k).real());
  return p;
}

DensityMatrix unitary_conjugate(const DensityMatrix& rho, const CMatrix& u) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "unitary and state differ in dimension");
  }
  return DensityMatrix(hermitise(u.adjoint() * rho.matrix() * u));
}

DensityMatrix reduced_density(const DensityMatrix& rho, int i) {
  const int d = local_dim_from(rho.dim());
  if (i < 0 || i >= d) throw Error(ErrorKind::IndexOutOfRange, "component outside [0,d)");
  const IndexCodec codec(d);
  const std::uint64_t stride = ipow(static_cast<std::uint64_t>(d), i);
  CMatrix out = CMatrix::Zero(d, d);
  for (std::uint64_t r = 0; r < codec.size(); ++r) {
    if (codec.digit(r, i) != 0) continue;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        out(a, b) += rho.matrix()(static_cast<Eigen::Index>(r + static_cast<std::uint64_t>(a) * stride),
                                  static_cast<Eigen::Index>(r + static_cast<std::uint64_t>(b) * stride));
  }
  return DensityMatrix(hermitise(out));
}

// ---------------------------------------------------------------------------

GiniSummary gini_summary(std::span<const double> diag, int d) {
  const IndexCodec codec(d);
  if (diag.size() != codec.size()) throw Error(ErrorKind::DimensionMismatch, "diagonal is not d^d long");
  std::vector<double> q(static_cast<std::size_t>(d * d), 0.0);
  std::vector<int> digits(static_cast<std::size_t>(d), 0);
  for (std::size_t k = 0; k < diag.size(); ++k) {
    for (int i = 0; i < d; ++i) q[static_cast<std::size_t>(i * d + digits[static_cast<std::size_t>(i)])] += diag[k];
    for (int i = 0; i < d; ++i) {
      if (++digits[static_cast<std::size_t>(i)] < d) break;
      digits[static_cast<std::size_t>(i)] = 0;
    }
  }
  GiniSummary out;
  for (int i = 0; i < d; ++i) {
    const auto row = std::span<const double>(q).subspan(static_cast<std::size_t>(i * d), static_cast<std::size_t>(d));
    out.local.push_back(gini_index(ProbVector::validate(row)));
  }
  out.total = gini_index(ProbVector::validate(diag));
  return out;
}

StateStats stats_from_diagonal(std::span<const double> diag, int d) {
  auto tensor = MarkovTensor::validate(d, diag);
  auto markov = tensor_to_matrix(tensor);
  auto products = product_probabilities(markov);
  auto correlations = correlation_coefficients(tensor);
  auto gini = local_gini_vector(markov);
  const double total = total_gini(tensor);
  return StateStats{d,         std::move(markov),       std::move(tensor), std::move(products),
                    std::move(correlations), std::move(gini), total};
}

StateStats state_stats(const DensityMatrix& rho) {
  return stats_from_diagonal(rho.diagonal(), local_dim_from(rho.dim()));
}

StateStats state_stats(const PureState& psi) {
  return stats_from_diagonal(psi.probabilities(), local_dim_from(psi.dim()));
}

void apply_local_left(CMatrix& m, const CMatrix& u, int d, int position) {
  const IndexCodec codec(d);
  if (m.rows() != static_cast<Eigen::Index>(codec.size())) {
    throw Error(ErrorKind::DimensionMismatch, "operand is not d^d rows tall");
  }
  if (u.rows() != d || u.cols() != d) throw Error(ErrorKind::DimensionMismatch, "local operator is not d x d");
  if (position < 0 || position >= d) throw Error(ErrorKind::IndexOutOfRange, "position outside [0,d)");
  const auto stride = static_cast<Eigen::Index>(ipow(static_cast<std::uint64_t>(d), position));
  CVector in(d);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (std::uint64_t r = 0; r < codec.size(); ++r) {
      if (codec.digit(r, position) != 0) continue;
      const auto base = static_cast<Eigen::Index>(r);
      for (int a = 0; a < d; ++a) in(a) = m(base + a * stride, c);
      for (int b = 0; b < d; ++b) {
        Complex acc = 0.0;
        for (int a = 0; a < d; ++a) acc += u(b, a) * in(a);
        m(base + b * stride, c) = acc;
      }
    }
  }
}

namespace {

// F_L^dagger m, one tensor factor at a time
CMatrix local_dual_left(CMatrix m, int d) {
  const CMatrix fdag = fourier_matrix(FourierMode::Single, d).adjoint();
  for (int i = 0; i < d; ++i) apply_local_left(m, fdag, d, i);
  return m;
}

}  // namespace

DensityMatrix dual_state(const DensityMatrix& rho, FourierMode mode) {
  if (mode == FourierMode::Single) {
    return unitary_conjugate(rho, fourier_matrix(FourierMode::Single, rho.dim()));
  }
  const int d = local_dim_from(rho.dim());
  if (mode == FourierMode::Local && d > 4) {
    // F_L^dagger rho F_L = (F_L^dagger (F_L^dagger rho)^dagger)^dagger
    const CMatrix left = local_dual_left(rho.matrix(), d);
    const CMatrix both = local_dual_left(left.adjoint(), d).adjoint();
    return DensityMatrix(hermitise(both));
  }
  return unitary_conjugate(rho, fourier_matrix(mode, d));
}

PureState dual_state(const PureState& psi, FourierMode mode) {
  if (mode == FourierMode::Single) {
    return PureState::normalized(fourier_matrix(FourierMode::Single, psi.dim()).adjoint() * psi.amplitudes());
  }
  const int d = local_dim_from(psi.dim());
  if (mode == FourierMode::Local) {
    CMatrix v = psi.amplitudes();
    return PureState::normalized(local_dual_left(std::move(v), d).col(0));
  }
  return PureState::normalized(fourier_matrix(FourierMode::Global, d).adjoint() * psi.amplitudes());
}

double state_scalar_product(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorKind::DimensionMismatch, "states differ in dimension");
  return scalar_product(state_stats(rho).markov, state_stats(sigma).markov);
}

UncertaintyDeficits uncertainty_deficits(const DensityMatrix& rho) {
  const int d = local_dim_from(rho.dim());
  const double D = static_cast<double>(rho.dim());
  const auto plain = gini_summary(rho.diagonal(), d);
  const auto local = gini_summary(dual_state(rho, FourierMode::Local).diagonal(), d);
  const auto global = gini_summary(dual_state(rho, FourierMode::Global).diagonal(), d);
  UncertaintyDeficits out;
  out.d = d;
  const double component_bound = gini_pair_bound(d);
  for (int i = 0; i < d; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out.local_component.push_back(component_bound - (plain.local[k] + local.local[k]));
    out.global_component.push_back(component_bound - (plain.local[k] + global.local[k]));
  }
  out.local_total = gini_pair_bound(D) - (plain.total + local.total);
  out.global_total = gini_pair_bound(D) - (plain.total + global.total);
  return out;
}

}  // namespace qsafe
