#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qsafe/markov.hpp"
#include "qsafe/rng.hpp"

namespace qsafe {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Largest local dimension for which d^d-dimensional operators are built.
inline constexpr int kMaxQuantumDim = 5;

inline constexpr double kStateTol = 1e-10;
inline constexpr double kEigenFloor = -1e-8;

// (j_0, ..., j_{d-1}) <-> j_0 + j_1 d + ... + j_{d-1} d^{d-1}, arithmetic mod d^d.
// The same little-endian order labels FunctionMap codes and the tensor
// factors of the d-partite Hilbert space.
class IndexCodec {
 public:
  explicit IndexCodec(int d);

  int d() const noexcept { return d_; }
  std::uint64_t size() const noexcept { return D_; }

  // components are reduced mod d before encoding
  std::uint64_t encode(std::span<const int> components) const;
  std::vector<int> decode(std::uint64_t index) const;
  int digit(std::uint64_t index, int position) const;

  std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) const { return (a + b) % D_; }
  // exact j*k mod d^d
  std::uint64_t product_mod(std::uint64_t a, std::uint64_t b) const;

 private:
  int d_;
  std::uint64_t D_;
};

// d^d for a quantum local dimension; DimensionTooLarge above kMaxQuantumDim.
std::uint64_t multipartite_dim(int d);
// Recovers d from D = d^d (D = 1 is rejected).
int local_dim_from(std::int64_t D);

// F(j,k) = omega_d(jk) / sqrt(d)
CMatrix fourier_single(int d);
// F tensored with itself d times
CMatrix local_fourier(int d);
// omega_D(j^ k^ mod D) / sqrt(D), D = d^d
CMatrix global_fourier(int d);
// |j> -> |-j mod d> (single) and its componentwise version on d^d
CMatrix parity_single(int d);
CMatrix parity_multipartite(int d);

// 1 (x) ... (x) |j><j| (x) ... (x) 1 with the projector at position i
CMatrix projector_local(int i, int j, int d);
// |f><f|
CMatrix projector_function(const FunctionMap& f);

class PureState {
 public:
  // the one-dimensional state (1)
  PureState() : amps_(CVector::Ones(1)) {}
  static PureState validate(CVector amplitudes, double tol = kStateTol);
  // divides by the norm (which must be positive)
  static PureState normalized(CVector amplitudes);
  static PureState basis(int dim, std::uint64_t index);
  // |f(0), ..., f(d-1)> in the d^d space
  static PureState basis(const FunctionMap& f);

  int dim() const noexcept { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const noexcept { return amps_; }
  // |amplitude|^2 per basis index
  std::vector<double> probabilities() const;

 private:
  explicit PureState(CVector a) : amps_(std::move(a)) {}
  CVector amps_;
};

// Unitarily invariant (Haar) random pure state: normalised complex Gaussians.
PureState random_pure_state(int dim, SeededRng& rng);

enum class FourierMode { Single, Local, Global };

const char* to_string(FourierMode m);

struct DensityOptions {
  double tol = kStateTol;
  double eigen_floor = kEigenFloor;
  // clip negative eigenvalues to zero and renormalise instead of failing
  bool repair = false;
};

class DensityMatrix {
 public:
  static DensityMatrix validate(const CMatrix& m, DensityOptions opts = {});
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int dim);
  // sum_k w_k |psi_k><psi_k|; weights must form a probability vector
  static DensityMatrix mixture(std::span<const PureState> states, std::span<const double> weights);

  int dim() const noexcept { return static_cast<int>(rho_.rows()); }
  const CMatrix& matrix() const noexcept { return rho_; }
  // real parts of the diagonal, clamped at zero
  std::vector<double> diagonal() const;

 private:
  explicit DensityMatrix(CMatrix m) : rho_(std::move(m)) {}
  CMatrix rho_;

  friend DensityMatrix unitary_conjugate(const DensityMatrix&, const CMatrix&);
  friend DensityMatrix reduced_density(const DensityMatrix&, int);
  friend DensityMatrix dual_state(const DensityMatrix&, FourierMode);
};

// U^dagger rho U, Hermitised. No eigen-check: U is trusted to be unitary.
DensityMatrix unitary_conjugate(const DensityMatrix& rho, const CMatrix& u);

// Partial trace over every component except i.
DensityMatrix reduced_density(const DensityMatrix& rho, int i);

struct GiniSummary {
  std::vector<double> local;  // Gini of each row of q
  double total = 0.0;         // Gini of the d^d joint probabilities
};

// Gini statistics of a d^d diagonal, without building the tensors.
GiniSummary gini_summary(std::span<const double> diag, int d);

struct StateStats {
  int d = 0;
  RowMarkovMatrix markov;
  MarkovTensor tensor;
  MarkovTensor products;
  CorrelationTensor correlations;
  std::vector<double> gini_vector;
  double total_gini = 0.0;
};

StateStats stats_from_diagonal(std::span<const double> diag, int d);
StateStats state_stats(const DensityMatrix& rho);
StateStats state_stats(const PureState& psi);

// Shared copy of F (Single: dimension d), F_L or F_G. Built once per d and
// safe to call from several threads.
const CMatrix& fourier_matrix(FourierMode mode, int d);

// F^dagger rho F with F matching the mode. Single needs dim = d, the others
// dim = d^d.
DensityMatrix dual_state(const DensityMatrix& rho, FourierMode mode);
PureState dual_state(const PureState& psi, FourierMode mode);

// Left-multiplies m by u acting on tensor factor `position` of (C^d)^{(x)d}.
void apply_local_left(CMatrix& m, const CMatrix& u, int d, int position);

// scalar_product(q_rho, q_sigma)
double state_scalar_product(const DensityMatrix& rho, const DensityMatrix& sigma);

struct UncertaintyDeficits {
  int d = 0;
  std::vector<double> local_component;   // Delta_i, locally dual
  double local_total = 0.0;              // Delta_T
  std::vector<double> global_component;  // D_i, globally dual
  double global_total = 0.0;             // D_T
};

UncertaintyDeficits uncertainty_deficits(const DensityMatrix& rho);

// 2(n-1)/(n+1): the sum of two Gini maxima in dimension n
inline double gini_pair_bound(double n) { return 2.0 * (n - 1.0) / (n + 1.0); }

}  // namespace qsafe
