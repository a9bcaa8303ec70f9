#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qsafe/prob_vector.hpp"

namespace qsafe {

// Largest d for which d^d-sized tensors are materialised (7^7 = 823543).
inline constexpr int kMaxTensorDim = 7;
// Largest d whose d^d still fits the 64-bit code.
inline constexpr int kMaxFunctionDim = 15;

// d^d, checked against kMaxTensorDim.
std::uint64_t function_count(int d);

// A map f: Z_d -> Z_d (permutation with repetitions).
// Canonical code is little-endian base d: sum_i f(i) d^i.
class FunctionMap {
 public:
  FunctionMap(int d, std::vector<int> images);

  static FunctionMap identity(int d);
  static FunctionMap decode(int d, std::uint64_t code);

  int dim() const noexcept { return d_; }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  std::span<const int> images() const noexcept { return images_; }
  std::uint64_t encode() const;
  bool is_bijective() const;

  friend bool operator==(const FunctionMap&, const FunctionMap&) = default;

 private:
  int d_;
  std::vector<int> images_;
};

// (f o g)(i) = f[g(i)]
FunctionMap compose(const FunctionMap& f, const FunctionMap& g);

// d x d matrix whose rows are probability vectors.
class RowMarkovMatrix {
 public:
  static RowMarkovMatrix validate(int d, std::span<const double> row_major,
                                  double tol = kDefaultTol);
  static RowMarkovMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                   double tol = kDefaultTol);
  static RowMarkovMatrix identity(int d);
  // all entries 1/d
  static RowMarkovMatrix uniform(int d);

  int dim() const noexcept { return d_; }
  double operator()(int i, int j) const {
    return entries_[static_cast<std::size_t>(i * d_ + j)];
  }
  std::span<const double> row(int i) const {
    return std::span<const double>(entries_).subspan(static_cast<std::size_t>(i * d_),
                                                     static_cast<std::size_t>(d_));
  }
  ProbVector row_vector(int i) const { return ProbVector::validate(row(i)); }
  std::span<const double> entries() const noexcept { return entries_; }
  std::vector<std::vector<double>> rows() const;

  bool is_doubly_stochastic(double tol = kDefaultTol) const;

 private:
  RowMarkovMatrix(int d, std::vector<double> entries) : d_(d), entries_(std::move(entries)) {}
  int d_;
  std::vector<double> entries_;
};

RowMarkovMatrix multiply(const RowMarkovMatrix& q, const RowMarkovMatrix& p);
// lambda q1 + (1-lambda) q2
RowMarkovMatrix mix(const RowMarkovMatrix& q1, const RowMarkovMatrix& q2, double lambda);
// max_{i,j} |q(i,j) - p(i,j)|
double max_abs_diff(const RowMarkovMatrix& q, const RowMarkovMatrix& p);

// d^d joint probabilities indexed by FunctionMap code.
class MarkovTensor {
 public:
  static MarkovTensor validate(int d, std::span<const double> weights, double tol = kDefaultTol);
  struct SparseEntry {
    std::uint64_t code;
    double weight;
  };
  static MarkovTensor from_sparse(int d, std::span<const SparseEntry> entries,
                                  double tol = kDefaultTol);
  static MarkovTensor point_mass(const FunctionMap& g);
  static MarkovTensor uniform(int d);

  int dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::uint64_t code) const { return weights_[code]; }
  double weight(const FunctionMap& f) const { return weights_[f.encode()]; }
  std::span<const double> weights() const noexcept { return weights_.values(); }
  const ProbVector& as_prob_vector() const noexcept { return weights_; }

 private:
  MarkovTensor(int d, ProbVector w) : d_(d), weights_(std::move(w)) {}
  int d_;
  ProbVector weights_;
};

// lambda t1 + (1-lambda) t2
MarkovTensor mix(const MarkovTensor& t1, const MarkovTensor& t2, double lambda);

// C(f) = q(f) - prod_i q(i, f(i)); sums to zero.
struct CorrelationTensor {
  int d = 0;
  std::vector<double> coeffs;
  double max_abs() const;
};

// M_f(i,j) = delta(f(i), j)
RowMarkovMatrix function_to_matrix(const FunctionMap& f);

// (x q)(j) = sum_i x(i) q(i,j)
ProbVector push_forward(const ProbVector& x, const RowMarkovMatrix& q);

// (q,p) = prod_i sum_j q(i,j) p(i,j)
double scalar_product(const RowMarkovMatrix& q, const RowMarkovMatrix& p);

// Product of probabilities prod_i q(i, f(i)) for every f; the independent
// (uncorrelated) expansion coefficients of q.
MarkovTensor product_probabilities(const RowMarkovMatrix& q);

// q(i,j) = sum_{f: f(i)=j} t[f]
RowMarkovMatrix tensor_to_matrix(const MarkovTensor& t);

CorrelationTensor correlation_coefficients(const MarkovTensor& t);

// sum_f tq[f] tp[f]. Equals scalar_product of the marginals only when both
// tensors are product-form.
double scalar_product_via_tensors(const MarkovTensor& tq, const MarkovTensor& tp);

struct TensorScalarProduct {
  double value = 0.0;
  // set when either tensor has a correlation coefficient above tol
  bool not_product_form = false;
};
TensorScalarProduct scalar_product_via_tensors_checked(const MarkovTensor& tq,
                                                       const MarkovTensor& tp,
                                                       double tol = kDefaultTol);

// Gini index of each row.
std::vector<double> local_gini_vector(const RowMarkovMatrix& q);

// Gini index of the d^d joint probabilities.
double total_gini(const MarkovTensor& t);

struct ExpansionTerm {
  FunctionMap f;
  double weight;
};
// Terms of q = sum_f t[f] M_f with weight >= floor, in code order.
std::vector<ExpansionTerm> expansion_terms(const MarkovTensor& t, double floor = 0.0);

}  // namespace qsafe
