#include "qsafe/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qsafe/error.hpp"

namespace qsafe {

namespace {

void require_dim(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
  if (d > kMaxFunctionDim) {
    throw Error(ErrorKind::DimensionTooLarge, "d^d does not fit a 64-bit code");
  }
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimensions " << a << " and " << b << " differ";
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

// Walks all d^d digit strings in code order, little-endian.
template <typename Fn>
void for_each_function(int d, Fn&& fn) {
  const std::uint64_t count = function_count(d);
  std::vector<int> digits(static_cast<std::size_t>(d), 0);
  for (std::uint64_t code = 0; code < count; ++code) {
    fn(code, std::span<const int>(digits));
    for (int i = 0; i < d; ++i) {
      auto& digit = digits[static_cast<std::size_t>(i)];
      if (++digit < d) break;
      digit = 0;
    }
  }
}

}  // namespace

std::uint64_t function_count(int d) {
  require_dim(d);
  if (d > kMaxTensorDim) {
    std::ostringstream msg;
    msg << "d = " << d << " exceeds the tensor limit " << kMaxTensorDim;
    throw Error(ErrorKind::DimensionTooLarge, msg.str());
  }
  std::uint64_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::uint64_t>(d);
  return n;
}

FunctionMap::FunctionMap(int d, std::vector<int> images) : d_(d), images_(std::move(images)) {
  require_dim(d);
  if (images_.size() != static_cast<std::size_t>(d)) {
    throw Error(ErrorKind::DimensionMismatch, "function map needs exactly d images");
  }
  for (int v : images_) {
    if (v < 0 || v >= d) throw Error(ErrorKind::IndexOutOfRange, "image outside Z_d");
  }
}

FunctionMap FunctionMap::identity(int d) {
  std::vector<int> images(static_cast<std::size_t>(std::max(d, 0)));
  std::iota(images.begin(), images.end(), 0);
  return FunctionMap(d, std::move(images));
}

FunctionMap FunctionMap::decode(int d, std::uint64_t code) {
  require_dim(d);
  std::uint64_t limit = 1;
  for (int i = 0; i < d; ++i) limit *= static_cast<std::uint64_t>(d);
  if (code >= limit) throw Error(ErrorKind::IndexOutOfRange, "code outside [0, d^d)");
  std::vector<int> images(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    images[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::uint64_t>(d));
    code /= static_cast<std::uint64_t>(d);
  }
  return FunctionMap(d, std::move(images));
}

std::uint64_t FunctionMap::encode() const {
  std::uint64_t code = 0;
  for (int i = d_ - 1; i >= 0; --i) {
    code = code * static_cast<std::uint64_t>(d_) +
           static_cast<std::uint64_t>(images_[static_cast<std::size_t>(i)]);
  }
  return code;
}

bool FunctionMap::is_bijective() const {
  std::vector<bool> seen(static_cast<std::size_t>(d_), false);
  for (int v : images_) {
    if (seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

FunctionMap compose(const FunctionMap& f, const FunctionMap& g) {
  require_same_dim(f.dim(), g.dim(), "compose");
  std::vector<int> images(static_cast<std::size_t>(f.dim()));
  for (int i = 0; i < f.dim(); ++i) images[static_cast<std::size_t>(i)] = f(g(i));
  return FunctionMap(f.dim(), std::move(images));
}

// ---------------------------------------------------------------------------

RowMarkovMatrix RowMarkovMatrix::validate(int d, std::span<const double> row_major, double tol) {
  require_dim(d);
  const auto n = static_cast<std::size_t>(d);
  if (row_major.size() != n * n) {
    throw Error(ErrorKind::DimensionMismatch, "row Markov matrix needs d*d entries");
  }
  std::vector<double> entries;
  entries.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      const auto row = ProbVector::validate(row_major.subspan(i * n, n), tol);
      entries.insert(entries.end(), row.begin(), row.end());
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "row " << i << ": " << e.what();
      throw Error(e.kind(), msg.str());
    }
  }
  return RowMarkovMatrix(d, std::move(entries));
}

RowMarkovMatrix RowMarkovMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                           double tol) {
  const int d = static_cast<int>(rows.size());
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (r.size() != rows.size()) {
      throw Error(ErrorKind::DimensionMismatch, "row Markov matrix must be square");
    }
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return validate(d, flat, tol);
}

RowMarkovMatrix RowMarkovMatrix::identity(int d) {
  return function_to_matrix(FunctionMap::identity(d));
}

RowMarkovMatrix RowMarkovMatrix::uniform(int d) {
  require_dim(d);
  const auto n = static_cast<std::size_t>(d);
  return RowMarkovMatrix(d, std::vector<double>(n * n, 1.0 / static_cast<double>(d)));
}

std::vector<std::vector<double>> RowMarkovMatrix::rows() const {
  std::vector<std::vector<double>> out;
  for (int i = 0; i < d_; ++i) out.emplace_back(row(i).begin(), row(i).end());
  return out;
}

bool RowMarkovMatrix::is_doubly_stochastic(double tol) const {
  for (int j = 0; j < d_; ++j) {
    double col = 0.0;
    for (int i = 0; i < d_; ++i) col += (*this)(i, j);
    if (std::abs(col - 1.0) > tol) return false;
  }
  return true;
}

RowMarkovMatrix multiply(const RowMarkovMatrix& q, const RowMarkovMatrix& p) {
  require_same_dim(q.dim(), p.dim(), "multiply");
  const int d = q.dim();
  std::vector<double> out(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) out[static_cast<std::size_t>(i * d + j)] += q(i, k) * p(k, j);
  return RowMarkovMatrix::validate(d, out);
}

RowMarkovMatrix mix(const RowMarkovMatrix& q1, const RowMarkovMatrix& q2, double lambda) {
  require_same_dim(q1.dim(), q2.dim(), "mix");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorKind::InvalidInput, "mixing weight outside [0,1]");
  }
  std::vector<double> out(q1.entries().size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = lambda * q1.entries()[k] + (1.0 - lambda) * q2.entries()[k];
  }
  return RowMarkovMatrix::validate(q1.dim(), out);
}

double max_abs_diff(const RowMarkovMatrix& q, const RowMarkovMatrix& p) {
  require_same_dim(q.dim(), p.dim(), "max_abs_diff");
  double worst = 0.0;
  for (std::size_t k = 0; k < q.entries().size(); ++k) {
    worst = std::max(worst, std::abs(q.entries()[k] - p.entries()[k]));
  }
  return worst;
}

// ---------------------------------------------------------------------------

MarkovTensor MarkovTensor::validate(int d, std::span<const double> weights, double tol) {
  if (weights.size() != function_count(d)) {
    std::ostringstream msg;
    msg << "Markov tensor for d = " << d << " needs " << function_count(d) << " weights, got "
        << weights.size();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  return MarkovTensor(d, ProbVector::validate(weights, tol));
}

MarkovTensor MarkovTensor::from_sparse(int d, std::span<const SparseEntry> entries, double tol) {
  std::vector<double> dense(function_count(d), 0.0);
  for (const auto& e : entries) {
    if (e.code >= dense.size()) throw Error(ErrorKind::IndexOutOfRange, "code outside [0, d^d)");
    dense[e.code] += e.weight;
  }
  return validate(d, dense, tol);
}

MarkovTensor MarkovTensor::point_mass(const FunctionMap& g) {
  return MarkovTensor(g.dim(), ProbVector::certain(function_count(g.dim()), g.encode()));
}

MarkovTensor MarkovTensor::uniform(int d) {
  return MarkovTensor(d, ProbVector::uniform(function_count(d)));
}

MarkovTensor mix(const MarkovTensor& t1, const MarkovTensor& t2, double lambda) {
  require_same_dim(t1.dim(), t2.dim(), "mix");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorKind::InvalidInput, "mixing weight outside [0,1]");
  }
  std::vector<double> w(t1.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = lambda * t1[k] + (1.0 - lambda) * t2[k];
  return MarkovTensor::validate(t1.dim(), w);
}

double CorrelationTensor::max_abs() const {
  double worst = 0.0;
  for (double c : coeffs) worst = std::max(worst, std::abs(c));
  return worst;
}

// ---------------------------------------------------------------------------

RowMarkovMatrix function_to_matrix(const FunctionMap& f) {
  const int d = f.dim();
  std::vector<double> m(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i * d + f(i))] = 1.0;
  return RowMarkovMatrix::validate(d, m);
}

ProbVector push_forward(const ProbVector& x, const RowMarkovMatrix& q) {
  require_same_dim(static_cast<int>(x.size()), q.dim(), "push_forward");
  const int d = q.dim();
  std::vector<double> out(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out[static_cast<std::size_t>(j)] += x[static_cast<std::size_t>(i)] * q(i, j);
  return ProbVector::validate(out);
}

double scalar_product(const RowMarkovMatrix& q, const RowMarkovMatrix& p) {
  require_same_dim(q.dim(), p.dim(), "scalar_product");
  double prod = 1.0;
  for (int i = 0; i < q.dim(); ++i) {
    double overlap = 0.0;
    for (int j = 0; j < q.dim(); ++j) overlap += q(i, j) * p(i, j);
    prod *= overlap;
  }
  return prod;
}

MarkovTensor product_probabilities(const RowMarkovMatrix& q) {
  const int d = q.dim();
  std::vector<double> w(function_count(d));
  for_each_function(d, [&](std::uint64_t code, std::span<const int> f) {
    double p = 1.0;
    for (int i = 0; i < d; ++i) p *= q(i, f[static_cast<std::size_t>(i)]);
    w[code] = p;
  });
  return MarkovTensor::validate(d, w);
}

RowMarkovMatrix tensor_to_matrix(const MarkovTensor& t) {
  const int d = t.dim();
  std::vector<double> m(static_cast<std::size_t>(d * d), 0.0);
  for_each_function(d, [&](std::uint64_t code, std::span<const int> f) {
    const double w = t[code];
    if (w == 0.0) return;
    for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i * d + f[static_cast<std::size_t>(i)])] += w;
  });
  return RowMarkovMatrix::validate(d, m);
}

CorrelationTensor correlation_coefficients(const MarkovTensor& t) {
  const auto products = product_probabilities(tensor_to_matrix(t));
  CorrelationTensor c{t.dim(), std::vector<double>(t.size())};
  for (std::size_t k = 0; k < t.size(); ++k) c.coeffs[k] = t[k] - products[k];
  return c;
}

double scalar_product_via_tensors(const MarkovTensor& tq, const MarkovTensor& tp) {
  require_same_dim(tq.dim(), tp.dim(), "scalar_product_via_tensors");
  double total = 0.0;
  for (std::size_t k = 0; k < tq.size(); ++k) total += tq[k] * tp[k];
  return total;
}

TensorScalarProduct scalar_product_via_tensors_checked(const MarkovTensor& tq,
                                                       const MarkovTensor& tp, double tol) {
  TensorScalarProduct out;
  out.value = scalar_product_via_tensors(tq, tp);
  out.not_product_form = correlation_coefficients(tq).max_abs() > tol ||
                         correlation_coefficients(tp).max_abs() > tol;
  return out;
}

std::vector<double> local_gini_vector(const RowMarkovMatrix& q) {
  std::vector<double> g(static_cast<std::size_t>(q.dim()));
  for (int i = 0; i < q.dim(); ++i) g[static_cast<std::size_t>(i)] = gini_index(q.row_vector(i));
  return g;
}

double total_gini(const MarkovTensor& t) { return gini_index(t.as_prob_vector()); }

std::vector<ExpansionTerm> expansion_terms(const MarkovTensor& t, double floor) {
  std::vector<ExpansionTerm> terms;
  for (std::uint64_t code = 0; code < t.size(); ++code) {
    if (t[code] >= floor) terms.push_back({FunctionMap::decode(t.dim(), code), t[code]});
  }
  return terms;
}

}  // namespace qsafe
