#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qsafe {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kMajorizationTol = 1e-12;

// A probability vector: non-negative entries summing to one.
//
// Instances only come out of validate() (or the uniform / certain helpers), so
// holders can rely on the invariant. validate() clamps rounding noise into
// [0,1] and divides by the sum, which keeps file-sourced inputs usable.
class ProbVector {
 public:
  static ProbVector validate(std::span<const double> raw, double tol = kDefaultTol);

  // u = (1/d, ..., 1/d)
  static ProbVector uniform(std::size_t d);
  // c M_pi with the single 1 at `at`
  static ProbVector certain(std::size_t d, std::size_t at = 0);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> values() const noexcept { return probs_; }
  auto begin() const noexcept { return probs_.begin(); }
  auto end() const noexcept { return probs_.end(); }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  explicit ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

// Cumulative sums of the ascending-sorted probabilities; last value is 1.
struct LorenzCurve {
  std::vector<double> values;
};

// Stable ascending order: x[perm[0]] <= x[perm[1]] <= ..., ties by index.
std::vector<std::size_t> ordering_permutation(std::span<const double> x);

LorenzCurve lorenz_values(const ProbVector& x);

// 1 - 2/(d+1) * sum of Lorenz values.
double gini_index(const ProbVector& x);

// Normalised mean absolute difference, sum_{r,s} |x(r)-x(s)| / (2(d+1)).
// Independent of the ordering; kept as a cross-check on gini_index.
double gini_mean_abs_diff(const ProbVector& x);

// Largest Gini value for length d, reached by certain vectors.
inline double max_gini(std::size_t d) {
  return static_cast<double>(d - 1) / static_cast<double>(d + 1);
}

enum class Majorization { XMajorizesY, YMajorizesX, Equal, Incomparable };

const char* to_string(Majorization m);

// x majorizes y ("x is more sparse") when L(l;x) <= L(l;y) for every l.
Majorization majorizes(const ProbVector& x, const ProbVector& y, double tol = kMajorizationTol);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
};

// Range that any relabelled average sum_i perm^{-1}(i) x(i) must fall into.
Interval average_bounds(const ProbVector& x);

}  // namespace qsafe
