#include "qsafe/prob_vector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qsafe/error.hpp"

namespace qsafe {

ProbVector ProbVector::validate(std::span<const double> raw, double tol) {
  if (raw.empty()) throw Error(ErrorKind::InvalidInput, "probability vector is empty");
  if (!(tol >= 0.0)) throw Error(ErrorKind::InvalidInput, "tolerance must be non-negative");

  std::vector<double> probs(raw.begin(), raw.end());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double v = probs[i];
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "entry " << i << " is not finite";
      throw Error(ErrorKind::InvalidInput, msg.str());
    }
    if (v < -tol) {
      std::ostringstream msg;
      msg << "entry " << i << " = " << v << " is below -" << tol;
      throw Error(ErrorKind::NegativeEntry, msg.str());
    }
  }
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(sum - 1.0) > tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "entries sum to " << sum << ", expected 1 within " << tol;
    throw Error(ErrorKind::NotNormalized, msg.str());
  }

  for (double& v : probs) v = std::clamp(v, 0.0, 1.0);
  const double clamped_sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  // Sums within summation round-off of 1 are left alone, so validating an
  // already validated vector returns it bit for bit.
  const double noise = 4.0 * static_cast<double>(probs.size()) * std::numeric_limits<double>::epsilon();
  if (std::abs(clamped_sum - 1.0) > noise) {
    for (double& v : probs) v /= clamped_sum;
  }
  return ProbVector(std::move(probs));
}

ProbVector ProbVector::uniform(std::size_t d) {
  if (d == 0) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
  return ProbVector(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

ProbVector ProbVector::certain(std::size_t d, std::size_t at) {
  if (d == 0) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
  if (at >= d) throw Error(ErrorKind::IndexOutOfRange, "certain index outside [0,d)");
  std::vector<double> p(d, 0.0);
  p[at] = 1.0;
  return ProbVector(std::move(p));
}

std::vector<std::size_t> ordering_permutation(std::span<const double> x) {
  std::vector<std::size_t> perm(x.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  return perm;
}

LorenzCurve lorenz_values(const ProbVector& x) {
  const auto perm = ordering_permutation(x.values());
  LorenzCurve curve;
  curve.values.resize(x.size());
  double acc = 0.0;
  for (std::size_t l = 0; l < perm.size(); ++l) {
    acc += x[perm[l]];
    curve.values[l] = acc;
  }
  // validated vectors sum to one; drop the last-ulp residue
  curve.values.back() = 1.0;
  return curve;
}

double gini_index(const ProbVector& x) {
  const auto curve = lorenz_values(x);
  const double d = static_cast<double>(x.size());
  const double total = std::accumulate(curve.values.begin(), curve.values.end(), 0.0);
  const double g = 1.0 - 2.0 / (d + 1.0) * total;
  return std::clamp(g, 0.0, max_gini(x.size()));
}

double gini_mean_abs_diff(const ProbVector& x) {
  const std::size_t d = x.size();
  double total = 0.0;
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t s = 0; s < d; ++s) total += std::abs(x[r] - x[s]);
  }
  return total / (2.0 * (static_cast<double>(d) + 1.0));
}

const char* to_string(Majorization m) {
  switch (m) {
    case Majorization::XMajorizesY: return "X_MAJORIZES_Y";
    case Majorization::YMajorizesX: return "Y_MAJORIZES_X";
    case Majorization::Equal: return "EQUAL";
    case Majorization::Incomparable: return "INCOMPARABLE";
  }
  return "UNKNOWN";
}

Majorization majorizes(const ProbVector& x, const ProbVector& y, double tol) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::DimensionMismatch, "majorization needs vectors of equal length");
  }
  const auto lx = lorenz_values(x).values;
  const auto ly = lorenz_values(y).values;
  bool x_over_y = true;
  bool y_over_x = true;
  for (std::size_t l = 0; l < lx.size(); ++l) {
    if (lx[l] > ly[l] + tol) x_over_y = false;
    if (ly[l] > lx[l] + tol) y_over_x = false;
  }
  if (x_over_y && y_over_x) return Majorization::Equal;
  if (x_over_y) return Majorization::XMajorizesY;
  if (y_over_x) return Majorization::YMajorizesX;
  return Majorization::Incomparable;
}

Interval average_bounds(const ProbVector& x) {
  const double d = static_cast<double>(x.size());
  const double g = gini_index(x);
  const double mid = (d - 1.0) / 2.0;
  const double half_width = (d + 1.0) / 2.0 * g;
  return {mid - half_width, mid + half_width};
}

}  // namespace qsafe
