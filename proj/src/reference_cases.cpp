#include "qsafe/reference_cases.hpp"

#include <algorithm>
#include <cmath>

#include "qsafe/error.hpp"

namespace qsafe::reference {

namespace {

FunctionMap fm(std::vector<int> images) {
  const int d = static_cast<int>(images.size());
  return FunctionMap(d, std::move(images));
}

double b2_of(const QubitPairParams& p) { return 1.0 - p.a2; }

}  // namespace

RowMarkovMatrix ab1_matrix(double a, double b) {
  return RowMarkovMatrix::from_rows({{a, 1.0 - a, 0.0}, {0.0, a, 1.0 - a}, {0.0, 1.0 - b, b}});
}

MarkovTensor kk_tensor(double a, double b) {
  if (!(0.0 <= a && a <= b && b <= 1.0)) {
    throw Error(ErrorKind::InvalidInput, "expansion weights need 0 <= a <= b <= 1");
  }
  const MarkovTensor::SparseEntry entries[] = {
      {fm({0, 1, 2}).encode(), a}, {fm({1, 2, 2}).encode(), b - a}, {fm({1, 2, 1}).encode(), 1.0 - b}};
  return MarkovTensor::from_sparse(3, entries);
}

bool in_ab11_region(double a, double b) { return 0.0 <= 2.0 * a && 2.0 * a <= b && b <= 0.5; }

std::vector<Table1Row> table1_formulas(double a, double b) {
  const double na = 1.0 - a;
  const double nb = 1.0 - b;
  return {
      {fm({0, 1, 1}), a * a * nb, 0.0, -a * a * nb},
      {fm({0, 1, 2}), a * a * b, a, a - a * a * b},
      {fm({1, 1, 1}), a * na * nb, 0.0, -a * na * nb},
      {fm({1, 1, 2}), a * na * b, 0.0, -a * na * b},
      {fm({0, 2, 1}), a * na * nb, 0.0, -a * na * nb},
      {fm({0, 2, 2}), a * na * b, 0.0, -a * na * b},
      {fm({1, 2, 1}), na * na * nb, nb, nb * (2.0 * a - a * a)},
      {fm({1, 2, 2}), na * na * b, b - a, 2.0 * a * b - a - a * a * b},
  };
}

double ab1_self_product_formula(double a, double b) {
  const double s = 2.0 * a * a - 2.0 * a + 1.0;
  return s * s * (2.0 * b * b - 2.0 * b + 1.0);
}

std::vector<double> ab1_gini_vector_formula(double a, double b) {
  return {(1.0 - a) / 2.0, (1.0 - a) / 2.0, (1.0 - b) / 2.0};
}

double kk_total_gini_formula(double a, double b) { return (13.0 - a - b) / 14.0; }

// ---------------------------------------------------------------------------

std::uint64_t ket_index(int d, std::vector<int> slots) {
  std::reverse(slots.begin(), slots.end());
  std::uint64_t index = 0;
  std::uint64_t place = 1;
  for (int s : slots) {
    if (s < 0 || s >= d) throw Error(ErrorKind::IndexOutOfRange, "ket slot outside [0,d)");
    index += static_cast<std::uint64_t>(s) * place;
    place *= static_cast<std::uint64_t>(d);
  }
  if (slots.size() != static_cast<std::size_t>(d)) throw Error(ErrorKind::DimensionMismatch, "ket needs d slots");
  return index;
}

PureState state_u(const QubitPairParams& p) {
  CVector v = CVector::Zero(4);
  v(static_cast<Eigen::Index>(ket_index(2, {0, 0}))) = std::polar(std::sqrt(p.a2), p.phases[0]);
  v(static_cast<Eigen::Index>(ket_index(2, {1, 1}))) = std::polar(std::sqrt(b2_of(p)), p.phases[1]);
  return PureState::validate(std::move(v), 1e-9);
}

PureState state_v(const QubitPairParams& p) {
  CVector v = CVector::Zero(4);
  v(static_cast<Eigen::Index>(ket_index(2, {0, 0}))) = std::polar(std::sqrt(p.c2), p.phases[2]);
  v(static_cast<Eigen::Index>(ket_index(2, {1, 0}))) = std::polar(std::sqrt(p.d2), p.phases[3]);
  v(static_cast<Eigen::Index>(ket_index(2, {0, 1}))) = std::polar(std::sqrt(p.e2), p.phases[4]);
  return PureState::validate(std::move(v), 1e-9);
}

RowMarkovMatrix q_rho_formula(const QubitPairParams& p) {
  return RowMarkovMatrix::from_rows({{p.a2, b2_of(p)}, {p.a2, b2_of(p)}});
}

RowMarkovMatrix q_sigma_formula(const QubitPairParams& p) {
  return RowMarkovMatrix::from_rows({{p.c2 + p.d2, p.e2}, {p.c2 + p.e2, p.d2}});
}

std::vector<Table2Row> table2_formulas(const QubitPairParams& p) {
  const double a2 = p.a2;
  const double b2 = b2_of(p);
  const double ab = a2 * b2;
  const double c2 = p.c2;
  const double d2 = p.d2;
  const double e2 = p.e2;
  const double ed = e2 * d2;
  return {
      {fm({0, 0}), a2, a2 * a2, ab, c2, c2 + ed, -ed},
      {fm({0, 1}), 0.0, ab, -ab, e2, d2 - ed, e2 - d2 + ed},
      {fm({1, 0}), 0.0, ab, -ab, d2, e2 - ed, d2 - e2 + ed},
      {fm({1, 1}), b2, b2 * b2, ab, 0.0, ed, -ed},
  };
}

std::vector<double> gini_rho_formula(const QubitPairParams& p) {
  const double g = (1.0 - 2.0 * p.a2) / 3.0;
  return {g, g};
}

std::vector<double> gini_sigma_formula(const QubitPairParams& p) {
  return {(1.0 - 2.0 * p.e2) / 3.0, (1.0 - 2.0 * p.d2) / 3.0};
}

double total_gini_rho_formula(const QubitPairParams& p) { return (3.0 - 2.0 * p.a2) / 5.0; }

double total_gini_sigma_formula(const QubitPairParams& p) {
  return (3.0 - 2.0 * p.e2 - p.d2) / 5.0;
}

double total_gini_sigma_recomputed(const QubitPairParams& p) {
  return (3.0 - 4.0 * p.e2 - 2.0 * p.d2) / 5.0;
}

double sp_rho_sigma_formula(const QubitPairParams& p) {
  const double a2 = p.a2;
  const double b2 = b2_of(p);
  const double diff = a2 - b2;
  return a2 * (a2 * p.c2 + b2 - b2 * p.c2) + p.e2 * p.d2 * diff * diff;
}

double sp_rho_rho_formula(const QubitPairParams& p) {
  const double s = p.a2 * p.a2 + b2_of(p) * b2_of(p);
  return s * s;
}

double sp_sigma_sigma_formula(const QubitPairParams& p) {
  const double r0 = p.c2 + p.d2;
  const double r1 = p.c2 + p.e2;
  return (r0 * r0 + p.e2 * p.e2) * (r1 * r1 + p.d2 * p.d2);
}

// ---------------------------------------------------------------------------

PureState state_r() {
  CVector v = CVector::Zero(27);
  const double amp = 1.0 / std::sqrt(3.0);
  for (const auto& slots : {std::vector<int>{0, 0, 0}, {1, 1, 0}, {2, 2, 1}}) {
    v(static_cast<Eigen::Index>(ket_index(3, slots))) = amp;
  }
  return PureState::normalized(std::move(v));
}

DensityMatrix state_sigma_mixed() {
  std::vector<PureState> states;
  for (const auto& slots : {std::vector<int>{0, 0, 0}, {1, 1, 0}, {2, 2, 1}}) {
    states.push_back(PureState::basis(27, ket_index(3, slots)));
  }
  const double w[] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return DensityMatrix::mixture(states, w);
}

}  // namespace qsafe::reference
