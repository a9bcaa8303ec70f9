#pragma once

#include <array>
#include <vector>

#include "qsafe/markov.hpp"
#include "qsafe/quantum.hpp"

// Worked examples with closed forms: a 3x3 row Markov matrix with two
// parameters, a pair of two-qubit states, and a pair of three-qutrit states.
// The *_formula functions return the expressions exactly as published so
// callers can compare them with what the library computes.
namespace qsafe::reference {

// rows (a, 1-a, 0), (0, a, 1-a), (0, 1-b, b)
RowMarkovMatrix ab1_matrix(double a, double b);
// weight a at (0,1,2), b-a at (1,2,2), 1-b at (1,2,1); needs 0 <= a <= b <= 1
MarkovTensor kk_tensor(double a, double b);
// 0 <= 2a <= b <= 1/2
bool in_ab11_region(double a, double b);

struct Table1Row {
  FunctionMap f;
  double product;      // M_q(f)
  double joint;        // q(f) of the correlated expansion
  double correlation;  // C_q(f)
};
// the eight rows with non-zero product probability, in published order
std::vector<Table1Row> table1_formulas(double a, double b);

double ab1_self_product_formula(double a, double b);
std::vector<double> ab1_gini_vector_formula(double a, double b);
double kk_total_gini_formula(double a, double b);

// ---- two qubits ----------------------------------------------------------

// Kets are written with component 0 in the rightmost slot: |s_{d-1}, ..., s_0>.
std::uint64_t ket_index(int d, std::vector<int> slots);

struct QubitPairParams {
  double a2 = 0.0;  // |a|^2, |b|^2 = 1 - |a|^2
  double c2 = 0.0;
  double d2 = 0.0;
  double e2 = 0.0;  // |e|^2 = 1 - |c|^2 - |d|^2 expected
  // phases of a, b, c, d, e
  std::array<double, 5> phases{};
};

// a|0,0> + b|1,1>
PureState state_u(const QubitPairParams& p);
// c|0,0> + d|1,0> + e|0,1>
PureState state_v(const QubitPairParams& p);

RowMarkovMatrix q_rho_formula(const QubitPairParams& p);
RowMarkovMatrix q_sigma_formula(const QubitPairParams& p);

struct Table2Row {
  FunctionMap f;
  double q_rho, m_rho, c_rho;
  double q_sigma, m_sigma, c_sigma;
};
// (0,0), (0,1), (1,0), (1,1) as published
std::vector<Table2Row> table2_formulas(const QubitPairParams& p);

std::vector<double> gini_rho_formula(const QubitPairParams& p);
std::vector<double> gini_sigma_formula(const QubitPairParams& p);
double total_gini_rho_formula(const QubitPairParams& p);
// published (3 - 2|e|^2 - |d|^2)/5
double total_gini_sigma_formula(const QubitPairParams& p);
// what the Lorenz sum gives for the sorted joint vector (0, |e|^2, |d|^2, |c|^2)
double total_gini_sigma_recomputed(const QubitPairParams& p);

double sp_rho_sigma_formula(const QubitPairParams& p);
double sp_rho_rho_formula(const QubitPairParams& p);
double sp_sigma_sigma_formula(const QubitPairParams& p);

// ---- three qutrits -------------------------------------------------------

// (|0,0,0> + |1,1,0> + |2,2,1>) / sqrt 3
PureState state_r();
// equal mixture of the three basis states in state_r
DensityMatrix state_sigma_mixed();

// Published globally dual values for state_r, in published row order.
// Published row r belongs to component d-1-r (the slot order of the kets).
inline constexpr std::array<std::array<double, 3>, 3> kPublishedQhatRho{{
    {0.325, 0.422, 0.253}, {0.394, 0.322, 0.284}, {0.333, 0.333, 0.333}}};
inline constexpr std::array<double, 3> kPublishedGhatRho{0.085, 0.055, 0.0};
inline constexpr double kPublishedGhatTotalRho = 0.430;
inline constexpr double kPublishedTolerance = 5e-4;

inline int published_row_component(int row, int d) { return d - 1 - row; }

}  // namespace qsafe::reference
