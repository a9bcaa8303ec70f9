#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "qsafe/markov.hpp"
#include "qsafe/quantum.hpp"
#include "qsafe/safe_sim.hpp"

namespace qsafe::io {

using Json = nlohmann::ordered_json;

// Parse errors become Error(InvalidInput).
Json parse(std::string_view text);
Json read_file(const std::string& path);

Json to_json(Complex z);  // [re, im]
Json to_json(const ProbVector& x);
Json to_json(const RowMarkovMatrix& q);  // array of rows
Json to_json(const MarkovTensor& t);     // flat weights in code order
Json to_json(const CorrelationTensor& c);
Json to_json(const FunctionMap& f);  // {d, images}
Json to_json(const PureState& psi);  // {dim, amplitudes}
Json to_json(const DensityMatrix& rho);  // {dim, entries} row-major
Json to_json(const EnsembleSpec& spec);
Json to_json(const McEstimate& est);

ProbVector vector_from_json(const Json& j, double tol = kDefaultTol);
RowMarkovMatrix matrix_from_json(const Json& j, double tol = kDefaultTol);
// Flat array of d^d weights, or a sparse array of {code, weight}; sparse
// input needs d (d <= 0 means infer from a flat array's length).
MarkovTensor tensor_from_json(const Json& j, int d = 0, double tol = kDefaultTol);
FunctionMap function_from_json(const Json& j);
Complex complex_from_json(const Json& j);
PureState pure_from_json(const Json& j, double tol = kStateTol);
// Accepts a density {dim, entries}, a pure state {dim, amplitudes}, or a
// basis state {d, images}.
DensityMatrix state_from_json(const Json& j, DensityOptions opts = {});
EnsembleSpec spec_from_json(const Json& j, double tol = kDefaultTol);

}  // namespace qsafe::io
