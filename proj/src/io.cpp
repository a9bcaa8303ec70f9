#include "qsafe/io.hpp"

#include <fstream>
#include <sstream>

#include "qsafe/error.hpp"

namespace qsafe::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be a JSON array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) bad(std::string(what) + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

int int_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    bad(std::string("missing integer field '") + key + "'");
  }
  return j.at(key).get<int>();
}

int infer_tensor_dim(std::size_t n) {
  std::uint64_t p = 1;
  for (int d = 1; d <= kMaxTensorDim; ++d) {
    p = 1;
    for (int k = 0; k < d; ++k) p *= static_cast<std::uint64_t>(d);
    if (p == n) return d;
  }
  std::ostringstream msg;
  msg << "tensor length " << n << " is not d^d for d <= " << kMaxTensorDim;
  throw Error(ErrorKind::DimensionMismatch, msg.str());
}

std::vector<Complex> complex_list(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be a JSON array");
  std::vector<Complex> out;
  for (const auto& z : j) out.push_back(complex_from_json(z));
  return out;
}

}  // namespace

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ProbVector& x) { return Json(std::vector<double>(x.begin(), x.end())); }

Json to_json(const RowMarkovMatrix& q) {
  Json rows = Json::array();
  for (int i = 0; i < q.dim(); ++i) rows.push_back(std::vector<double>(q.row(i).begin(), q.row(i).end()));
  return rows;
}

Json to_json(const MarkovTensor& t) {
  return Json(std::vector<double>(t.weights().begin(), t.weights().end()));
}

Json to_json(const CorrelationTensor& c) { return Json(c.coeffs); }

Json to_json(const FunctionMap& f) {
  Json j;
  j["d"] = f.dim();
  j["images"] = std::vector<int>(f.images().begin(), f.images().end());
  return j;
}

Json to_json(const PureState& psi) {
  Json j;
  j["dim"] = psi.dim();
  Json amps = Json::array();
  for (Eigen::Index k = 0; k < psi.amplitudes().size(); ++k) amps.push_back(to_json(psi.amplitudes()(k)));
  j["amplitudes"] = std::move(amps);
  return j;
}

Json to_json(const DensityMatrix& rho) {
  Json j;
  j["dim"] = rho.dim();
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < rho.matrix().rows(); ++r)
    for (Eigen::Index c = 0; c < rho.matrix().cols(); ++c) entries.push_back(to_json(rho.matrix()(r, c)));
  j["entries"] = std::move(entries);
  return j;
}

Json to_json(const EnsembleSpec& spec) {
  Json j;
  j["kind"] = to_string(spec.kind());
  if (spec.kind() == EnsembleKind::Independent) {
    j["matrix"] = to_json(spec.matrix());
  } else {
    j["d"] = spec.dim();
    j["tensor"] = to_json(spec.tensor());
  }
  return j;
}

Json to_json(const McEstimate& est) {
  Json j;
  j["value"] = est.value;
  j["stderr"] = est.std_error;
  j["n"] = est.n;
  j["seed"] = est.seed;
  return j;
}

ProbVector vector_from_json(const Json& j, double tol) {
  return ProbVector::validate(numbers(j, "probability vector"), tol);
}

RowMarkovMatrix matrix_from_json(const Json& j, double tol) {
  if (!j.is_array() || j.empty()) bad("matrix must be a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) rows.push_back(numbers(r, "matrix row"));
  return RowMarkovMatrix::from_rows(rows, tol);
}

MarkovTensor tensor_from_json(const Json& j, int d, double tol) {
  if (j.is_object()) {
    if (!j.contains("tensor")) bad("tensor object needs a 'tensor' field");
    return tensor_from_json(j.at("tensor"), j.contains("d") ? int_field(j, "d") : d, tol);
  }
  if (!j.is_array() || j.empty()) bad("tensor must be a non-empty array");
  if (j.front().is_object()) {
    if (d <= 0) bad("sparse tensor needs d");
    std::vector<MarkovTensor::SparseEntry> entries;
    for (const auto& e : j) {
      if (!e.is_object() || !e.contains("code") || !e.contains("weight")) {
        bad("sparse tensor entries need 'code' and 'weight'");
      }
      if (!e.at("code").is_number_unsigned() && !e.at("code").is_number_integer()) bad("code must be an integer");
      if (e.at("code").get<std::int64_t>() < 0) throw Error(ErrorKind::IndexOutOfRange, "negative code");
      if (!e.at("weight").is_number()) bad("weight must be a number");
      entries.push_back({e.at("code").get<std::uint64_t>(), e.at("weight").get<double>()});
    }
    return MarkovTensor::from_sparse(d, entries, tol);
  }
  const auto w = numbers(j, "tensor");
  const int inferred = infer_tensor_dim(w.size());
  if (d > 0 && d != inferred) throw Error(ErrorKind::DimensionMismatch, "tensor length does not match d");
  return MarkovTensor::validate(inferred, w, tol);
}

FunctionMap function_from_json(const Json& j) {
  if (j.is_array()) {
    std::vector<int> images = j.get<std::vector<int>>();
    const int d = static_cast<int>(images.size());
    return FunctionMap(d, std::move(images));
  }
  if (!j.is_object() || !j.contains("images")) bad("function map needs 'images'");
  const int d = int_field(j, "d");
  return FunctionMap(d, j.at("images").get<std::vector<int>>());
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  bad("complex numbers are written [re, im]");
}

PureState pure_from_json(const Json& j, double tol) {
  if (!j.is_object()) bad("pure state must be an object");
  if (j.contains("images")) return PureState::basis(function_from_json(j));
  if (!j.contains("amplitudes")) bad("pure state needs 'amplitudes'");
  const auto amps = complex_list(j.at("amplitudes"), "amplitudes");
  if (j.contains("dim") && int_field(j, "dim") != static_cast<int>(amps.size())) {
    throw Error(ErrorKind::DimensionMismatch, "'dim' does not match the amplitude count");
  }
  CVector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t k = 0; k < amps.size(); ++k) v(static_cast<Eigen::Index>(k)) = amps[k];
  return PureState::validate(std::move(v), tol);
}

DensityMatrix state_from_json(const Json& j, DensityOptions opts) {
  if (!j.is_object()) bad("state must be a JSON object");
  if (j.contains("amplitudes") || j.contains("images")) {
    return DensityMatrix::from_pure(pure_from_json(j, opts.tol));
  }
  if (!j.contains("entries")) bad("density matrix needs 'entries'");
  const Json& e = j.at("entries");
  std::vector<Complex> flat;
  if (e.is_array() && !e.empty() && e.front().is_array() && !e.front().empty() &&
      e.front().front().is_array()) {
    for (const auto& row : e) {
      const auto r = complex_list(row, "density row");
      flat.insert(flat.end(), r.begin(), r.end());
    }
  } else {
    flat = complex_list(e, "entries");
  }
  int dim = j.contains("dim") ? int_field(j, "dim") : static_cast<int>(std::lround(std::sqrt(static_cast<double>(flat.size()))));
  if (dim <= 0 || flat.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
    throw Error(ErrorKind::DimensionMismatch, "density entries must number dim^2");
  }
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = flat[static_cast<std::size_t>(r * dim + c)];
  return DensityMatrix::validate(m, opts);
}

EnsembleSpec spec_from_json(const Json& j, double tol) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    bad("ensemble spec needs a 'kind' of \"independent\" or \"correlated\"");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "independent") {
    if (!j.contains("matrix")) bad("independent ensemble needs 'matrix'");
    return EnsembleSpec::independent(matrix_from_json(j.at("matrix"), tol));
  }
  if (kind == "correlated") {
    if (!j.contains("tensor")) bad("correlated ensemble needs 'tensor'");
    return EnsembleSpec::correlated(tensor_from_json(j.at("tensor"), j.contains("d") ? int_field(j, "d") : 0, tol));
  }
  bad("unknown ensemble kind '" + kind + "'");
}

}  // namespace qsafe::io
