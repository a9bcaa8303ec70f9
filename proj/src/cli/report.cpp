#include "cli/report.hpp"

#include <cmath>

#include "qsafe/error.hpp"

namespace qsafe::cli {

namespace {

constexpr double kExact = 1e-12;

class Checks {
 public:
  void add(const std::string& name, double computed, double expected, double tol) {
    io::Json c;
    c["name"] = name;
    c["computed"] = computed;
    c["expected"] = expected;
    c["tol"] = tol;
    const bool ok = std::abs(computed - expected) <= tol;
    c["pass"] = ok;
    all_ &= ok;
    list_.push_back(std::move(c));
  }
  void finish(io::Json& report) {
    report["checks"] = std::move(list_);
    report["pass"] = all_;
  }

 private:
  io::Json list_ = io::Json::array();
  bool all_ = true;
};

std::string label(const FunctionMap& f) {
  std::string s = "(";
  for (int i = 0; i < f.dim(); ++i) {
    if (i) s += ",";
    s += std::to_string(f(i));
  }
  return s + ")";
}

io::Json params_json(const reference::QubitPairParams& p) {
  io::Json j;
  j["a2"] = p.a2;
  j["b2"] = 1.0 - p.a2;
  j["c2"] = p.c2;
  j["d2"] = p.d2;
  j["e2"] = p.e2;
  return j;
}

}  // namespace

io::Json report_table1(double a, double b) {
  const auto q = reference::ab1_matrix(a, b);
  const auto products = product_probabilities(q);
  const auto kk = reference::kk_tensor(a, b);
  const auto corr = correlation_coefficients(kk);
  const auto formulas = reference::table1_formulas(a, b);

  io::Json report;
  report["a"] = a;
  report["b"] = b;
  report["in_ab11_region"] = reference::in_ab11_region(a, b);
  Checks checks;
  io::Json rows = io::Json::array();
  for (std::uint64_t code = 0; code < products.size(); ++code) {
    if (products[code] <= 0.0) continue;
    const auto f = FunctionMap::decode(3, code);
    io::Json row;
    row["f"] = label(f);
    row["code"] = code;
    row["product"] = products[code];
    row["joint"] = kk[code];
    row["correlation"] = corr.coeffs[code];
    rows.push_back(std::move(row));
  }
  std::size_t zero_codes = 0;
  for (std::uint64_t code = 0; code < products.size(); ++code) {
    bool listed = false;
    for (const auto& r : formulas) listed |= r.f.encode() == code;
    if (!listed) {
      ++zero_codes;
      checks.add("product" + label(FunctionMap::decode(3, code)), products[code], 0.0, kExact);
    }
  }
  for (const auto& r : formulas) {
    const auto code = r.f.encode();
    checks.add("product" + label(r.f), products[code], r.product, kExact);
    checks.add("joint" + label(r.f), kk[code], r.joint, kExact);
    checks.add("correlation" + label(r.f), corr.coeffs[code], r.correlation, kExact);
  }
  report["nonzero_rows"] = std::move(rows);
  report["zero_codes"] = zero_codes;
  checks.finish(report);
  return report;
}

io::Json report_table2(const reference::QubitPairParams& p) {
  const auto rho = state_stats(reference::state_u(p));
  const auto sigma = state_stats(reference::state_v(p));
  io::Json report;
  report["params"] = params_json(p);
  Checks checks;
  io::Json rows = io::Json::array();
  for (const auto& r : reference::table2_formulas(p)) {
    const auto code = r.f.encode();
    const std::string f = label(r.f);
    io::Json row;
    row["f"] = f;
    row["q_rho"] = rho.tensor[code];
    row["m_rho"] = rho.products[code];
    row["c_rho"] = rho.correlations.coeffs[code];
    row["q_sigma"] = sigma.tensor[code];
    row["m_sigma"] = sigma.products[code];
    row["c_sigma"] = sigma.correlations.coeffs[code];
    rows.push_back(std::move(row));
    checks.add("q_rho" + f, rho.tensor[code], r.q_rho, kExact);
    checks.add("m_rho" + f, rho.products[code], r.m_rho, kExact);
    checks.add("c_rho" + f, rho.correlations.coeffs[code], r.c_rho, kExact);
    checks.add("q_sigma" + f, sigma.tensor[code], r.q_sigma, kExact);
    checks.add("m_sigma" + f, sigma.products[code], r.m_sigma, kExact);
    checks.add("c_sigma" + f, sigma.correlations.coeffs[code], r.c_sigma, kExact);
  }
  report["rows"] = std::move(rows);
  checks.finish(report);
  return report;
}

io::Json report_section84(const reference::QubitPairParams& p) {
  const auto u = DensityMatrix::from_pure(reference::state_u(p));
  const auto v = DensityMatrix::from_pure(reference::state_v(p));
  const auto rho = state_stats(u);
  const auto sigma = state_stats(v);
  io::Json report;
  report["params"] = params_json(p);
  report["q_rho"] = io::to_json(rho.markov);
  report["q_sigma"] = io::to_json(sigma.markov);
  report["gini_rho"] = rho.gini_vector;
  report["gini_sigma"] = sigma.gini_vector;
  report["total_gini_rho"] = rho.total_gini;
  report["total_gini_sigma"] = sigma.total_gini;
  report["total_gini_sigma_recomputed_formula"] = reference::total_gini_sigma_recomputed(p);
  report["reduced_sigma_1"] = io::to_json(reduced_density(v, 1));

  Checks checks;
  const auto qr = reference::q_rho_formula(p);
  const auto qs = reference::q_sigma_formula(p);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const std::string ij = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      checks.add("q_rho" + ij, rho.markov(i, j), qr(i, j), kExact);
      checks.add("q_sigma" + ij, sigma.markov(i, j), qs(i, j), kExact);
    }
  const auto gr = reference::gini_rho_formula(p);
  const auto gs = reference::gini_sigma_formula(p);
  for (std::size_t i = 0; i < 2; ++i) {
    checks.add("gini_rho_" + std::to_string(i), rho.gini_vector[i], gr[i], kExact);
    checks.add("gini_sigma_" + std::to_string(i), sigma.gini_vector[i], gs[i], kExact);
  }
  checks.add("total_gini_rho", rho.total_gini, reference::total_gini_rho_formula(p), kExact);
  checks.add("total_gini_sigma", sigma.total_gini, reference::total_gini_sigma_formula(p), kExact);
  checks.add("sp_rho_sigma", state_scalar_product(u, v), reference::sp_rho_sigma_formula(p), kExact);
  checks.add("sp_rho_rho", state_scalar_product(u, u), reference::sp_rho_rho_formula(p), kExact);
  checks.add("sp_sigma_sigma", state_scalar_product(v, v), reference::sp_sigma_sigma_formula(p), kExact);
  checks.finish(report);
  return report;
}

io::Json report_section9() {
  const int d = 3;
  const auto rho = DensityMatrix::from_pure(reference::state_r());
  const auto sigma = reference::state_sigma_mixed();
  const auto hat_rho = state_stats(dual_state(rho, FourierMode::Global));
  const auto hat_sigma = state_stats(dual_state(sigma, FourierMode::Global));

  io::Json report;
  report["q_hat_rho"] = io::to_json(hat_rho.markov);
  report["gini_hat_rho"] = hat_rho.gini_vector;
  report["total_gini_hat_rho"] = hat_rho.total_gini;
  report["q_hat_sigma"] = io::to_json(hat_sigma.markov);
  report["gini_hat_sigma"] = hat_sigma.gini_vector;
  report["total_gini_hat_sigma"] = hat_sigma.total_gini;
  report["published_row_order"] = "published row r is component d-1-r";

  Checks checks;
  const double tol = reference::kPublishedTolerance;
  for (int r = 0; r < d; ++r) {
    const int comp = reference::published_row_component(r, d);
    for (int j = 0; j < d; ++j) {
      checks.add("q_hat_rho[row " + std::to_string(r) + "][" + std::to_string(j) + "]",
                 hat_rho.markov(comp, j), reference::kPublishedQhatRho[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)], tol);
    }
    checks.add("gini_hat_rho[row " + std::to_string(r) + "]", hat_rho.gini_vector[static_cast<std::size_t>(comp)],
               reference::kPublishedGhatRho[static_cast<std::size_t>(r)], tol);
  }
  checks.add("total_gini_hat_rho", hat_rho.total_gini, reference::kPublishedGhatTotalRho, tol);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      checks.add("q_hat_sigma[" + std::to_string(i) + "][" + std::to_string(j) + "]", hat_sigma.markov(i, j),
                 1.0 / 3.0, kExact);
    }
    checks.add("gini_hat_sigma[" + std::to_string(i) + "]", hat_sigma.gini_vector[static_cast<std::size_t>(i)], 0.0, kExact);
  }
  checks.add("total_gini_hat_sigma", hat_sigma.total_gini, 0.0, kExact);
  checks.finish(report);
  return report;
}

}  // namespace qsafe::cli
