#include "cli/run.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "cli/report.hpp"
#include "qsafe/error.hpp"
#include "qsafe/eta_search.hpp"
#include "qsafe/io.hpp"
#include "qsafe/safe_sim.hpp"

namespace qsafe::cli {

namespace {

using io::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string command;
  std::string report_name;
  std::string input_path;
  std::vector<std::string> vectors;
  std::vector<std::string> matrices;
  std::vector<std::string> tensors;
  std::vector<std::string> states;
  int d = 0;
  std::string mode;
  std::uint64_t seed = 0;
  std::uint64_t n = 100000;
  std::uint64_t budget = 10000;
  double tol = kDefaultTol;
  double floor = 0.0;
  unsigned threads = 1;
  std::string format = "json";
  std::string out_path;
  double a = 0.1;
  double b = 0.4;
  double a2 = 0.3;
  double c2 = 0.5;
  double d2 = 0.3;
};

// Everything the command line and --input file supply, already parsed as JSON.
struct Inputs {
  std::vector<Json> vectors, matrices, tensors, states, specs;
  std::optional<Json> bare;  // --input content that is not a keyed object
};

const std::map<std::string, std::vector<Json> Inputs::*>& keyed_fields() {
  static const std::map<std::string, std::vector<Json> Inputs::*> fields{
      {"vector", &Inputs::vectors}, {"vectors", &Inputs::vectors},   {"matrix", &Inputs::matrices},
      {"matrices", &Inputs::matrices}, {"tensor", &Inputs::tensors}, {"tensors", &Inputs::tensors},
      {"state", &Inputs::states},   {"states", &Inputs::states},     {"spec", &Inputs::specs},
      {"specs", &Inputs::specs}};
  return fields;
}

Inputs gather(const Config& cfg) {
  Inputs in;
  if (!cfg.input_path.empty()) {
    Json file = io::read_file(cfg.input_path);
    bool keyed = file.is_object();
    if (keyed) {
      for (const auto& [key, value] : file.items()) {
        if (!keyed_fields().contains(key)) {
          keyed = false;
          break;
        }
      }
    }
    if (keyed) {
      for (const auto& [key, value] : file.items()) {
        auto& list = in.*keyed_fields().at(key);
        const bool plural = key.back() == 's' && key != "matrix";
        if (plural) {
          if (!value.is_array()) throw UsageError("'" + key + "' in --input must be an array");
          for (const auto& v : value) list.push_back(v);
        } else {
          list.push_back(value);
        }
      }
    } else {
      in.bare = std::move(file);
    }
  }
  for (const auto& s : cfg.vectors) in.vectors.push_back(io::parse(s));
  for (const auto& s : cfg.matrices) in.matrices.push_back(io::parse(s));
  for (const auto& s : cfg.tensors) in.tensors.push_back(io::parse(s));
  for (const auto& s : cfg.states) in.states.push_back(io::parse(s));
  return in;
}

// A bare --input counts as one more item of whatever the command needs.
std::vector<Json>& take_bare(Inputs& in, std::vector<Json>& list) {
  if (in.bare) {
    list.insert(list.begin(), *in.bare);
    in.bare.reset();
  }
  return list;
}

const std::vector<Json>& need(Inputs& in, std::vector<Json>& list, std::size_t count,
                              const std::string& what) {
  take_bare(in, list);
  if (list.size() != count) {
    throw UsageError("expected " + std::to_string(count) + " " + what + " input(s), got " +
                     std::to_string(list.size()));
  }
  return list;
}

Json seeded(Json j, const Config& cfg) {
  Json out;
  out["command"] = cfg.command;
  out["seed"] = cfg.seed;
  for (auto& [k, v] : j.items()) out[k] = v;
  return out;
}

Json terms_json(const MarkovTensor& t, double floor) {
  Json terms = Json::array();
  for (const auto& term : expansion_terms(t, floor)) {
    Json row;
    row["f"] = std::vector<int>(term.f.images().begin(), term.f.images().end());
    row["code"] = term.f.encode();
    row["weight"] = term.weight;
    terms.push_back(std::move(row));
  }
  return terms;
}

Json stats_json(const StateStats& s) {
  Json j;
  j["d"] = s.d;
  j["markov"] = io::to_json(s.markov);
  j["tensor"] = io::to_json(s.tensor);
  j["products"] = io::to_json(s.products);
  j["correlations"] = io::to_json(s.correlations);
  j["gini_vector"] = s.gini_vector;
  j["total_gini"] = s.total_gini;
  return j;
}

FourierMode parse_fourier_mode(const std::string& m) {
  if (m == "single") return FourierMode::Single;
  if (m == "local") return FourierMode::Local;
  if (m == "global") return FourierMode::Global;
  throw UsageError("--mode must be single, local or global");
}

std::vector<EnsembleSpec> specs_from(Inputs& in, const Config& cfg) {
  std::vector<EnsembleSpec> specs;
  if (in.bare) {
    if (in.bare->is_object()) {
      in.specs.insert(in.specs.begin(), *in.bare);
    } else {
      in.matrices.insert(in.matrices.begin(), *in.bare);
    }
    in.bare.reset();
  }
  for (const auto& s : in.specs) specs.push_back(io::spec_from_json(s, cfg.tol));
  for (const auto& m : in.matrices) specs.push_back(EnsembleSpec::independent(io::matrix_from_json(m, cfg.tol)));
  for (const auto& t : in.tensors) {
    specs.push_back(EnsembleSpec::correlated(io::tensor_from_json(t, cfg.d, cfg.tol)));
  }
  return specs;
}

// ---------------------------------------------------------------------------

Json cmd_validate(const Config& cfg, Inputs& in) {
  Json objects = Json::array();
  auto record = [&](const char* type, Json value) {
    Json o;
    o["type"] = type;
    o["value"] = std::move(value);
    objects.push_back(std::move(o));
  };
  if (in.bare) {
    const Json bare = *in.bare;
    in.bare.reset();
    if (bare.is_object() && bare.contains("kind")) {
      record("spec", io::to_json(io::spec_from_json(bare, cfg.tol)));
    } else if (bare.is_object()) {
      record("state", io::to_json(io::state_from_json(bare, DensityOptions{})));
    } else if (bare.is_array() && !bare.empty() && bare.front().is_array()) {
      record("matrix", io::to_json(io::matrix_from_json(bare, cfg.tol)));
    } else {
      record("vector", io::to_json(io::vector_from_json(bare, cfg.tol)));
    }
  }
  for (const auto& v : in.vectors) record("vector", io::to_json(io::vector_from_json(v, cfg.tol)));
  for (const auto& m : in.matrices) record("matrix", io::to_json(io::matrix_from_json(m, cfg.tol)));
  for (const auto& t : in.tensors) record("tensor", io::to_json(io::tensor_from_json(t, cfg.d, cfg.tol)));
  for (const auto& s : in.states) record("state", io::to_json(io::state_from_json(s)));
  for (const auto& s : in.specs) record("spec", io::to_json(io::spec_from_json(s, cfg.tol)));
  if (objects.empty()) throw UsageError("nothing to validate");
  Json j;
  j["valid"] = true;
  j["objects"] = std::move(objects);
  return j;
}

Json cmd_lorenz(const Config& cfg, Inputs& in) {
  const auto x = io::vector_from_json(need(in, in.vectors, 1, "vector").front(), cfg.tol);
  Json j;
  j["vector"] = io::to_json(x);
  j["ordering"] = ordering_permutation(x.values());
  j["lorenz"] = lorenz_values(x).values;
  return j;
}

Json cmd_gini(const Config& cfg, Inputs& in) {
  take_bare(in, in.vectors);
  Json j;
  if (!in.vectors.empty()) {
    const auto x = io::vector_from_json(need(in, in.vectors, 1, "vector").front(), cfg.tol);
    const auto bounds = average_bounds(x);
    j["gini"] = gini_index(x);
    j["gini_mean_abs_diff"] = gini_mean_abs_diff(x);
    j["max_gini"] = max_gini(x.size());
    j["average_bounds"] = {bounds.lo, bounds.hi};
  } else if (!in.matrices.empty()) {
    const auto q = io::matrix_from_json(need(in, in.matrices, 1, "matrix").front(), cfg.tol);
    j["gini_vector"] = local_gini_vector(q);
  } else if (!in.tensors.empty()) {
    const auto t = io::tensor_from_json(need(in, in.tensors, 1, "tensor").front(), cfg.d, cfg.tol);
    j["total_gini"] = total_gini(t);
  } else {
    throw UsageError("gini needs --vector, --matrix or --tensor");
  }
  return j;
}

Json cmd_majorize(const Config& cfg, Inputs& in) {
  const auto& v = need(in, in.vectors, 2, "vector");
  const auto x = io::vector_from_json(v[0], cfg.tol);
  const auto y = io::vector_from_json(v[1], cfg.tol);
  Json j;
  j["relation"] = to_string(majorizes(x, y));
  j["lorenz_x"] = lorenz_values(x).values;
  j["lorenz_y"] = lorenz_values(y).values;
  return j;
}

Json cmd_expand(const Config& cfg, Inputs& in) {
  take_bare(in, in.matrices);
  Json j;
  if (!in.matrices.empty()) {
    const auto q = io::matrix_from_json(need(in, in.matrices, 1, "matrix").front(), cfg.tol);
    const auto t = product_probabilities(q);
    j["expansion"] = "product";
    j["terms"] = terms_json(t, cfg.floor);
  } else if (!in.tensors.empty()) {
    const auto t = io::tensor_from_json(need(in, in.tensors, 1, "tensor").front(), cfg.d, cfg.tol);
    j["expansion"] = "tensor";
    j["matrix"] = io::to_json(tensor_to_matrix(t));
    j["terms"] = terms_json(t, cfg.floor);
  } else {
    throw UsageError("expand needs --matrix or --tensor");
  }
  return j;
}

Json cmd_scalar_product(const Config& cfg, Inputs& in) {
  Json j;
  take_bare(in, in.matrices);
  if (!in.matrices.empty()) {
    const auto& m = need(in, in.matrices, 2, "matrix");
    j["value"] = scalar_product(io::matrix_from_json(m[0], cfg.tol), io::matrix_from_json(m[1], cfg.tol));
  } else if (!in.tensors.empty()) {
    const auto& t = need(in, in.tensors, 2, "tensor");
    const auto r = scalar_product_via_tensors_checked(io::tensor_from_json(t[0], cfg.d, cfg.tol),
                                                      io::tensor_from_json(t[1], cfg.d, cfg.tol), cfg.tol);
    j["value"] = r.value;
    j["not_product_form"] = r.not_product_form;
  } else if (!in.states.empty()) {
    const auto& s = need(in, in.states, 2, "state");
    j["value"] = state_scalar_product(io::state_from_json(s[0]), io::state_from_json(s[1]));
  } else {
    throw UsageError("scalar-product needs two --matrix, --tensor or --state inputs");
  }
  return j;
}

Json cmd_correlations(const Config& cfg, Inputs& in) {
  const auto t = io::tensor_from_json(need(in, in.tensors, 1, "tensor").front(), cfg.d, cfg.tol);
  const auto q = tensor_to_matrix(t);
  const auto c = correlation_coefficients(t);
  Json j;
  j["matrix"] = io::to_json(q);
  j["products"] = io::to_json(product_probabilities(q));
  j["correlations"] = io::to_json(c);
  j["max_abs"] = c.max_abs();
  return j;
}

Json cmd_simulate(const Config& cfg, Inputs& in) {
  auto specs = specs_from(in, cfg);
  if (specs.size() != 1) throw UsageError("simulate needs exactly one ensemble");
  const auto& spec = specs.front();
  const SeededRng rng(cfg.seed);
  const auto empirical = empirical_tensor(spec, cfg.n, rng, SimOptions{cfg.threads});
  const auto exact = spec.exact_tensor();
  Json j;
  j["n"] = cfg.n;
  j["spec"] = io::to_json(spec);
  j["empirical"] = io::to_json(empirical);
  j["exact"] = io::to_json(exact);
  j["total_variation"] = total_variation(empirical, exact);
  return j;
}

Json cmd_collision(const Config& cfg, Inputs& in) {
  auto specs = specs_from(in, cfg);
  if (specs.size() == 1) specs.push_back(specs.front());
  if (specs.size() != 2) throw UsageError("collision needs one or two ensembles");
  const auto est = collision_probability_mc(specs[0], specs[1], cfg.n, SeededRng(cfg.seed), SimOptions{cfg.threads});
  Json j = io::to_json(est);
  j["exact"] = scalar_product(specs[0].matrix(), specs[1].matrix());
  return j;
}

Json cmd_quantum_stats(const Config&, Inputs& in) {
  const auto rho = io::state_from_json(need(in, in.states, 1, "state").front());
  return stats_json(state_stats(rho));
}

Json cmd_dual(const Config& cfg, Inputs& in) {
  const auto rho = io::state_from_json(need(in, in.states, 1, "state").front());
  const auto mode = parse_fourier_mode(cfg.mode.empty() ? "local" : cfg.mode);
  const auto dual = dual_state(rho, mode);
  Json j;
  j["mode"] = to_string(mode);
  j["state"] = io::to_json(dual);
  if (mode == FourierMode::Single) {
    const auto p = ProbVector::validate(dual.diagonal());
    j["probabilities"] = io::to_json(p);
    j["gini"] = gini_index(p);
  } else {
    j["stats"] = stats_json(state_stats(dual));
  }
  return j;
}

Json cmd_deficits(const Config&, Inputs& in) {
  const auto rho = io::state_from_json(need(in, in.states, 1, "state").front());
  const auto def = uncertainty_deficits(rho);
  Json j;
  j["d"] = def.d;
  j["local_component"] = def.local_component;
  j["local_total"] = def.local_total;
  j["global_component"] = def.global_component;
  j["global_total"] = def.global_total;
  return j;
}

Json cmd_eta(const Config& cfg, Inputs& in) {
  if (cfg.d == 0) throw UsageError("eta needs --d");
  const auto mode = parse_eta_mode(cfg.mode.empty() ? "single" : cfg.mode);
  EtaOptions opts;
  opts.threads = cfg.threads;
  take_bare(in, in.states);
  if (!in.states.empty()) opts.initial_state = io::pure_from_json(need(in, in.states, 1, "state").front());
  const auto est = estimate_eta(cfg.d, mode, cfg.budget, SeededRng(cfg.seed), opts);
  Json j;
  j["d"] = est.d;
  j["mode"] = to_string(est.mode);
  j["budget"] = cfg.budget;
  j["best_sum"] = est.best_sum;
  j["bound"] = est.bound;
  j["eta_upper"] = est.eta_upper;
  j["evaluations"] = est.evaluations;
  j["starts"] = est.starts;
  j["best_by_start"] = est.best_by_start;
  j["best_state"] = io::to_json(est.best_state);
  return j;
}

Json cmd_report(const Config& cfg, Inputs&) {
  reference::QubitPairParams p;
  p.a2 = cfg.a2;
  p.c2 = cfg.c2;
  p.d2 = cfg.d2;
  p.e2 = 1.0 - cfg.c2 - cfg.d2;
  Json j;
  j["report"] = cfg.report_name;
  Json body;
  if (cfg.report_name == "table1") body = report_table1(cfg.a, cfg.b);
  else if (cfg.report_name == "table2") body = report_table2(p);
  else if (cfg.report_name == "section84") body = report_section84(p);
  else body = report_section9();
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

// ---------------------------------------------------------------------------

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void flatten(const Json& j, const std::string& key, std::string& out) {
  if (j.is_object() || j.is_array()) {
    std::size_t idx = 0;
    for (const auto& [k, v] : j.items()) {
      const std::string sub = j.is_array() ? std::to_string(idx++) : k;
      flatten(v, key.empty() ? sub : key + "." + sub, out);
    }
    return;
  }
  std::string value;
  if (j.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
    value = buf;
  } else if (j.is_string()) {
    value = j.get<std::string>();
  } else {
    value = j.dump();
  }
  out += csv_quote(key) + "," + csv_quote(value) + "\n";
}

std::string render(const Json& j, const std::string& format) {
  if (format == "csv") {
    std::string out = "key,value\n";
    flatten(j, "", out);
    return out;
  }
  return j.dump(2) + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Row Markov matrices, Gini statistics, random safes and qudit Fourier duality"};
  app.name("qsafe");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--input", cfg.input_path, "JSON file with the command's inputs");
  app.add_option("--vector", cfg.vectors, "probability vector as a JSON array (repeatable)")->allow_extra_args(false);
  app.add_option("--matrix", cfg.matrices, "row Markov matrix as a JSON array of rows (repeatable)")->allow_extra_args(false);
  app.add_option("--tensor", cfg.tensors, "Markov tensor: flat d^d array or [{code, weight}] (repeatable)")->allow_extra_args(false);
  app.add_option("--state", cfg.states, "state JSON: {dim, entries}, {dim, amplitudes} or {d, images} (repeatable)")->allow_extra_args(false);
  app.add_option("--d", cfg.d, "local dimension");
  app.add_option("--mode", cfg.mode, "dual: single|local|global; eta: single|local_total|local_component|global_component|global_total");
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--n", cfg.n, "Monte Carlo sample count")->capture_default_str();
  app.add_option("--budget", cfg.budget, "objective evaluations for eta")->capture_default_str();
  app.add_option("--tol", cfg.tol, "validation tolerance")->capture_default_str();
  app.add_option("--floor", cfg.floor, "drop expansion terms below this weight")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", cfg.out_path, "write the report here instead of stdout");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"validate", "validate inputs and print their normalised form"},
      {"lorenz", "Lorenz values and ordering permutation of a vector"},
      {"gini", "Gini index of a vector, Gini vector of a matrix, or total Gini of a tensor"},
      {"majorize", "majorization relation between two vectors"},
      {"expand", "expansion of a matrix or tensor over the maps Z_d -> Z_d"},
      {"scalar-product", "scalar product of two matrices, tensors or states"},
      {"correlations", "correlation coefficients of a Markov tensor"},
      {"simulate", "empirical joint tensor of a random-safe ensemble"},
      {"collision", "Monte Carlo collision probability of two independent ensembles"},
      {"quantum-stats", "Markov matrix, tensor, correlations and Gini indices of a state"},
      {"dual", "Fourier dual F^dagger rho F of a state"},
      {"deficits", "local and global uncertainty deficits of a state"},
      {"eta", "search for the largest Gini sum over pure states"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->callback([&cfg, name = name] { cfg.command = name; });
  }
  auto* report = app.add_subcommand("report", "reproduce the worked examples");
  report->add_option("which", cfg.report_name, "table1 | table2 | section84 | section9")
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "section84", "section9"}));
  report->add_option("--a", cfg.a, "table1 parameter a")->capture_default_str();
  report->add_option("--b", cfg.b, "table1 parameter b")->capture_default_str();
  report->add_option("--a2", cfg.a2, "|a|^2 for the two-qubit states")->capture_default_str();
  report->add_option("--c2", cfg.c2, "|c|^2")->capture_default_str();
  report->add_option("--d2", cfg.d2, "|d|^2 (|e|^2 = 1 - |c|^2 - |d|^2)")->capture_default_str();
  report->callback([&cfg] { cfg.command = "report"; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.get_formatter()->make_help(&app, "qsafe", CLI::AppFormatMode::Normal);
    return 2;
  }

  static const std::map<std::string, std::function<Json(const Config&, Inputs&)>> handlers{
      {"validate", cmd_validate},       {"lorenz", cmd_lorenz},
      {"gini", cmd_gini},               {"majorize", cmd_majorize},
      {"expand", cmd_expand},           {"scalar-product", cmd_scalar_product},
      {"correlations", cmd_correlations}, {"simulate", cmd_simulate},
      {"collision", cmd_collision},     {"quantum-stats", cmd_quantum_stats},
      {"dual", cmd_dual},               {"deficits", cmd_deficits},
      {"eta", cmd_eta},                 {"report", cmd_report},
  };

  try {
    Inputs in = gather(cfg);
    const std::string text = render(seeded(handlers.at(cfg.command)(cfg, in), cfg), cfg.format);
    if (cfg.out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.out_path, std::ios::binary);
      if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + cfg.out_path + "'");
      f << text;
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.get_formatter()->make_help(&app, "qsafe", CLI::AppFormatMode::Normal);
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: InvalidInput: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qsafe::cli
