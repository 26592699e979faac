// Copyright 2026 The purity-vqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pvqa/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "pvqa/bpl.hpp"
#include "parallel.hpp"

namespace pvqa {

namespace {

constexpr std::uint64_t kDefaultSeed = 20260818;
constexpr double kPi = std::numbers::pi;

[[noreturn]] void bad_config(const std::string& message) {
  throw Error(ErrorCode::ConfigInvalid, message);
}

// ---------------------------------------------------------------------------
// Config schema
// ---------------------------------------------------------------------------

struct Field {
  enum class Kind { Number, Integer, String, Boolean, Object };
  std::string name;
  Kind kind = Kind::Number;
  nlohmann::json def;
};

const char* kind_name(Field::Kind kind) {
  switch (kind) {
    case Field::Kind::Number: return "a number";
    case Field::Kind::Integer: return "an integer";
    case Field::Kind::String: return "a string";
    case Field::Kind::Boolean: return "a boolean";
    case Field::Kind::Object: return "an object";
  }
  return "a value";
}

bool matches(Field::Kind kind, const nlohmann::json& value) {
  switch (kind) {
    case Field::Kind::Number: return value.is_number();
    case Field::Kind::Integer: return value.is_number_integer();
    case Field::Kind::String: return value.is_string();
    case Field::Kind::Boolean: return value.is_boolean();
    case Field::Kind::Object: return value.is_object();
  }
  return false;
}

// Defaults merged under user values. Unknown keys and ill-typed values are
// rejected; a null user value keeps a nullable default explicit.
nlohmann::json resolve_config(const nlohmann::json& user, const std::vector<Field>& schema) {
  if (!user.is_null() && !user.is_object()) {
    bad_config("config must be a JSON object");
  }
  nlohmann::json resolved = nlohmann::json::object();
  for (const Field& f : schema) {
    resolved[f.name] = f.def;
  }
  if (user.is_object()) {
    for (const auto& [key, value] : user.items()) {
      const Field* field = nullptr;
      for (const Field& f : schema) {
        if (f.name == key) {
          field = &f;
          break;
        }
      }
      if (field == nullptr) {
        bad_config("unknown config key \"" + key + "\"");
      }
      if (!value.is_null() && !matches(field->kind, value)) {
        bad_config("key \"" + key + "\" must be " + kind_name(field->kind));
      }
      resolved[key] = value;
    }
  }
  if (resolved.contains("seed") && resolved["seed"].is_null()) {
    resolved["seed"] = default_seed();
  }
  return resolved;
}

// Optimizer and pipeline knobs shared by the estimation commands.
void append_pipeline_fields(std::vector<Field>& schema, double fd_step, double learning_rate,
                            long long max_iters, double grad_tol, double cost_tol,
                            const nlohmann::json& init_angle) {
  schema.push_back({"fd_step", Field::Kind::Number, fd_step});
  schema.push_back({"learning_rate", Field::Kind::Number, learning_rate});
  schema.push_back({"max_iters", Field::Kind::Integer, max_iters});
  schema.push_back({"grad_tol", Field::Kind::Number, grad_tol});
  schema.push_back({"cost_tol", Field::Kind::Number, cost_tol});
  schema.push_back({"init_angle", Field::Kind::Number, init_angle});
  schema.push_back({"starts", Field::Kind::Integer, 1});
  schema.push_back({"shots", Field::Kind::Integer, 0});
  schema.push_back({"seed", Field::Kind::Integer, nullptr});
}

PipelineConfig pipeline_from_config(const nlohmann::json& c, std::uint64_t run_seed) {
  PipelineConfig pc;
  pc.optimizer.fd_step = c.at("fd_step").get<double>();
  pc.optimizer.learning_rate = c.at("learning_rate").get<double>();
  pc.optimizer.max_iters = c.at("max_iters").get<long long>();
  pc.optimizer.grad_tol = c.at("grad_tol").get<double>();
  pc.optimizer.cost_tol = c.at("cost_tol").get<double>();
  pc.optimizer.seed = run_seed;
  pc.starts = c.at("starts").get<int>();
  if (!c.at("init_angle").is_null()) {
    pc.init_angle = c.at("init_angle").get<double>();
  }
  const long long shots = c.at("shots").get<long long>();
  if (shots > 0) {
    pc.shots = ShotPlan{shots, derive_seed(run_seed, 0x5B07)};
  }
  return pc;
}

// ---------------------------------------------------------------------------
// Input-state specs
// ---------------------------------------------------------------------------

double spec_number(const nlohmann::json& spec, const char* key) {
  if (!spec.contains(key) || !spec[key].is_number()) {
    bad_config(std::string("state spec needs numeric \"") + key + "\"");
  }
  return spec[key].get<double>();
}

long long spec_integer(const nlohmann::json& spec, const char* key, long long fallback) {
  if (!spec.contains(key)) return fallback;
  if (!spec[key].is_number_integer()) {
    bad_config(std::string("state spec key \"") + key + "\" must be an integer");
  }
  return spec[key].get<long long>();
}

// {"kind": "product"|"diagonal"|"random"|"file", ...}; see the README for
// the per-kind fields.
DensityMatrix state_from_spec(const nlohmann::json& spec, std::uint64_t seed) {
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string()) {
    bad_config("state spec must be an object with a \"kind\" string");
  }
  const std::string kind = spec["kind"].get<std::string>();
  if (kind == "product") {
    const double phi = spec_number(spec, "phi");
    const long long n = spec_integer(spec, "n", 1);
    if (n < 1 || n > 20) bad_config("product state needs 1 <= n <= 20");
    return product_diagonal(phi, static_cast<int>(n));
  }
  if (kind == "diagonal") {
    if (!spec.contains("weights") || !spec["weights"].is_array() || spec["weights"].empty()) {
      bad_config("diagonal state needs a nonempty \"weights\" array");
    }
    Eigen::VectorXd w(static_cast<Eigen::Index>(spec["weights"].size()));
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const auto& cell = spec["weights"][static_cast<std::size_t>(i)];
      if (!cell.is_number()) bad_config("diagonal weights must be numbers");
      w(i) = cell.get<double>();
    }
    return DensityMatrix::diagonal(w);
  }
  if (kind == "random") {
    const long long dim = spec_integer(spec, "dim", 2);
    const long long rank = spec_integer(spec, "rank", 0);
    if (dim < 2 || dim > 4096) bad_config("random state needs 2 <= dim <= 4096");
    CounterRng rng(derive_seed(seed, 0xD1CE));
    if (rank == 0) return random_mixed_state(dim, rng);
    if (rank < 1 || rank > dim) bad_config("random state rank must lie in [1, dim]");
    return random_mixed_state(dim, rank, rng);
  }
  if (kind == "file") {
    if (!spec.contains("path") || !spec["path"].is_string()) {
      bad_config("file state needs a \"path\" string");
    }
    const std::string path = spec["path"].get<std::string>();
    std::ifstream in(path);
    if (!in) {
      throw Error(ErrorCode::IoError, "cannot open state file " + path);
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::IoError, "cannot parse state file " + path + ": " + e.what());
    }
    return density_matrix_from_json(j);
  }
  bad_config("unknown state kind \"" + kind + "\"");
}

nlohmann::json default_product_state() {
  return nlohmann::json{{"kind", "product"}, {"phi", kPi / 3.0}, {"n", 1}};
}

// ---------------------------------------------------------------------------
// Ansatz selection
// ---------------------------------------------------------------------------

int qubits_or_fail(const DensityMatrix& rho) {
  const int n = qubits_for_dim(rho.dim());
  if ((Eigen::Index{1} << n) != rho.dim()) {
    bad_config("product family needs a power-of-two dimension, got " +
               std::to_string(rho.dim()));
  }
  return n;
}

AnsatzFamily single_family(const std::string& name, const DensityMatrix& rho) {
  if (name == "auto") return sphere_family_for_state(rho);
  if (name == "product") return product_diagonal_family(qubits_or_fail(rho));
  bad_config("family must be \"auto\" or \"product\", got \"" + name + "\"");
}

StageFamilyProvider stage_families(const std::string& name, const DensityMatrix& rho) {
  if (name == "auto") return spectral_stage_families();
  if (name == "product") return product_diagonal_stage_families(qubits_or_fail(rho));
  bad_config("family must be \"auto\" or \"product\", got \"" + name + "\"");
}

// ---------------------------------------------------------------------------
// Record assembly helpers
// ---------------------------------------------------------------------------

ExperimentRecord make_record(const std::string& id, nlohmann::json resolved) {
  ExperimentRecord record;
  record.experiment_id = id;
  record.config_hash = config_fingerprint(resolved);
  record.config = std::move(resolved);
  record.extras = nlohmann::json::object();
  return record;
}

void append_triple(std::vector<double>& row, const PipelineReport& report) {
  row.push_back(report.estimate);
  row.push_back(report.oracle);
  row.push_back(report.abs_error);
}

std::vector<std::string> triple_columns(const std::string& prefix) {
  return {prefix + "_estimate", prefix + "_oracle", prefix + "_abs_error"};
}

void extend(std::vector<std::string>& columns, const std::vector<std::string>& more) {
  columns.insert(columns.end(), more.begin(), more.end());
}

// ---------------------------------------------------------------------------
// Figure sweeps
// ---------------------------------------------------------------------------

std::vector<Field> figure_schema(bool with_n_list) {
  std::vector<Field> schema;
  if (with_n_list) schema.push_back({"n_list", Field::Kind::String, "3,6,9"});
  schema.push_back({"phi_grid", Field::Kind::String, "0.1:3.0:0.1"});
  schema.push_back({"alpha", Field::Kind::Number, 0.5});
  append_pipeline_fields(schema, 0.005, 0.05, 20000, 1e-7, 0.0, kPi / 2.0);
  return schema;
}

// One row of the figure sweeps: rank, Renyi entropy and fidelity against
// the maximally mixed state, all on the n-qubit product input.
std::vector<double> sweep_row(double phi, int n, double alpha, const nlohmann::json& c,
                              std::uint64_t row_seed) {
  const DensityMatrix rho = product_diagonal(phi, n);
  const DensityMatrix sigma = DensityMatrix::maximally_mixed(rho.dim());
  const AnsatzFamily family = product_diagonal_family(n);
  const StageFamilyProvider provider = product_diagonal_stage_families(n);

  const PipelineReport rank =
      estimate_rank(rho, family, pipeline_from_config(c, derive_seed(row_seed, 1)));
  const PipelineReport entropy = estimate_entropy(
      rho, alpha, EntropyKind::Renyi, provider, pipeline_from_config(c, derive_seed(row_seed, 2)));
  const PipelineReport fidelity =
      estimate_fidelity(rho, sigma, provider, pipeline_from_config(c, derive_seed(row_seed, 3)));

  std::vector<double> row{phi};
  append_triple(row, rank);
  append_triple(row, entropy);
  append_triple(row, fidelity);
  return row;
}

ExperimentRecord run_fig2(const nlohmann::json& user) {
  const nlohmann::json c = resolve_config(user, figure_schema(false));
  ExperimentRecord record = make_record("fig2", c);
  const std::vector<double> grid = parse_grid(c.at("phi_grid").get<std::string>());
  const double alpha = c.at("alpha").get<double>();
  const std::uint64_t seed = c.at("seed").get<std::uint64_t>();

  record.columns = {"phi"};
  extend(record.columns, triple_columns("rank"));
  extend(record.columns, triple_columns("renyi"));
  extend(record.columns, triple_columns("fidelity"));
  record.rows.resize(grid.size());
  internal::parallel_for(grid.size(), [&](std::size_t i) {
    record.rows[i] = sweep_row(grid[i], 1, alpha, c, derive_seed(seed, i));
  });
  return record;
}

ExperimentRecord run_fig3(const nlohmann::json& user) {
  const nlohmann::json c = resolve_config(user, figure_schema(true));
  ExperimentRecord record = make_record("fig3", c);
  const std::vector<long long> n_list = parse_int_list(c.at("n_list").get<std::string>());
  const std::vector<double> grid = parse_grid(c.at("phi_grid").get<std::string>());
  const double alpha = c.at("alpha").get<double>();
  const std::uint64_t seed = c.at("seed").get<std::uint64_t>();
  for (const long long n : n_list) {
    if (n < 1 || n > 14) bad_config("n_list entries must lie in [1, 14]");
  }

  record.columns = {"n", "phi"};
  extend(record.columns, triple_columns("rank"));
  extend(record.columns, triple_columns("renyi"));
  extend(record.columns, triple_columns("fidelity"));
  record.rows.resize(n_list.size() * grid.size());
  internal::parallel_for(record.rows.size(), [&](std::size_t flat) {
    const std::size_t ni = flat / grid.size();
    const std::size_t pi = flat % grid.size();
    const int n = static_cast<int>(n_list[ni]);
    std::vector<double> row = sweep_row(grid[pi], n, alpha, c, derive_seed(seed, flat));
    row.insert(row.begin(), static_cast<double>(n));
    record.rows[flat] = std::move(row);
  });

  // Per-size mean relative rank error, the headline number of the sweep.
  nlohmann::json mean_errors = nlohmann::json::object();
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    double acc = 0.0;
    for (std::size_t pi = 0; pi < grid.size(); ++pi) {
      const std::vector<double>& row = record.rows[ni * grid.size() + pi];
      acc += row[4] / row[3];  // rank abs_error over rank oracle
    }
    mean_errors[std::to_string(n_list[ni])] = acc / static_cast<double>(grid.size());
  }
  record.extras["mean_relative_rank_error"] = std::move(mean_errors);
  return record;
}

// ---------------------------------------------------------------------------
// Landscape grid
// ---------------------------------------------------------------------------

double expressive_mu(double lambda, int k) {
  const double root = 1.0 / (2.0 * k);
  const double top = std::pow(lambda, root);
  const double bottom = std::pow(1.0 - lambda, root);
  return top / (top + bottom);
}

ExperimentRecord run_landscape(const nlohmann::json& user) {
  const std::vector<Field> schema{{"n", Field::Kind::Integer, 2},
                                  {"lambda", Field::Kind::Number, 0.5},
                                  {"k", Field::Kind::Integer, 1},
                                  {"mu", Field::Kind::Number, nullptr},
                                  {"steps", Field::Kind::Integer, 101}};
  const nlohmann::json c = resolve_config(user, schema);
  ExperimentRecord record = make_record("landscape", c);
  const int n = c.at("n").get<int>();
  const double lambda = c.at("lambda").get<double>();
  const int k = c.at("k").get<int>();
  const long long steps = c.at("steps").get<long long>();
  if (n != 2) bad_config("the landscape grid renders exactly two angles (n = 2)");
  if (steps < 2 || steps > 2001) bad_config("steps must lie in [2, 2001]");
  if (!(lambda > 0.0 && lambda < 1.0)) bad_config("lambda must lie strictly inside (0, 1)");
  const double mu = c.at("mu").is_null() ? expressive_mu(lambda, k) : c.at("mu").get<double>();

  // The same rank-2 state the closed form describes, for the cross-check
  // column: generic purity cost of the rotated two-point ansatz.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(4);
  w(0) = lambda;
  w(3) = 1.0 - lambda;
  const DensityMatrix rho = DensityMatrix::diagonal(w);
  const AnsatzFamily family = rotated_fixed_spectrum_family(mu, 2);
  CostSpec cost_spec;
  cost_spec.power = k;

  const std::size_t count = static_cast<std::size_t>(steps);
  const double step = 2.0 * kPi / static_cast<double>(steps - 1);
  record.columns = {"theta1", "theta2", "estimate", "oracle", "abs_error"};
  record.rows.resize(count * count);
  internal::parallel_for(record.rows.size(), [&](std::size_t flat) {
    const std::size_t i = flat / count;
    const std::size_t j = flat % count;
    Eigen::VectorXd theta(2);
    theta(0) = -kPi + step * static_cast<double>(i);
    theta(1) = -kPi + step * static_cast<double>(j);
    const double value = low_rank_landscape(lambda, mu, k, theta);
    const double oracle = global_cost(rho, family.evaluate(theta), cost_spec).value;
    record.rows[flat] = {theta(0), theta(1), value, oracle, std::abs(value - oracle)};
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < record.rows.size(); ++i) {
    if (record.rows[i][2] < record.rows[best][2]) best = i;
  }
  record.extras["mu"] = mu;
  record.extras["min_value"] = record.rows[best][2];
  record.extras["argmin"] = {record.rows[best][0], record.rows[best][1]};
  return record;
}

// ---------------------------------------------------------------------------
// Gradient-decay scans
// ---------------------------------------------------------------------------

ExperimentRecord run_bpl_scan(const nlohmann::json& user) {
  const std::vector<Field> schema{{"R_grid", Field::Kind::String, "2:20:1"},
                                  {"k", Field::Kind::Integer, 4},
                                  {"samples", Field::Kind::Integer, 2000},
                                  {"fd_step", Field::Kind::Number, 0.005},
                                  {"seed", Field::Kind::Integer, nullptr}};
  const nlohmann::json c = resolve_config(user, schema);
  ExperimentRecord record = make_record("bpl-scan", c);
  const std::vector<double> grid = parse_grid(c.at("R_grid").get<std::string>());
  const int k = c.at("k").get<int>();
  const int samples = c.at("samples").get<int>();
  const double fd_step = c.at("fd_step").get<double>();
  const std::uint64_t seed = c.at("seed").get<std::uint64_t>();

  CostSpec cost_spec;
  cost_spec.power = k;
  std::vector<GradientScan> scans;
  std::vector<std::pair<double, double>> points;
  for (const double r_real : grid) {
    const Eigen::Index r = static_cast<Eigen::Index>(std::llround(r_real));
    if (r < 2 || r > 256) bad_config("ranks in R_grid must lie in [2, 256]");
    const DensityMatrix rho = DensityMatrix::maximally_mixed(r);
    const AnsatzFamily family = sphere_family_for_state(rho);
    const auto landscape = [&rho, &family, &cost_spec](const Eigen::VectorXd& theta) {
      return global_cost(rho, family.evaluate(theta), cost_spec).value;
    };
    GradientScan scan = mc_gradient_scan(landscape, family.param_count(), samples, family.domain,
                                         derive_seed(seed, static_cast<std::uint64_t>(r)), fd_step);
    scan.n_or_R = static_cast<int>(r);
    points.emplace_back(static_cast<double>(r), scan.mean_abs_grad);
    scans.push_back(scan);
  }

  const PowerLawFit fit = power_law_fit(points);
  record.columns = {"R", "samples", "estimate", "std_error", "oracle", "abs_error"};
  for (const GradientScan& scan : scans) {
    const double x = static_cast<double>(scan.n_or_R);
    const double predicted = fit.a * std::pow(x, fit.c) + fit.b * std::pow(x, fit.c - 1.0);
    record.rows.push_back({x, static_cast<double>(scan.samples), scan.mean_abs_grad,
                           scan.std_error, predicted, std::abs(scan.mean_abs_grad - predicted)});
  }
  record.extras["fit"] = {{"a", fit.a}, {"b", fit.b}, {"c", fit.c},
                          {"residual_norm", fit.residual_norm}};
  return record;
}

ExperimentRecord run_bpl_correlated(const nlohmann::json& user) {
  const std::vector<Field> schema{{"n_grid", Field::Kind::String, "6:14:1"},
                                  {"lambda1", Field::Kind::Number, 0.75},
                                  {"delta", Field::Kind::Number, 0.05},
                                  {"samples", Field::Kind::Integer, 2000},
                                  {"fd_step", Field::Kind::Number, nullptr},
                                  {"seed", Field::Kind::Integer, nullptr}};
  const nlohmann::json c = resolve_config(user, schema);
  ExperimentRecord record = make_record("bpl-correlated", c);
  const std::vector<double> grid = parse_grid(c.at("n_grid").get<std::string>());
  const double lambda1 = c.at("lambda1").get<double>();
  const double delta = c.at("delta").get<double>();
  const int samples = c.at("samples").get<int>();
  const double fd_step =
      c.at("fd_step").is_null() ? delta / 100.0 : c.at("fd_step").get<double>();
  const std::uint64_t seed = c.at("seed").get<std::uint64_t>();
  const SpectrumPair spec{lambda1, 1.0 - lambda1};

  record.columns = {"n", "samples", "estimate", "std_error", "oracle", "abs_error"};
  std::vector<double> log2_closed;
  for (const double n_real : grid) {
    const int n = static_cast<int>(std::llround(n_real));
    if (n < 1 || n > 40) bad_config("sizes in n_grid must lie in [1, 40]");
    const double closed = correlated_expected_grad(spec, n, delta);
    const auto landscape = [&spec, n](const Eigen::VectorXd& theta) {
      return product_cost_closed_form(spec, 1, Eigen::VectorXd::Constant(n, theta(0)));
    };
    const GradientScan scan =
        mc_gradient_scan(landscape, 1, samples, {Interval{-delta, delta}},
                         derive_seed(seed, static_cast<std::uint64_t>(n)), fd_step);
    record.rows.push_back({static_cast<double>(n), static_cast<double>(samples),
                           scan.mean_abs_grad, scan.std_error, closed,
                           std::abs(scan.mean_abs_grad - closed)});
    log2_closed.push_back(std::log2(closed));
  }

  // Least-squares slope of log2(closed form) against n: the decay exponent.
  const double m = static_cast<double>(grid.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sx += grid[i];
    sy += log2_closed[i];
    sxx += grid[i] * grid[i];
    sxy += grid[i] * log2_closed[i];
  }
  const double denom = m * sxx - sx * sx;
  record.extras["log2_slope"] = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
  return record;
}

// ---------------------------------------------------------------------------
// Single-pipeline commands
// ---------------------------------------------------------------------------

std::vector<Field> pipeline_schema() {
  std::vector<Field> schema{{"state", Field::Kind::Object, default_product_state()},
                            {"family", Field::Kind::String, "auto"},
                            {"trace_iterates", Field::Kind::Boolean, false}};
  append_pipeline_fields(schema, 0.005, 0.05, 5000, 1e-5, 1e-8, nullptr);
  return schema;
}

ExperimentRecord run_rank(const nlohmann::json& user) {
  std::vector<Field> schema = pipeline_schema();
  schema.push_back({"k", Field::Kind::Integer, 1});
  const nlohmann::json c = resolve_config(user, schema);
  ExperimentRecord record = make_record("rank", c);
  const std::uint64_t seed = c.at("seed").get<std::uint64_t>();
  const DensityMatrix rho = state_from_spec(c.at("state"), seed);
  PipelineConfig pc = pipeline_from_config(c, seed);
  pc.cost_power = c.at("k").get<int>();

  const PipelineReport report =
      estimate_rank(rho, single_family(c.at("family").get<std::string>(), rho), pc);
  record.columns = {"dim", "k", "estimate", "oracle", "abs_error"};
  record.rows.push_back({static_cast<double>(rho.dim()), static_cast<double>(pc.cost_power),
                         report.estimate, report.oracle, report.abs_error});
  record.extras["report"] = report.to_json(c.at("trace_iterates").get<bool>());
  return record;
}

ExperimentRecord run_entropy(const nlohmann::json& user) {
  std::vector<Field> schema = pipeline_schema();
  schema.push_back({"alpha", Field::Kind::Number, 0.5});
  schema.push_back({"kind", Field::Kind::String, "renyi"});
  schema.push_back({"max_denominator", Field::Kind::Integer, 12});
  const nlohmann::json c = resolve_config(user, schema);
  ExperimentRecord record = make_record("entropy", c);
  const std::uint64_t seed = c.at("seed").get<std::uint64_t>();
  const DensityMatrix rho = state_from_spec(c.at("state"), seed);
  PipelineConfig pc = pipeline_from_config(c, seed);
  pc.max_denominator = c.at("max_denominator").get<long long>();
  const std::string kind_text = c.at("kind").get<std::string>();
  if (kind_text != "renyi" && kind_text != "tsallis") {
    bad_config("kind must be \"renyi\" or \"tsallis\"");
  }
  const EntropyKind kind = kind_text == "renyi" ? EntropyKind::Renyi : EntropyKind::Tsallis;
  const double alpha = c.at("alpha").get<double>();

  const PipelineReport report = estimate_entropy(
      rho, alpha, kind, stage_families(c.at("family").get<std::string>(), rho), pc);
  record.columns = {"alpha", "l", "p", "q", "estimate", "oracle", "abs_error"};
  record.rows.push_back({alpha, report.constants.at("l"), report.constants.at("p"),
                         report.constants.at("q"), report.estimate, report.oracle,
                         report.abs_error});
  record.extras["report"] = report.to_json(c.at("trace_iterates").get<bool>());
  return record;
}

ExperimentRecord run_fidelity(const nlohmann::json& user) {
  std::vector<Field> schema = pipeline_schema();
  schema.push_back({"sigma", Field::Kind::Object, nullptr});
  const nlohmann::json c = resolve_config(user, schema);
  ExperimentRecord record = make_record("fidelity", c);
  const std::uint64_t seed = c.at("seed").get<std::uint64_t>();
  const DensityMatrix rho = state_from_spec(c.at("state"), seed);
  const DensityMatrix sigma = c.at("sigma").is_null()
                                  ? DensityMatrix::maximally_mixed(rho.dim())
                                  : state_from_spec(c.at("sigma"), derive_seed(seed, 0x516));
  const PipelineConfig pc = pipeline_from_config(c, seed);

  const PipelineReport report =
      estimate_fidelity(rho, sigma, stage_families(c.at("family").get<std::string>(), sigma), pc);
  record.columns = {"dim", "estimate", "oracle", "abs_error", "raw_estimate"};
  record.rows.push_back({static_cast<double>(rho.dim()), report.estimate, report.oracle,
                         report.abs_error, report.constants.at("raw_estimate")});
  record.extras["report"] = report.to_json(c.at("trace_iterates").get<bool>());
  return record;
}

ExperimentRecord run_qfi(const nlohmann::json& user) {
  std::vector<Field> schema{{"n", Field::Kind::Integer, 1},
                            {"theta", Field::Kind::Number, kPi / 2.0},
                            {"delta", Field::Kind::Number, 0.01},
                            {"family", Field::Kind::String, "product"},
                            {"trace_iterates", Field::Kind::Boolean, false}};
  append_pipeline_fields(schema, 5e-4, 0.05, 20000, 1e-11, 0.0, kPi / 2.0);
  const nlohmann::json c = resolve_config(user, schema);
  ExperimentRecord record = make_record("qfi", c);
  const std::uint64_t seed = c.at("seed").get<std::uint64_t>();
  const int n = c.at("n").get<int>();
  if (n < 1 || n > 20) bad_config("n must lie in [1, 20]");
  const double theta = c.at("theta").get<double>();
  const double delta = c.at("delta").get<double>();
  const PipelineConfig pc = pipeline_from_config(c, seed);

  const auto path = [n](double t) { return product_diagonal(t, n); };
  const DensityMatrix probe = path(theta);
  const PipelineReport report =
      estimate_qfi(path, theta, delta, stage_families(c.at("family").get<std::string>(), probe),
                   pc);
  record.columns = {"theta", "delta", "estimate", "oracle", "abs_error"};
  record.rows.push_back({theta, delta, report.estimate, report.oracle, report.abs_error});
  record.extras["report"] = report.to_json(c.at("trace_iterates").get<bool>());
  return record;
}

ExperimentRecord run_frac_power(const nlohmann::json& user) {
  std::vector<Field> schema = pipeline_schema();
  schema.push_back({"alpha", Field::Kind::Number, -1.0});
  schema.push_back({"max_denominator", Field::Kind::Integer, 12});
  const nlohmann::json c = resolve_config(user, schema);
  ExperimentRecord record = make_record("frac-power", c);
  const std::uint64_t seed = c.at("seed").get<std::uint64_t>();
  const DensityMatrix rho = state_from_spec(c.at("state"), seed);
  PipelineConfig pc = pipeline_from_config(c, seed);
  pc.max_denominator = c.at("max_denominator").get<long long>();
  const double alpha = c.at("alpha").get<double>();
  const FractionSpec frac = rational_approximation(alpha, pc.max_denominator);

  const FractionalPowerResult result = fractional_power_state(
      rho, frac, stage_families(c.at("family").get<std::string>(), rho), pc);
  record.columns = {"alpha", "sign", "l", "p", "q",
                    "estimate", "oracle", "abs_error", "state_trace_distance"};
  record.rows.push_back({alpha, static_cast<double>(frac.sign), static_cast<double>(frac.l),
                         static_cast<double>(frac.p), static_cast<double>(frac.q),
                         result.report.estimate, result.report.oracle, result.report.abs_error,
                         result.report.constants.at("state_trace_distance")});
  record.extras["report"] = result.report.to_json(c.at("trace_iterates").get<bool>());
  record.extras["state"] = to_json(result.state);
  return record;
}

ExperimentRecord run_learn_state(const nlohmann::json& user) {
  const nlohmann::json c = resolve_config(user, pipeline_schema());
  ExperimentRecord record = make_record("learn-state", c);
  const std::uint64_t seed = c.at("seed").get<std::uint64_t>();
  const DensityMatrix rho = state_from_spec(c.at("state"), seed);
  const PipelineConfig pc = pipeline_from_config(c, seed);

  const LearnStateResult result =
      learn_state(rho, stage_families(c.at("family").get<std::string>(), rho), pc);
  record.columns = {"dim", "estimate", "oracle", "abs_error"};
  record.rows.push_back({static_cast<double>(rho.dim()), result.report.estimate,
                         result.report.oracle, result.report.abs_error});
  record.extras["report"] = result.report.to_json(c.at("trace_iterates").get<bool>());
  record.extras["state"] = to_json(result.state);
  return record;
}

ExperimentRecord run_oracle(const nlohmann::json& user) {
  const std::vector<Field> schema{{"state", Field::Kind::Object, default_product_state()},
                                  {"sigma", Field::Kind::Object, nullptr},
                                  {"alpha", Field::Kind::Number, 0.5},
                                  {"seed", Field::Kind::Integer, nullptr}};
  const nlohmann::json c = resolve_config(user, schema);
  ExperimentRecord record = make_record("oracle", c);
  const std::uint64_t seed = c.at("seed").get<std::uint64_t>();
  const DensityMatrix rho = state_from_spec(c.at("state"), seed).normalized();
  const DensityMatrix sigma = c.at("sigma").is_null()
                                  ? DensityMatrix::maximally_mixed(rho.dim())
                                  : state_from_spec(c.at("sigma"), derive_seed(seed, 0x516));
  const double alpha = c.at("alpha").get<double>();
  const ExactOracles oracles = exact_oracles(rho, sigma, alpha);

  record.columns = {"alpha"};
  std::vector<double> row{alpha};
  const auto push = [&](const std::string& name, double value) {
    extend(record.columns, triple_columns(name));
    row.push_back(value);
    row.push_back(value);
    row.push_back(0.0);
  };
  push("purity", purity(rho));
  push("rank", static_cast<double>(oracles.rank));
  push("renyi", oracles.renyi);
  push("tsallis", oracles.tsallis);
  push("fidelity", oracles.fidelity);
  record.rows.push_back(std::move(row));
  return record;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
}

std::size_t column_index(const ExperimentRecord& record, const std::string& name) {
  for (std::size_t i = 0; i < record.columns.size(); ++i) {
    if (record.columns[i] == name) return i + 1;  // gnuplot columns are 1-based
  }
  return 0;
}

std::string plot_script_body(const ExperimentRecord& r) {
  std::string s;
  s += "set datafile separator ','\n";
  s += "set key autotitle columnhead\n";
  s += "set terminal pngcairo size 1200,800\n";
  s += "set output 'figure.png'\n";
  const std::string id = r.experiment_id;
  if (id == "fig2" || id == "fig3") {
    const std::size_t x = id == "fig2" ? 1 : 2;
    s += "set multiplot layout 3,1\n";
    for (const std::string q : {"rank", "renyi", "fidelity"}) {
      const std::size_t est = column_index(r, q + "_estimate");
      const std::size_t ora = column_index(r, q + "_oracle");
      s += "set ylabel '" + q + "'\n";
      s += "plot 'data.csv' using " + std::to_string(x) + ":" + std::to_string(est) +
           " with points pointtype 7, '' using " + std::to_string(x) + ":" +
           std::to_string(ora) + " with lines\n";
    }
    s += "unset multiplot\n";
  } else if (id == "landscape") {
    s += "set view map\n";
    s += "set xlabel 'theta1'\nset ylabel 'theta2'\n";
    s += "splot 'data.csv' using 1:2:3 with points palette pointtype 5 pointsize 1\n";
  } else if (id == "bpl-scan" || id == "bpl-correlated") {
    s += "set logscale y\n";
    if (id == "bpl-scan") s += "set logscale x\n";
    s += "set xlabel '" + std::string(id == "bpl-scan" ? "R" : "n") + "'\n";
    s += "plot 'data.csv' using 1:3:4 with yerrorbars, '' using 1:5 with lines\n";
  } else {
    const std::size_t est = column_index(r, "estimate");
    const std::size_t ora = column_index(r, "oracle");
    s += "plot 'data.csv' using 0:" + std::to_string(est) +
         " with points pointtype 7, '' using 0:" + std::to_string(ora) + " with points\n";
  }
  return s;
}

using Runner = ExperimentRecord (*)(const nlohmann::json&);

const std::vector<std::pair<std::string, Runner>>& runners() {
  static const std::vector<std::pair<std::string, Runner>> table{
      {"fig2", run_fig2},
      {"fig3", run_fig3},
      {"landscape", run_landscape},
      {"bpl-scan", run_bpl_scan},
      {"bpl-correlated", run_bpl_correlated},
      {"rank", run_rank},
      {"entropy", run_entropy},
      {"fidelity", run_fidelity},
      {"qfi", run_qfi},
      {"frac-power", run_frac_power},
      {"learn-state", run_learn_state},
      {"oracle", run_oracle},
  };
  return table;
}

}  // namespace

nlohmann::json ExperimentRecord::to_json() const {
  return nlohmann::json{{"experiment_id", experiment_id}, {"config_hash", config_hash},
                        {"tool_version", tool_version},   {"config", config},
                        {"columns", columns},             {"rows", rows},
                        {"extras", extras}};
}

std::uint64_t default_seed() {
  const char* env = std::getenv("PURITY_VQA_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') {
    bad_config("PURITY_VQA_SEED must be a nonnegative integer");
  }
  return static_cast<std::uint64_t>(value);
}

std::string config_fingerprint(const nlohmann::json& resolved) {
  const std::string dump = resolved.dump();
  std::uint64_t hash = 14695981039346656037ull;
  for (const unsigned char byte : dump) {
    hash ^= byte;
    hash *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

namespace {

double parse_number(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    bad_config(what + " is not a number: \"" + text + "\"");
  }
  if (pos != text.size() || !std::isfinite(value)) {
    bad_config(what + " is not a number: \"" + text + "\"");
  }
  return value;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  const std::size_t first = text.find(':');
  const std::size_t second = first == std::string::npos ? std::string::npos
                                                        : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
    bad_config("grid must be start:end:step, got \"" + text + "\"");
  }
  const double start = parse_number(text.substr(0, first), "grid start");
  const double end = parse_number(text.substr(first + 1, second - first - 1), "grid end");
  const double step = parse_number(text.substr(second + 1), "grid step");
  if (!(step > 0.0)) bad_config("grid step must be positive");
  if (end < start - 1e-12) bad_config("grid end must not precede start");
  const long long count = std::llround((end - start) / step) + 1;
  if (count < 1 || count > 1000000) bad_config("grid would produce an unreasonable point count");
  std::vector<double> values(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    values[static_cast<std::size_t>(i)] = start + step * static_cast<double>(i);
  }
  return values;
}

std::vector<long long> parse_int_list(const std::string& text) {
  std::vector<long long> values;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t comma = text.find(',', begin);
    const std::string token =
        text.substr(begin, comma == std::string::npos ? std::string::npos : comma - begin);
    if (token.empty()) bad_config("integer list has an empty entry: \"" + text + "\"");
    std::size_t pos = 0;
    long long value = 0;
    try {
      value = std::stoll(token, &pos);
    } catch (const std::exception&) {
      bad_config("integer list entry is not an integer: \"" + token + "\"");
    }
    if (pos != token.size()) {
      bad_config("integer list entry is not an integer: \"" + token + "\"");
    }
    values.push_back(value);
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  if (values.empty()) bad_config("integer list is empty");
  return values;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, runner] : runners()) out.push_back(name);
    return out;
  }();
  return names;
}

ExperimentRecord run_experiment(const std::string& command, const nlohmann::json& config) {
  for (const auto& [name, runner] : runners()) {
    if (name == command) return runner(config);
  }
  bad_config("unknown experiment \"" + command + "\"");
}

void write_record(const ExperimentRecord& record, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::IoError, "cannot create directory " + out_dir + ": " + ec.message());
  }
  write_text(dir / "record.json", record.to_json().dump(2) + "\n");

  std::string csv;
  for (std::size_t i = 0; i < record.columns.size(); ++i) {
    if (i > 0) csv += ',';
    csv += record.columns[i];
  }
  csv += '\n';
  for (const std::vector<double>& row : record.rows) {
    if (row.size() != record.columns.size()) {
      throw Error(ErrorCode::IoError, "row width does not match the header");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) csv += ',';
      csv += fmt17(row[i]);
    }
    csv += '\n';
  }
  write_text(dir / "data.csv", csv);
}

std::string emit_plot_script(const ExperimentRecord& record, const std::string& out_dir) {
  if (record.rows.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "cannot plot a record with no rows");
  }
  const std::filesystem::path path = std::filesystem::path(out_dir) / "plot.gp";
  write_text(path, plot_script_body(record));
  return path.string();
}

}  // namespace pvqa
