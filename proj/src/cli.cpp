// Copyright 2026 The qctl Authors
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

#include "qctl/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include "qctl/analysis.hpp"
#include "qctl/feedback.hpp"
#include "qctl/networks.hpp"
#include "qctl/synthesis.hpp"

namespace qctl::cli {

namespace fs = std::filesystem;
using io::json;

std::vector<std::string> known_commands() {
  return {"simulate", "analyze", "grape", "lyapunov", "dd", "fme", "sme", "slh"};
}

int thread_budget() {
  if (const char* env = std::getenv("QCTL_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// ---------------------------------------------------------------------------
// Schema checking: collect every problem before failing.

struct Schema {
  const json& j;
  std::vector<std::string> errors;

  bool has(const std::string& key) const { return j.contains(key); }

  const json* require(const std::string& key, const char* type) {
    if (!j.contains(key)) {
      errors.push_back("missing required field \"" + key + "\" (" + type + ")");
      return nullptr;
    }
    return &j[key];
  }

  double require_number(const std::string& key) {
    const json* v = require(key, "number");
    if (v && !v->is_number()) {
      errors.push_back("field \"" + key + "\" must be a number");
      return 0;
    }
    return v ? v->get<double>() : 0;
  }

  std::int64_t require_integer(const std::string& key) {
    const json* v = require(key, "integer");
    if (v && !v->is_number_integer()) {
      errors.push_back("field \"" + key + "\" must be an integer");
      return 0;
    }
    return v ? v->get<std::int64_t>() : 0;
  }

  double number_or(const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) {
      errors.push_back("field \"" + key + "\" must be a number");
      return fallback;
    }
    return j[key].get<double>();
  }

  std::int64_t integer_or(const std::string& key, std::int64_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) {
      errors.push_back("field \"" + key + "\" must be an integer");
      return fallback;
    }
    return j[key].get<std::int64_t>();
  }

  std::string string_or(const std::string& key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) {
      errors.push_back("field \"" + key + "\" must be a string");
      return fallback;
    }
    return j[key].get<std::string>();
  }

  CMat matrix(const std::string& key) {
    const json* v = require(key, "matrix object");
    if (!v) return CMat();
    try {
      return io::mat_from_json(*v, key);
    } catch (const ValidationError& err) {
      errors.push_back(err.what());
      return CMat();
    }
  }

  CMat matrix_or(const std::string& key, const CMat& fallback) {
    if (!j.contains(key)) return fallback;
    try {
      return io::mat_from_json(j[key], key);
    } catch (const ValidationError& err) {
      errors.push_back(err.what());
      return fallback;
    }
  }

  int finish(const std::string& command) const {
    if (errors.empty()) return kOk;
    std::cerr << "validation error in " << command << " config ("
              << errors.size() << " problem" << (errors.size() > 1 ? "s" : "")
              << "):\n";
    for (const auto& e : errors) std::cerr << "  - " << e << "\n";
    return kValidationError;
  }
};

dynamics::LindbladModel parse_model(Schema& schema, const json& j) {
  CMat h = io::mat_from_json(j.at("hamiltonian"), "model.hamiltonian");
  if (j.contains("gks")) {
    const CMat a = io::mat_from_json(j.at("gks").at("matrix"), "model.gks.matrix");
    return dynamics::LindbladModel::from_gks(
        h, a, core::gell_mann_basis(static_cast<int>(h.rows())));
  }
  std::vector<CMat> noise;
  if (j.contains("noise_ops"))
    for (size_t k = 0; k < j["noise_ops"].size(); ++k)
      noise.push_back(io::mat_from_json(j["noise_ops"][k],
                                        "model.noise_ops[" + std::to_string(k) + "]"));
  (void)schema;
  return dynamics::LindbladModel(h, noise);
}

std::vector<std::string> state_csv_header(int dim) {
  std::vector<std::string> header{"t"};
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) {
      header.push_back("re_" + std::to_string(i) + std::to_string(j));
      header.push_back("im_" + std::to_string(i) + std::to_string(j));
    }
  return header;
}

void write_state_trajectory(const std::string& path,
                            const std::vector<core::DensityMatrix>& states,
                            double dt) {
  const int dim = states.front().dim();
  io::CsvWriter csv(path, state_csv_header(dim));
  for (size_t k = 0; k < states.size(); ++k) {
    std::vector<double> row{static_cast<double>(k) * dt};
    const CMat& m = states[k].matrix();
    for (int j = 0; j < dim; ++j)
      for (int i = 0; i < dim; ++i) {
        row.push_back(m(i, j).real());
        row.push_back(m(i, j).imag());
      }
    csv.row(row);
  }
}

void write_bloch_trajectory(const std::string& path,
                            const std::vector<core::DensityMatrix>& states,
                            double dt) {
  io::CsvWriter csv(path, {"t", "x", "y", "z"});
  for (size_t k = 0; k < states.size(); ++k) {
    const core::BlochVector b = core::bloch_from_density(states[k]);
    csv.row({static_cast<double>(k) * dt, b.x, b.y, b.z});
  }
}

// ---------------------------------------------------------------------------

int run_simulate(const json& config, const std::string& out) {
  Schema schema{config};
  const double total_time = schema.require_number("total_time");
  const int n_steps = static_cast<int>(schema.require_integer("n_steps"));
  schema.require("model", "object");
  schema.require("rho0", "matrix object");
  if (schema.has("model") && !config["model"].contains("hamiltonian"))
    schema.errors.push_back("model: missing required field \"hamiltonian\"");
  if (int rc = schema.finish("simulate"); rc != kOk) return rc;

  dynamics::LindbladModel model = parse_model(schema, config.at("model"));
  core::DensityMatrix rho0(io::mat_from_json(config.at("rho0"), "rho0"));

  std::vector<core::DensityMatrix> states;
  if (config.contains("controls")) {
    const json& c = config.at("controls");
    std::vector<CMat> hams;
    for (size_t k = 0; k < c.at("hamiltonians").size(); ++k)
      hams.push_back(io::mat_from_json(c["hamiltonians"][k], "controls.hamiltonians"));
    const auto amp = c.at("amplitudes");
    RMat u(hams.size(), amp.empty() ? 0 : amp[0].size());
    for (size_t r = 0; r < amp.size(); ++r)
      for (size_t s = 0; s < amp[r].size(); ++s)
        u(static_cast<int>(r), static_cast<int>(s)) = amp[r][s].get<double>();
    states = dynamics::mme_propagate_controlled(model, hams, u, total_time, rho0);
  } else {
    states = dynamics::mme_propagate(model, rho0, total_time, n_steps);
  }

  const double dt = total_time / (static_cast<int>(states.size()) - 1);
  write_state_trajectory(out + "/trajectory.csv", states, dt);
  if (model.dim() == 2) write_bloch_trajectory(out + "/bloch.csv", states, dt);

  json summary{{"command", "simulate"},
               {"n_samples", states.size()},
               {"final_state", io::mat_to_json(states.back().matrix())},
               {"final_purity", states.back().purity()}};
  io::write_json_file(out + "/summary.json", summary);
  return kOk;
}

int run_analyze(const json& config, const std::string& out) {
  Schema schema{config};
  schema.require("h0", "matrix object");
  schema.require("h1", "matrix object");
  if (int rc = schema.finish("analyze"); rc != kOk) return rc;

  const CMat h0 = io::mat_from_json(config.at("h0"), "h0");
  const CMat h1 = io::mat_from_json(config.at("h1"), "h1");
  const double edge_threshold =
      config.value("edge_threshold", 1e-9 * std::max(1.0, h1.cwiseAbs().maxCoeff()));

  json report;
  auto ctrl = analysis::is_operator_controllable(h0, h1);
  auto spectral = analysis::spectral_structure(h0);
  auto graph = analysis::graph_connected(h1, edge_threshold);
  auto sufficient = analysis::sufficient_controllability(h0, h1);

  json edges = json::array();
  for (auto [a, b] : graph.graph.edges) edges.push_back(json::array({a, b}));
  json energies = json::array();
  for (int i = 0; i < spectral.energies.size(); ++i)
    energies.push_back(spectral.energies(i));

  const char* verdicts[] = {"controllable_by_thm5", "controllable_by_weakened_test",
                            "inconclusive"};
  report["controllability"] = {
      {"lie_closure_dim", ctrl.closure.dim},
      {"operator_controllable", ctrl.controllable},
      {"closure_depth", ctrl.closure.depth},
      {"closure_saturated", ctrl.closure.saturated},
      {"spectral", {{"energies", energies},
                    {"regular", spectral.regular},
                    {"strongly_regular", spectral.strongly_regular}}},
      {"graph", {{"edges", edges}, {"connected", graph.connected}}},
      {"sufficient", {{"verdict", verdicts[static_cast<int>(sufficient.verdict)]},
                      {"checks_passed", sufficient.checks_passed},
                      {"basis_changed", sufficient.basis_changed}}},
  };

  if (config.contains("model")) {
    dynamics::LindbladModel model = parse_model(schema, config.at("model"));
    auto steady = analysis::steady_states(model);
    auto gas = analysis::gas_check(model);
    auto access = analysis::affine_accessibility(model, {h1});
    json stability{{"kernel_dim", steady.kernel_dim}, {"gas", gas.gas}};
    if (gas.state) stability["steady_state"] = io::mat_to_json(gas.state->matrix());
    stability["accessibility"] = {
        {"verdict", access.verdict == analysis::AccessVerdict::accessible
                        ? "accessible" : "inconclusive"},
        {"closure_dim", access.closure_dim},
        {"required_dim", access.required_dim},
        {"unital", access.unital},
        {"static_facts", access.static_facts}};
    report["stability"] = stability;
  }
  io::write_json_file(out + "/report.json", report);
  return kOk;
}

int run_grape(const json& config, const std::string& out) {
  Schema schema{config};
  schema.require("problem", "object");
  schema.require("objective", "object");
  const auto seed = schema.require_integer("seed");
  const double weight = schema.number_or("fluence_weight", 0.0);
  const int max_iters = static_cast<int>(schema.integer_or("max_iters", 200));
  const int restarts = static_cast<int>(schema.integer_or("restarts", 1));
  const double init_amplitude = schema.number_or("init_amplitude", 0.5);
  if (schema.has("problem")) {
    for (const char* key : {"h0", "controls", "total_time", "n_slices"})
      if (!config["problem"].contains(key))
        schema.errors.push_back(std::string("problem: missing required field \"") +
                                key + "\"");
  }
  if (schema.has("objective") && !config["objective"].contains("type"))
    schema.errors.push_back("objective: missing required field \"type\"");
  if (int rc = schema.finish("grape"); rc != kOk) return rc;

  const json& pj = config.at("problem");
  const CMat h0 = io::mat_from_json(pj.at("h0"), "problem.h0");
  std::vector<CMat> controls;
  for (size_t k = 0; k < pj.at("controls").size(); ++k)
    controls.push_back(io::mat_from_json(pj["controls"][k], "problem.controls"));
  const double total_time = pj.at("total_time").get<double>();
  const int n_slices = pj.at("n_slices").get<int>();

  synthesis::GrapeProblem problem{
      dynamics::ControlProblem(h0, controls, total_time, n_slices,
                               RMat::Zero(static_cast<int>(controls.size()), n_slices)),
      synthesis::GrapeObjective::observable, CMat(), CVec(), weight, max_iters};
  const json& obj = config.at("objective");
  const std::string type = obj.at("type").get<std::string>();
  problem.target = io::mat_from_json(obj.at("matrix"), "objective.matrix");
  if (type == "observable") {
    problem.objective = synthesis::GrapeObjective::observable;
    problem.psi0 = io::vec_from_json(obj.at("psi0"), "objective.psi0");
  } else if (type == "unitary") {
    problem.objective = synthesis::GrapeObjective::unitary;
  } else {
    std::cerr << "validation error in grape config: objective.type must be "
                 "\"observable\" or \"unitary\"\n";
    return kValidationError;
  }

  // Independent restarts with disjoint seeds, merged in index order.
  std::vector<synthesis::GrapeResult> results(restarts);
  const int threads = std::min(thread_budget(), restarts);
  if (threads <= 1) {
    for (int r = 0; r < restarts; ++r)
      results[r] = synthesis::grape_optimize_seeded(
          problem, static_cast<std::uint64_t>(seed) + r, init_amplitude);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w]() {
        for (int r = w; r < restarts; r += threads)
          results[r] = synthesis::grape_optimize_seeded(
              problem, static_cast<std::uint64_t>(seed) + r, init_amplitude);
      });
    for (auto& th : pool) th.join();
  }
  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (results[r].final_cost > results[best].final_cost) best = r;
  const synthesis::GrapeResult& res = results[best];

  {
    std::vector<std::string> header{"slice"};
    for (int j = 0; j < res.u.rows(); ++j)
      header.push_back("u_" + std::to_string(j + 1));
    io::CsvWriter csv(out + "/u.csv", header);
    for (int k = 0; k < res.u.cols(); ++k) {
      std::vector<double> row{static_cast<double>(k)};
      for (int j = 0; j < res.u.rows(); ++j) row.push_back(res.u(j, k));
      csv.row(row);
    }
  }
  {
    io::CsvWriter csv(out + "/j_history.csv", {"iteration", "J"});
    for (size_t i = 0; i < res.j_history.size(); ++i)
      csv.row({static_cast<double>(i), res.j_history[i]});
  }
  json summary{{"command", "grape"},
               {"converged", res.converged},
               {"final_cost", res.final_cost},
               {"objective_term", res.objective_term},
               {"iterations", res.j_history.size() - 1},
               {"best_restart", best}};
  if (!res.converged) summary["note"] = "max_iters reached; partial result";
  io::write_json_file(out + "/summary.json", summary);
  return kOk;
}

int run_lyapunov(const json& config, const std::string& out) {
  Schema schema{config};
  schema.require("h0", "matrix object");
  schema.require("h1", "matrix object");
  schema.require("target", "matrix object");
  schema.require("rho0", "matrix object");
  const double total_time = schema.require_number("total_time");
  const int n_steps = static_cast<int>(schema.require_integer("n_steps"));
  const double gain = schema.number_or("gain", 1.0);
  if (int rc = schema.finish("lyapunov"); rc != kOk) return rc;

  synthesis::LyapunovDesign design(
      core::DensityMatrix(io::mat_from_json(config.at("target"), "target")),
      io::mat_from_json(config.at("h0"), "h0"),
      io::mat_from_json(config.at("h1"), "h1"), gain);
  core::DensityMatrix rho0(io::mat_from_json(config.at("rho0"), "rho0"));
  auto traj = synthesis::lyapunov_simulate(design, rho0, total_time, n_steps);

  write_state_trajectory(out + "/trajectory.csv", traj.states, traj.dt);
  if (rho0.dim() == 2) write_bloch_trajectory(out + "/bloch.csv", traj.states, traj.dt);
  {
    io::CsvWriter csv(out + "/v.csv", {"t", "V", "u"});
    for (size_t k = 0; k < traj.v.size(); ++k)
      csv.row({static_cast<double>(k) * traj.dt, traj.v[k],
               k < traj.u.size() ? traj.u[k] : traj.u.back()});
  }
  json summary{{"command", "lyapunov"},
               {"final_V", traj.v.back()},
               {"v_nonincreasing",
                [&] {
                  for (size_t k = 1; k < traj.v.size(); ++k)
                    if (traj.v[k] > traj.v[k - 1] + 1e-6) return false;
                  return true;
                }()}};
  io::write_json_file(out + "/summary.json", summary);
  return kOk;
}

int run_dd(const json& config, const std::string& out) {
  Schema schema{config};
  const CMat hs = schema.matrix("hs");
  const CMat he = schema.matrix("he");
  schema.require("couplings", "array");
  const double total_time = schema.require_number("total_time");
  schema.require("k_values", "array of integers");
  schema.require("rho0", "matrix object (joint state)");
  if (int rc = schema.finish("dd"); rc != kOk) return rc;

  synthesis::BipartiteModel model;
  model.hs = hs;
  model.he = he;
  for (const auto& c : config.at("couplings"))
    model.couplings.push_back({io::mat_from_json(c.at("s"), "couplings.s"),
                               io::mat_from_json(c.at("e"), "couplings.e")});

  std::vector<CMat> group;
  if (!config.contains("group") ||
      (config["group"].is_string() && config["group"] == "pauli")) {
    group = synthesis::pauli_group();
  } else {
    for (const auto& g : config.at("group"))
      group.push_back(io::mat_from_json(g, "group"));
  }

  const CMat rho0 = io::mat_from_json(config.at("rho0"), "rho0");

  io::CsvWriter csv(out + "/fidelity_vs_k.csv",
                    {"K", "cycle_time", "fidelity_with_dd", "fidelity_without_dd"});
  for (const auto& kj : config.at("k_values")) {
    const int k = kj.get<int>();
    synthesis::DDProtocol protocol{group, total_time / k, k, model};
    auto samples = synthesis::dd_simulate(protocol, rho0, total_time);
    csv.row({static_cast<double>(k), protocol.cycle_time,
             samples.back().fidelity_with_dd, samples.back().fidelity_without_dd});
  }
  return kOk;
}

int run_fme(const json& config, const std::string& out) {
  Schema schema{config};
  const CMat h = schema.matrix("h");
  const CMat l = schema.matrix("l");
  if (!config.contains("target") && !config.contains("f"))
    schema.errors.push_back("provide either \"target\" (synthesis) or \"f\" "
                            "(explicit feedback Hamiltonian)");
  if (int rc = schema.finish("fme"); rc != kOk) return rc;

  json output{{"command", "fme"}};
  dynamics::LindbladModel closed(CMat::Identity(1, 1) * 0.0, {});
  if (config.contains("target")) {
    core::DensityMatrix target(io::mat_from_json(config.at("target"), "target"));
    feedback::FeedbackDesign design = feedback::synthesize_feedback(target, l, h);
    closed = design.closed_loop;
    output["f"] = io::mat_to_json(design.f);
    output["hc"] = io::mat_to_json(design.hc);
    output["complement_mixing_added"] = design.complement_mixing_added;
  } else {
    const CMat f = io::mat_from_json(config.at("f"), "f");
    const CMat hc = config.contains("hc")
                        ? io::mat_from_json(config.at("hc"), "hc")
                        : CMat::Zero(h.rows(), h.cols()).eval();
    closed = feedback::fme_closed_loop(h, l, f, hc);
    output["f"] = io::mat_to_json(f);
    output["hc"] = io::mat_to_json(hc);
  }
  output["closed_loop"] = {
      {"hamiltonian", io::mat_to_json(closed.hamiltonian())},
      {"noise_ops", json::array({io::mat_to_json(closed.noise_ops().front())})}};
  auto gas = analysis::gas_check(closed);
  output["gas"] = gas.gas;
  output["kernel_dim"] = gas.kernel_dim;
  if (gas.state) output["steady_state"] = io::mat_to_json(gas.state->matrix());
  io::write_json_file(out + "/design.json", output);
  return kOk;
}

feedback::FeedbackLaw parse_law(const std::string& name, Schema& schema) {
  if (name == "none") return feedback::FeedbackLaw::none;
  if (name == "affine") return feedback::FeedbackLaw::affine_bloch;
  if (name == "lyapunov") return feedback::FeedbackLaw::lyapunov;
  if (name == "patched") return feedback::FeedbackLaw::patched;
  schema.errors.push_back("law must be one of none, affine, patched, lyapunov");
  return feedback::FeedbackLaw::none;
}

int run_sme(const json& config, const std::string& out) {
  Schema schema{config};
  const CMat h0 = schema.matrix("h0");
  const CMat h1 = schema.matrix("h1");
  const CMat l = schema.matrix("l");
  schema.require("rho0", "matrix object");
  const double total_time = schema.require_number("total_time");
  const double dt = schema.require_number("dt");
  const auto seed = schema.require_integer("seed");
  const int n_traj = static_cast<int>(schema.integer_or("n_traj", 1));
  const double eta = schema.number_or("eta", 1.0);
  const std::string law_name = schema.string_or("law", "none");
  const feedback::FeedbackLaw law = parse_law(law_name, schema);
  const int n_samples = static_cast<int>(schema.integer_or("n_samples", 10));
  const int save_traj =
      static_cast<int>(schema.integer_or("save_trajectories", 1));
  if ((law == feedback::FeedbackLaw::patched ||
       law == feedback::FeedbackLaw::lyapunov) &&
      !config.contains("target"))
    schema.errors.push_back("law \"" + law_name + "\" requires a \"target\"");
  if (int rc = schema.finish("sme"); rc != kOk) return rc;

  feedback::SMEModel model(h0, h1, l, eta, law);
  if (config.contains("target"))
    model.target = core::DensityMatrix(io::mat_from_json(config.at("target"), "target"));
  model.gain = schema.number_or("gain", 1.0);
  model.gamma = schema.number_or("gamma", 0.45);
  core::DensityMatrix rho0(io::mat_from_json(config.at("rho0"), "rho0"));

  if (dt > model.recommended_dt())
    std::cerr << "warning: dt = " << dt << " exceeds the recommended bound "
              << model.recommended_dt() << " (1e-2 / max(||H||, ||L||^2))\n";

  const int dim = model.dim();
  // Per-trajectory records for the first save_traj trajectories.
  for (int i = 0; i < std::min(save_traj, n_traj); ++i) {
    auto rec = feedback::sme_trajectory(model, rho0, total_time, dt,
                                        static_cast<std::uint64_t>(seed) + i);
    char name[64];
    std::snprintf(name, sizeof(name), "/trajectory_%03d.csv", i);
    if (dim == 2) {
      io::CsvWriter csv(out + name, {"t", "x", "y", "z", "u", "dY"});
      for (size_t k = 0; k < rec.t.size(); ++k) {
        const core::BlochVector b =
            core::bloch_from_density(core::DensityMatrix(rec.states[k]));
        csv.row({rec.t[k], b.x, b.y, b.z, k ? rec.u[k - 1] : 0.0,
                 k ? rec.dy[k - 1] : 0.0});
      }
    } else {
      auto header = state_csv_header(dim);
      header.push_back("u");
      header.push_back("dY");
      io::CsvWriter csv(out + name, header);
      for (size_t k = 0; k < rec.t.size(); ++k) {
        std::vector<double> row{rec.t[k]};
        for (int cj = 0; cj < dim; ++cj)
          for (int ci = 0; ci < dim; ++ci) {
            row.push_back(rec.states[k](ci, cj).real());
            row.push_back(rec.states[k](ci, cj).imag());
          }
        row.push_back(k ? rec.u[k - 1] : 0.0);
        row.push_back(k ? rec.dy[k - 1] : 0.0);
        csv.row(row);
      }
    }
  }

  feedback::EnsembleOptions options;
  options.n_samples = n_samples;
  options.n_threads = thread_budget();
  auto ensemble = feedback::sme_ensemble(model, rho0, total_time, dt, n_traj,
                                         static_cast<std::uint64_t>(seed), options);

  if (dim == 2) {
    io::CsvWriter csv(out + "/ensemble.csv",
                      {"t", "mean_x", "mean_y", "mean_z", "mean_variance"});
    for (size_t s = 0; s < ensemble.times.size(); ++s) {
      const core::BlochVector b = core::bloch_from_density(
          core::DensityMatrix(hermitize(ensemble.mean_states[s])));
      csv.row({ensemble.times[s], b.x, b.y, b.z, ensemble.mean_variance[s]});
    }
  } else {
    auto header = state_csv_header(dim);
    header.push_back("mean_variance");
    io::CsvWriter csv(out + "/ensemble.csv", header);
    for (size_t s = 0; s < ensemble.times.size(); ++s) {
      std::vector<double> row{ensemble.times[s]};
      for (int cj = 0; cj < dim; ++cj)
        for (int ci = 0; ci < dim; ++ci) {
          row.push_back(ensemble.mean_states[s](ci, cj).real());
          row.push_back(ensemble.mean_states[s](ci, cj).imag());
        }
      row.push_back(ensemble.mean_variance[s]);
      csv.row(row);
    }
  }

  int total_clips = 0;
  for (const auto& t : ensemble.trajectories) total_clips += t.clip_events;
  json summary{{"command", "sme"},
               {"n_traj", n_traj},
               {"seed", seed},
               {"dt", dt},
               {"law", law_name},
               {"clip_events_total", total_clips},
               {"dt_warning", ensemble.dt_warning}};
  if (model.target) {
    double mean_overlap = 0;
    for (const auto& t : ensemble.trajectories)
      mean_overlap += (t.final_state * model.target->matrix()).trace().real();
    summary["mean_final_target_overlap"] = mean_overlap / n_traj;
  }
  io::write_json_file(out + "/summary.json", summary);
  return kOk;
}

}  // namespace

int run_slh(const std::string& components_path, const std::string& network_path,
            const std::string& emit, const std::string& out_dir) {
  try {
    if (emit != "slh" && emit != "mme") {
      std::cerr << "validation error: --emit must be \"slh\" or \"mme\"\n";
      return kValidationError;
    }
    const json table_json = io::load_json_file(components_path);
    networks::ComponentTable table;
    for (auto it = table_json.begin(); it != table_json.end(); ++it) {
      const json& c = it.value();
      std::vector<CMat> l;
      for (const auto& op : c.at("l"))
        l.push_back(io::mat_from_json(op, it.key() + ".l"));
      table.emplace(it.key(),
                    networks::SLHTriple(io::mat_from_json(c.at("s"), it.key() + ".s"),
                                        l, io::mat_from_json(c.at("h"), it.key() + ".h")));
    }
    std::ifstream net_in(network_path);
    if (!net_in) throw ValidationError("cannot open network file: " + network_path);
    std::string text((std::istreambuf_iterator<char>(net_in)),
                     std::istreambuf_iterator<char>());
    networks::NetworkExpression expr = networks::parse_network(text);
    networks::SLHTriple g = networks::reduce(expr, table);

    if (emit == "slh") {
      json l = json::array();
      for (const auto& op : g.l) l.push_back(io::mat_to_json(op));
      io::write_json_file(out_dir + "/slh.json",
                          json{{"ports", g.ports()},
                               {"dim", g.dim()},
                               {"s", io::mat_to_json(g.s)},
                               {"l", l},
                               {"h", io::mat_to_json(g.h)},
                               {"network", networks::print_network(expr)}});
    } else {
      dynamics::LindbladModel mme = networks::slh_to_mme(g);
      json noise = json::array();
      for (const auto& op : mme.noise_ops()) noise.push_back(io::mat_to_json(op));
      io::write_json_file(out_dir + "/mme.json",
                          json{{"hamiltonian", io::mat_to_json(mme.hamiltonian())},
                               {"noise_ops", noise}});
    }
    return kOk;
  } catch (const ValidationError& err) {
    std::cerr << "validation error: " << err.what() << "\n";
    return kValidationError;
  } catch (const NumericalError& err) {
    std::cerr << "numerical error: " << err.what() << "\n";
    return kNumericalError;
  }
}

std::string describe(const std::string& command) {
  const std::string mat = "MAT = {\"dim\": N, \"re\": [[..]], \"im\": [[..]]} "
                          "(row-major; \"im\" optional)";
  if (command == "simulate")
    return "simulate: propagate a (controlled) master equation.\n"
           "config fields:\n"
           "  model: {hamiltonian: MAT, noise_ops: [MAT..]} or {hamiltonian: MAT, gks: {matrix: MAT}}\n"
           "  rho0: MAT, total_time: number, n_steps: integer\n"
           "  controls (optional): {hamiltonians: [MAT..], amplitudes: [[..]] (n_controls x n_slices)}\n"
           "artifacts: trajectory.csv (t, re_00, im_00, ... column-stacked), bloch.csv (N=2), summary.json\n"
           "where " + mat + "\n"
           "example:\n" + io::json{
               {"command", "simulate"},
               {"model", {{"hamiltonian", {{"dim", 2}, {"re", {{0.5, 0.0}, {0.0, -0.5}}}}},
                          {"noise_ops", {{{"dim", 2}, {"re", {{0.0, 1.0}, {0.0, 0.0}}}}}}}},
               {"rho0", {{"dim", 2}, {"re", {{0.0, 0.0}, {0.0, 1.0}}}}},
               {"total_time", 5.0}, {"n_steps", 500}}.dump(2) + "\n";
  if (command == "analyze")
    return "analyze: controllability and stability report.\n"
           "config fields:\n"
           "  h0: MAT, h1: MAT\n"
           "  model (optional): LindbladModel for the stability/accessibility section\n"
           "  edge_threshold (optional): coupling-graph threshold\n"
           "artifacts: report.json {controllability: {...}, stability: {...}}\n"
           "where " + mat + "\n";
  if (command == "grape")
    return "grape: gradient optimization of piecewise-constant controls.\n"
           "config fields:\n"
           "  problem: {h0: MAT, controls: [MAT..], total_time: number, n_slices: integer}\n"
           "  objective: {type: \"observable\", matrix: MAT, psi0: VEC} or {type: \"unitary\", matrix: MAT}\n"
           "  fluence_weight: number (default 0), max_iters: integer (default 200)\n"
           "  seed: integer (required), restarts: integer (default 1), init_amplitude: number (default 0.5)\n"
           "artifacts: u.csv (slice,u_1,..), j_history.csv, summary.json\n"
           "where " + mat + "\n";
  if (command == "lyapunov")
    return "lyapunov: closed-loop tracking simulation on the model.\n"
           "config fields: h0, h1, target, rho0: MAT; gain (default 1), total_time, n_steps\n"
           "artifacts: trajectory.csv, bloch.csv (N=2), v.csv (t,V,u), summary.json\n"
           "where " + mat + "\n";
  if (command == "dd")
    return "dd: dynamical-decoupling fidelity sweep over cycle counts.\n"
           "config fields:\n"
           "  hs, he: MAT; couplings: [{s: MAT, e: MAT}..]; rho0: MAT (joint)\n"
           "  group: \"pauli\" or [MAT..]; total_time: number; k_values: [integer..]\n"
           "artifacts: fidelity_vs_k.csv (K, cycle_time, fidelity_with_dd, fidelity_without_dd)\n"
           "where " + mat + "\n";
  if (command == "fme")
    return "fme: Wiseman-Milburn feedback master equation (explicit or synthesized).\n"
           "config fields: h, l: MAT; and either target: MAT (synthesize F, Hc)\n"
           "or f: MAT with optional hc: MAT (explicit closed loop)\n"
           "artifacts: design.json with the closed-loop model and the GAS verdict\n"
           "where " + mat + "\n";
  if (command == "sme")
    return "sme: diffusive stochastic master equation trajectories.\n"
           "config fields:\n"
           "  h0, h1, l, rho0: MAT; eta: (0,1] (default 1)\n"
           "  law: one of \"none\", \"affine\", \"patched\", \"lyapunov\" (default none)\n"
           "  target: MAT (required for patched/lyapunov), gain, gamma\n"
           "  total_time, dt: numbers; n_traj: integer; seed: integer (required)\n"
           "  n_samples (default 10), save_trajectories (default 1)\n"
           "flags --seed, --ntraj, --dt, --law override the config.\n"
           "artifacts: trajectory_XXX.csv (t,x,y,z,u,dY for N=2), ensemble.csv, summary.json\n"
           "where " + mat + "\n";
  if (command == "slh")
    return "slh: reduce a network of (S,L,H) components.\n"
           "flags: --components table.json --network net.txt --emit {slh,mme} --out DIR\n"
           "component table: {\"NAME\": {s: MAT (ports x ports), l: [MAT per port], h: MAT}}\n"
           "grammar: expr := term (';' term)* ; term := atom ('+' atom)* ; atom := NAME | '(' expr ')'\n"
           "';' is series in signal order (left feeds right), '+' is concatenation\n"
           "artifacts: slh.json or mme.json\n"
           "where " + mat + "\n";
  throw ValidationError("unknown command \"" + command + "\"; known commands: "
                        "simulate analyze grape lyapunov dd fme sme slh");
}

int dispatch(const std::string& command, const json& config,
             const std::string& out_dir) {
  if (!config.is_object()) {
    std::cerr << "validation error: config must be a JSON object\n";
    return kValidationError;
  }
  if (config.contains("command") && config["command"] != command) {
    std::cerr << "validation error: config \"command\" field ("
              << config["command"] << ") does not match the subcommand ("
              << command << ")\n";
    return kValidationError;
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "validation error: cannot create output directory " << out_dir
              << "\n";
    return kValidationError;
  }

  try {
    if (command == "simulate") return run_simulate(config, out_dir);
    if (command == "analyze") return run_analyze(config, out_dir);
    if (command == "grape") return run_grape(config, out_dir);
    if (command == "lyapunov") return run_lyapunov(config, out_dir);
    if (command == "dd") return run_dd(config, out_dir);
    if (command == "fme") return run_fme(config, out_dir);
    if (command == "sme") return run_sme(config, out_dir);
    std::cerr << "validation error: unknown command \"" << command << "\"\n";
    return kValidationError;
  } catch (const ValidationError& err) {
    std::cerr << "validation error: " << err.what() << "\n";
    return kValidationError;
  } catch (const NumericalError& err) {
    std::cerr << "numerical error: " << err.what() << "\n";
    io::write_json_file(out_dir + "/diagnostic.json",
                        json{{"command", command}, {"error", err.what()}});
    return kNumericalError;
  }
}

}  // namespace qctl::cli
