#include "ifm/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ifm/composite.hpp"
#include "ifm/protocols.hpp"
#include "ifm/tsvf.hpp"

namespace ifm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ObjectSpec {
  bool present = false;
  Complex t{1.0, 0.0};
};

// --bomb gives an opaque object; an explicit t makes it semi-transparent.
ObjectSpec object_from(const ParamMap& params) {
  ObjectSpec object;
  if (params.has("t")) {
    object.present = true;
    object.t = parse_complex(params.get_string("t"));
  } else if (params.get_bool_or("bomb", false)) {
    object.present = true;
    object.t = Complex{0.0, 0.0};
  }
  return object;
}

ResultTable ev_table(const ParamMap& params) {
  const double r = params.get_real_or("R", 0.5);
  const ObjectSpec object = object_from(params);
  const auto outcome =
      ev_single_shot(r, object.present ? std::optional<Complex>(object.t) : std::nullopt);
  ResultTable table;
  table.columns = {"R", "object", "t_re", "t_im", "D1", "D2", "explosion", "residual"};
  table.rows = {{r, object.present ? 1.0 : 0.0, object.t.real(), object.t.imag(),
                 outcome.prob("D1"), outcome.prob("D2"), outcome.explosion_prob,
                 outcome.residual_prob}};
  return table;
}

ResultTable ev_iterated_table(const ParamMap& params) {
  const double r = params.get_real_or("R", 0.5);
  const auto report = ev_iterated(r);
  const int trials = params.get_int_or("trials", 0);
  ResultTable table;
  table.columns = {"R", "p_success", "p_explosion", "p_inconclusive", "eta"};
  table.rows = {{r, report.p_success, report.p_explosion, report.p_inconclusive,
                 report.efficiency()}};
  if (trials > 0) {
    const auto mc = ev_iterated_monte_carlo(
        r, static_cast<std::uint64_t>(trials),
        static_cast<std::uint64_t>(params.get_int_or("seed", 1)));
    table.columns.insert(table.columns.end(), {"mc_trials", "mc_p_success", "mc_p_explosion"});
    table.rows[0].insert(table.rows[0].end(),
                         {static_cast<double>(mc.trials), mc.p_success, mc.p_explosion});
  }
  return table;
}

ResultTable frontier_table(const ParamMap& params) {
  const auto grid = params.get_grid("R");
  ResultTable table;
  table.columns = {"R", "eta", "p_success", "p_explosion"};
  for (const auto& [r, eta] : efficiency_frontier(grid)) {
    const auto report = ev_iterated(r);
    table.rows.push_back({r, eta, report.p_success, report.p_explosion});
  }
  return table;
}

ResultTable zeno_table(const ParamMap& params) {
  ZenoConfig config;
  config.cycles = params.get_int("N");
  if (params.has("theta")) config.theta = params.get_real("theta");
  const ObjectSpec object = object_from(params);
  config.object_present = object.present;
  config.object_t = object.present ? object.t : Complex{0.0, 0.0};
  const auto result = zeno_ifm(config);

  ResultTable table;
  if (params.get_bool_or("per_cycle", false)) {
    table.columns = {"cycle",   "left_re", "left_im", "right_re",
                     "right_im", "p_left",  "p_right", "absorbed_total"};
    for (const auto& sample : result.trace) {
      table.rows.push_back({static_cast<double>(sample.cycle), sample.left.real(),
                            sample.left.imag(), sample.right.real(), sample.right.imag(),
                            std::norm(sample.left), std::norm(sample.right),
                            sample.absorbed_total});
    }
    return table;
  }
  table.columns = {"N",      "theta",   "object",       "t_re",
                   "t_im",   "p_left",  "p_right",      "p_success",
                   "p_explosion", "p_inconclusive", "eta"};
  table.rows = {{static_cast<double>(config.cycles), config.effective_theta(),
                 object.present ? 1.0 : 0.0, config.object_t.real(), config.object_t.imag(),
                 result.p_left, result.p_right, result.report.p_success,
                 result.report.p_explosion, result.report.p_inconclusive,
                 result.report.efficiency()}};
  return table;
}

ResultTable cavity_table(const ParamMap& params) {
  CavityConfig config;
  config.mirror_reflectivity = params.get_real("r");
  config.round_trips = params.get_int("M");
  config.object_present = params.get_bool_or("bomb", false);
  const auto result = paul_pavicic(config);
  ResultTable table;
  table.columns = {"r", "M", "object", "p_reflect", "p_transmit", "p_absorb", "p_residual"};
  table.rows = {{config.mirror_reflectivity, static_cast<double>(config.round_trips),
                 config.object_present ? 1.0 : 0.0, result.p_reflect, result.p_transmit,
                 result.p_absorb, result.p_residual}};
  return table;
}

ResultTable renninger_table(const ParamMap& params) {
  const int sectors = params.get_int_or("sectors", 8);
  if (sectors < 2) throw std::invalid_argument("need at least two sectors");
  const int covered = params.get_int_or("covered", sectors / 2);
  if (covered < 1 || covered >= sectors) {
    throw std::invalid_argument("covered sector count must be in [1, sectors)");
  }
  std::vector<std::string> labels;
  for (int k = 0; k < sectors; ++k) labels.push_back("sector_" + std::to_string(k));
  const ModeSpace space(labels);
  const PureState before = make_uniform_state(space);
  std::vector<std::string> covered_modes(labels.begin(), labels.begin() + covered);
  const auto update = negative_result_update(before, covered_modes);

  ResultTable table;
  table.label_column = "sector";
  table.columns = {"covered", "prob_before", "prob_after", "p_null"};
  for (int k = 0; k < sectors; ++k) {
    table.row_labels.push_back(labels[static_cast<std::size_t>(k)]);
    table.rows.push_back({k < covered ? 1.0 : 0.0,
                          std::norm(before.amplitude(static_cast<std::size_t>(k))),
                          std::norm(update.state.amplitude(static_cast<std::size_t>(k))),
                          update.p_null});
  }
  return table;
}

ResultTable dicke_table(const ParamMap& params) {
  const auto result = dicke_energy_shift(params.get_int_or("n_basis", 50));
  ResultTable table;
  table.columns = {"n_basis", "e_before", "e_after", "captured_norm", "converged"};
  table.rows = {{static_cast<double>(result.n_basis), result.e_before, result.e_after,
                 result.captured_norm, result.converged ? 1.0 : 0.0}};
  return table;
}

ResultTable irradiation_table(const ParamMap& params) {
  const std::string backend = params.get_string_or("backend", "ev");
  const Complex t = params.get_complex_or("t", Complex{0.0, 0.0});
  IrradiationReport report;
  double r = kNaN;
  double n = kNaN;
  if (backend == "ev") {
    r = params.get_real_or("R", 0.5);
    report = irradiation_metric_ev(r, t);
  } else if (backend == "zeno") {
    n = static_cast<double>(params.get_int_or("N", 100));
    report = irradiation_metric_zeno(static_cast<int>(n), t);
  } else {
    throw std::invalid_argument("irradiation backend must be 'ev' or 'zeno'");
  }
  ResultTable table;
  table.label_column = "backend";
  table.row_labels = {backend};
  table.columns = {"R",           "N",           "t_re",
                   "t_im",        "p_absorbed",  "p_detection",
                   "absorbed_per_detection", "defined"};
  table.rows = {{r, n, t.real(), t.imag(), report.p_absorbed, report.p_detection,
                 report.absorbed_per_detection, report.defined ? 1.0 : 0.0}};
  return table;
}

ResultTable outcome_table(const OutcomeDistribution& outcome) {
  ResultTable table;
  table.label_column = "outcome";
  table.columns = {"probability"};
  for (const auto& [name, p] : outcome.detector_probs) {
    table.row_labels.push_back(name);
    table.rows.push_back({p});
  }
  table.row_labels.push_back("explosion");
  table.rows.push_back({outcome.explosion_prob});
  table.row_labels.push_back("residual");
  table.rows.push_back({outcome.residual_prob});
  return table;
}

ResultTable circuit_table(const std::string& scenario_text) {
  if (is_composite_scenario(scenario_text)) {
    const auto scenario = parse_composite_scenario(scenario_text);
    const auto input = tensor(make_state(scenario.circuit.space_a(), scenario.input_a),
                              make_state(scenario.circuit.space_b(), scenario.input_b));
    const auto run = run_composite(scenario.circuit, input);
    const auto joint =
        measure_joint(run.final, scenario.circuit.detectors_a(), scenario.circuit.detectors_b());
    ResultTable table;
    table.label_column = "outcome";
    table.columns = {"probability"};
    for (const auto& [pair, p] : joint.probs) {
      table.row_labels.push_back(pair.first + "/" + pair.second);
      table.rows.push_back({p});
    }
    table.row_labels.push_back("explosion");
    table.rows.push_back({joint.explosion_prob});
    table.row_labels.push_back("residual");
    table.rows.push_back({joint.residual_prob});
    return table;
  }
  const auto scenario = parse_circuit_scenario(scenario_text);
  const auto detectors = scenario.circuit.detectors();
  if (!detectors) {
    throw std::invalid_argument("scenario has no detect step to measure");
  }
  const auto run = run_circuit(scenario.circuit, make_state(scenario.circuit.space(), scenario.input));
  return outcome_table(measure(run.final, *detectors));
}

}  // namespace

std::size_t ResultTable::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) {
    throw std::invalid_argument("no column named '" + name + "'");
  }
  return static_cast<std::size_t>(it - columns.begin());
}

double ResultTable::cell(std::size_t row, const std::string& column) const {
  return rows.at(row).at(column_index(column));
}

ResultTable run_protocol(const std::string& protocol, const std::string& params_text) {
  if (protocol == "circuit") {
    return circuit_table(params_text);
  }
  if (protocol == "nested") {
    return run_nested(params_text);
  }
  const ParamMap params = ParamMap::parse(params_text);
  if (protocol == "ev") return ev_table(params);
  if (protocol == "ev_iterated") return ev_iterated_table(params);
  if (protocol == "frontier") return frontier_table(params);
  if (protocol == "zeno") return zeno_table(params);
  if (protocol == "cavity") return cavity_table(params);
  if (protocol == "renninger") return renninger_table(params);
  if (protocol == "dicke") return dicke_table(params);
  if (protocol == "irradiation") return irradiation_table(params);
  throw UnknownProtocolError("unknown protocol '" + protocol + "'");
}

ResultTable sweep_protocol(const std::string& protocol, const std::string& params_text) {
  static const std::vector<std::string> sweepable = {"ev",     "ev_iterated", "zeno",
                                                     "cavity", "dicke",       "irradiation"};
  if (std::find(sweepable.begin(), sweepable.end(), protocol) == sweepable.end()) {
    if (protocol == "frontier" || protocol == "renninger" || protocol == "circuit" ||
        protocol == "nested" || protocol == "trace") {
      throw std::invalid_argument("protocol '" + protocol + "' does not support sweeps");
    }
    throw UnknownProtocolError("unknown protocol '" + protocol + "'");
  }

  const ParamMap params = ParamMap::parse(params_text);
  std::vector<std::string> grid_keys;
  for (const auto& key : params.keys()) {
    if (looks_like_grid(params.get_string(key))) grid_keys.push_back(key);
  }
  if (grid_keys.size() != 1) {
    throw std::invalid_argument("sweep needs exactly one grid parameter (got " +
                                std::to_string(grid_keys.size()) + ")");
  }
  const std::string& grid_key = grid_keys.front();
  const auto grid = params.get_grid(grid_key);
  if (grid.empty()) {
    throw std::invalid_argument("sweep grid is empty");
  }

  ResultTable table;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    ParamMap point = params;
    point.set(grid_key, format_value(grid[k]));
    std::string point_text;
    for (const auto& key : point.keys()) {
      point_text += key + ": " + point.get_string(key) + "\n";
    }
    ResultTable row = run_protocol(protocol, point_text);
    if (row.rows.size() != 1) {
      throw std::invalid_argument("swept protocol produced " + std::to_string(row.rows.size()) +
                                  " rows per point");
    }
    if (k == 0) {
      table.columns = row.columns;
      table.label_column = row.label_column;
    }
    table.rows.push_back(row.rows[0]);
    if (!row.row_labels.empty()) table.row_labels.push_back(row.row_labels[0]);
  }
  return table;
}

ResultTable run_trace(const std::string& scenario_text) {
  const auto scenario = parse_circuit_scenario(scenario_text);
  if (!scenario.postselect) {
    throw std::invalid_argument("trace needs a 'postselect:' line naming a detector");
  }
  const auto map = trace_map(scenario.circuit, make_state(scenario.circuit.space(), scenario.input),
                             *scenario.postselect);
  ResultTable table;
  table.label_column = "mode";
  for (std::size_t c = 0; c < map.cuts; ++c) table.columns.push_back("step_" + std::to_string(c));
  for (std::size_t m = 0; m < map.space.size(); ++m) {
    table.row_labels.push_back(map.space.label(m));
    std::vector<double> row;
    for (std::size_t c = 0; c < map.cuts; ++c) row.push_back(map.at(m, c));
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_nested(const std::string& params_text) {
  const ParamMap params = ParamMap::parse(params_text);
  const double r = params.get_real_or("R", 0.5);
  const bool coupled = params.get_bool_or("coupled", true);
  const auto report = nested_ifm(r, coupled);

  ResultTable table;
  table.label_column = "quantity";
  table.columns = {"value"};
  const auto add = [&table](const std::string& label, double value) {
    table.row_labels.push_back(label);
    table.rows.push_back({value});
  };
  for (const auto& [pair, p] : report.joint.probs) {
    add("p_" + pair.first + "_" + pair.second, p);
  }
  add("p_explosion", report.joint.explosion_prob);
  add("p_residual", report.joint.residual_prob);
  add("p_both_dark", report.p_both_dark);
  add("abl_object_given_dark", report.abl_object);
  add("abl_photon_given_dark", report.abl_photon);
  add("abl_both_given_dark", report.abl_both);
  add("R", report.reflectivity);
  add("coupled", report.coupled ? 1.0 : 0.0);
  return table;
}

}  // namespace ifm
