#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ifm/ifm_c.h"
#include "table_io.hpp"

namespace {

constexpr int kExitUsage = 2;        // bad parameters, malformed config, unknown protocol
constexpr int kExitConditioning = 3; // impossible post-selection and friends
constexpr int kExitIo = 4;
constexpr int kExitInternal = 5;

struct TableDeleter {
  void operator()(ifm_table* table) const { ifm_table_free(table); }
};
using TablePtr = std::unique_ptr<ifm_table, TableDeleter>;

int exit_code_for(int status) {
  switch (status) {
    case IFM_ERR_CONDITIONING:
      return kExitConditioning;
    case IFM_ERR_INTERNAL:
      return kExitInternal;
    default:
      return kExitUsage;
  }
}

[[noreturn]] void die(int code, const std::string& message) {
  std::cerr << "error: " << message << "\n";
  std::exit(code);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(kExitIo, "cannot read file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("IFM_OUTPUT_DIR")) {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p;
}

void write_file(const std::string& path, const std::string& content) {
  const auto resolved = resolve_output(path);
  std::ofstream out(resolved, std::ios::binary);
  if (!out) die(kExitIo, "cannot write '" + resolved.string() + "'");
  out << content;
  if (!out) die(kExitIo, "write failed for '" + resolved.string() + "'");
}

struct OutputOptions {
  std::string path;    // empty: stdout
  std::string format;  // csv, text, svg; empty: default
  bool format_given = false;
};

std::string render(const ifm_table* table, const std::string& format) {
  if (format == "csv") return ifm_cli::table_to_csv(table);
  if (format == "text") return ifm_cli::table_to_text(table);
  if (format == "svg") return ifm_cli::table_to_svg(table);
  die(kExitUsage, "unknown format '" + format + "' (expected csv, text, or svg)");
}

void emit(const ifm_table* table, const OutputOptions& output, const std::string& default_fmt) {
  const std::string format = output.format.empty() ? default_fmt : output.format;
  if (!output.path.empty()) {
    try {
      write_file(output.path, render(table, format));
    } catch (const std::runtime_error& e) {
      die(kExitUsage, e.what());
    }
  } else if (output.format_given) {
    try {
      std::cout << render(table, format);
    } catch (const std::runtime_error& e) {
      die(kExitUsage, e.what());
    }
  }
}

// Parameter flags shared by run and sweep. Values are kept as strings so the
// library can parse grids and complex numbers itself.
struct ParamFlags {
  std::vector<std::pair<std::string, std::string>> values;  // key -> raw value
  bool bomb = false;
  bool per_cycle = false;

  std::string to_text() const {
    std::string text;
    for (const auto& [key, value] : values) text += key + ": " + value + "\n";
    if (bomb) text += "bomb: true\n";
    if (per_cycle) text += "per_cycle: true\n";
    return text;
  }
};

void add_param_flags(CLI::App* cmd, ParamFlags& flags) {
  static const std::vector<std::pair<std::string, std::string>> options = {
      {"--R", "first-splitter reflectivity (or grid, e.g. 0.1,0.25,0.5)"},
      {"--N", "cycle count (or grid, e.g. 1..200)"},
      {"--t", "object transmission amplitude, complex (e.g. 0.3+0.1i)"},
      {"--M", "cavity round-trip budget"},
      {"--r", "cavity mirror amplitude reflectivity"},
      {"--theta", "coupling angle override (radians)"},
      {"--sectors", "total angular sectors"},
      {"--covered", "sectors covered by the detector"},
      {"--n-basis", "energy levels kept in the box expansion"},
      {"--backend", "irradiation backend: ev or zeno"},
      {"--trials", "monte-carlo trial count"},
      {"--seed", "monte-carlo seed"},
  };
  for (const auto& [flag, help] : options) {
    std::string key = flag.substr(2);
    if (key == "n-basis") key = "n_basis";
    cmd->add_option_function<std::string>(
        flag,
        [&flags, key](const std::string& value) { flags.values.push_back({key, value}); },
        help);
  }
  cmd->add_flag("--bomb", flags.bomb, "place an opaque object");
  cmd->add_flag("--per-cycle", flags.per_cycle, "emit the per-cycle amplitude trace (zeno)");
}

TablePtr must(int status, ifm_table* raw) {
  if (status != IFM_OK) {
    die(exit_code_for(status), ifm_last_error());
  }
  return TablePtr(raw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-photon interrogation protocols: interferometer runs, "
               "two-state trace maps, and efficiency studies"};
  app.require_subcommand(1);

  // --- run ---------------------------------------------------------------
  auto* run = app.add_subcommand("run", "run one protocol configuration");
  std::string run_protocol_name;
  std::string run_config;
  ParamFlags run_flags;
  OutputOptions run_output;
  run->add_option("protocol", run_protocol_name,
                  "ev, ev_iterated, frontier, zeno, cavity, renninger, dicke, irradiation, "
                  "circuit, nested");
  run->add_option("--config", run_config, "scenario/parameter file; flags override its values");
  add_param_flags(run, run_flags);
  run->add_option("-o,--output", run_output.path, "write the result table to this path");
  run->add_option("--format", run_output.format, "csv, text, or svg")
      ->each([&run_output](const std::string&) { run_output.format_given = true; });

  // --- sweep -------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "run a protocol along a parameter grid");
  std::string sweep_protocol_name;
  std::string sweep_config;
  ParamFlags sweep_flags;
  OutputOptions sweep_output;
  sweep->add_option("protocol", sweep_protocol_name, "protocol to sweep")->required();
  sweep->add_option("--config", sweep_config, "parameter file; flags override its values");
  add_param_flags(sweep, sweep_flags);
  sweep->add_option("-o,--output", sweep_output.path, "write the sweep table to this path");
  sweep->add_option("--format", sweep_output.format, "csv, text, or svg")
      ->each([&sweep_output](const std::string&) { sweep_output.format_given = true; });

  // --- trace -------------------------------------------------------------
  auto* trace = app.add_subcommand("trace", "two-state trace map of a circuit scenario");
  std::string trace_file;
  std::string trace_postselect;
  OutputOptions trace_output;
  trace->add_option("scenario", trace_file, "scenario file")->required();
  trace->add_option("--postselect", trace_postselect, "override the post-selected detector");
  trace->add_option("-o,--output", trace_output.path, "write the trace grid to this path");
  trace->add_option("--format", trace_output.format, "csv, text, or svg")
      ->each([&trace_output](const std::string&) { trace_output.format_given = true; });

  // --- nested ------------------------------------------------------------
  auto* nested = app.add_subcommand("nested", "paired interferometers sharing a working area");
  std::string nested_r = "0.5";
  bool nested_uncoupled = false;
  OutputOptions nested_output;
  nested->add_option("--R", nested_r, "splitter reflectivity for both interferometers");
  nested->add_flag("--uncoupled", nested_uncoupled, "disable the coincidence coupling");
  nested->add_option("-o,--output", nested_output.path, "write the report to this path");
  nested->add_option("--format", nested_output.format, "csv, text, or svg")
      ->each([&nested_output](const std::string&) { nested_output.format_given = true; });

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    std::string params;
    if (!run_config.empty()) params += read_file(run_config);
    params += run_flags.to_text();
    std::string protocol = run_protocol_name;
    if (protocol.empty()) {
      // allow the config file to name the protocol
      std::istringstream is(params);
      std::string line;
      while (std::getline(is, line)) {
        const auto pos = line.find("protocol:");
        if (pos != std::string::npos) {
          protocol = line.substr(pos + 9);
          while (!protocol.empty() && protocol.front() == ' ') protocol.erase(0, 1);
          break;
        }
      }
      if (protocol.empty()) {
        die(kExitUsage, "no protocol given (positional argument or 'protocol:' in the config)");
      }
    }
    ifm_table* raw = nullptr;
    const int status = ifm_run_protocol(protocol.c_str(), params.c_str(), &raw);
    const auto table = must(status, raw);
    std::cout << ifm_cli::summary_line(protocol, table.get()) << "\n";
    emit(table.get(), run_output, "csv");
    return 0;
  }

  if (sweep->parsed()) {
    std::string params;
    if (!sweep_config.empty()) params += read_file(sweep_config);
    params += sweep_flags.to_text();
    ifm_table* raw = nullptr;
    const int status = ifm_sweep_protocol(sweep_protocol_name.c_str(), params.c_str(), &raw);
    const auto table = must(status, raw);
    std::cout << ifm_cli::summary_line("sweep " + sweep_protocol_name, table.get()) << "\n";
    if (sweep_output.path.empty() && !sweep_output.format_given) {
      std::cout << ifm_cli::table_to_csv(table.get());
    } else {
      emit(table.get(), sweep_output, "csv");
    }
    return 0;
  }

  if (trace->parsed()) {
    std::string scenario = read_file(trace_file);
    if (!trace_postselect.empty()) scenario += "\npostselect: " + trace_postselect + "\n";
    ifm_table* raw = nullptr;
    const int status = ifm_run_trace(scenario.c_str(), &raw);
    const auto table = must(status, raw);
    if (trace_output.path.empty() && !trace_output.format_given) {
      std::cout << ifm_cli::table_to_csv(table.get());
    } else {
      emit(table.get(), trace_output, "csv");
    }
    return 0;
  }

  if (nested->parsed()) {
    std::string params = "R: " + nested_r + "\n";
    if (nested_uncoupled) params += "coupled: false\n";
    ifm_table* raw = nullptr;
    const int status = ifm_run_nested(params.c_str(), &raw);
    const auto table = must(status, raw);
    std::cout << ifm_cli::summary_line("nested", table.get()) << "\n";
    emit(table.get(), nested_output, "csv");
    return 0;
  }

  return 0;
}
