#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ifm/composite.hpp"
#include "ifm/elements.hpp"

namespace ifm {

/// Malformed scenario or parameter text.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

Complex parse_complex(const std::string& token);
std::string format_complex(Complex value);

/// Grid expressions: "0.5" -> {0.5}; "0.1,0.2" -> list; "1..5" -> unit-step
/// range; "0.1..0.9:0.2" -> stepped range.
std::vector<double> parse_grid(const std::string& token);
bool looks_like_grid(const std::string& token);

/// Ordered key/value parameters, parsed from "key: value" lines (comments
/// start with '#'). Later assignments override earlier ones, which is how
/// command-line flags override config-file values.
class ParamMap {
public:
  static ParamMap parse(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  const std::vector<std::string>& keys() const { return order_; }

  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& key) const;
  double get_real_or(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int_or(const std::string& key, int fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  Complex get_complex_or(const std::string& key, Complex fallback) const;
  std::vector<double> get_grid(const std::string& key) const;

private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
};

// ---------------------------------------------------------------------------
// Scenario files.
//
//   modes: src up low out
//   input: src
//   step: bs id=BS1 a=src b=low R=0.5
//   step: mirror id=M mode=low | phase id=P mode=up phi=1.5707963267948966
//   step: none
//   step: absorber id=OBJ mode=low t=0
//   step: detect id=DET D1=out D2=up
//   postselect: D2
//
// A second particle turns the file into a composite scenario:
//
//   particle: a
//   ...circuit lines...
//   particle: b
//   ...circuit lines...
//   overlap: step=3 a=low b=low
//   postselect: D2 D2
// ---------------------------------------------------------------------------

struct CircuitScenario {
  Circuit circuit;
  std::string input;
  std::optional<std::string> postselect;
};

struct CompositeScenario {
  CompositeCircuit circuit;
  std::string input_a;
  std::string input_b;
  std::optional<std::pair<std::string, std::string>> postselect;
};

bool is_composite_scenario(const std::string& text);

CircuitScenario parse_circuit_scenario(const std::string& text);
CompositeScenario parse_composite_scenario(const std::string& text);

/// Canonical text form; parsing it back reproduces the same scenario.
std::string to_text(const CircuitScenario& scenario);
std::string to_text(const CompositeScenario& scenario);

}  // namespace ifm
