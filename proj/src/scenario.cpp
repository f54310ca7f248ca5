#include "ifm/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ifm {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (const char c : s) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_real(const std::string& token, const std::string& context) {
  try {
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw ParseError(context + ": cannot parse number '" + token + "'");
  }
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

// key=value pairs after the element kind token
std::map<std::string, std::string> parse_pairs(const std::vector<std::string>& toks,
                                               std::size_t from, const std::string& context) {
  std::map<std::string, std::string> pairs;
  for (std::size_t i = from; i < toks.size(); ++i) {
    const auto eq = toks[i].find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParseError(context + ": expected key=value, got '" + toks[i] + "'");
    }
    pairs[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
  }
  return pairs;
}

std::string take(std::map<std::string, std::string>& pairs, const std::string& key,
                 const std::string& context) {
  const auto it = pairs.find(key);
  if (it == pairs.end()) {
    throw ParseError(context + ": missing '" + key + "='");
  }
  std::string value = it->second;
  pairs.erase(it);
  return value;
}

OpticalElement parse_element(const std::string& text, int step_index, int position) {
  const std::string context = "step " + std::to_string(step_index);
  auto toks = tokens(text);
  if (toks.empty()) {
    throw ParseError(context + ": empty element");
  }
  const std::string kind = toks[0];
  auto pairs = parse_pairs(toks, 1, context);
  std::string id;
  if (const auto it = pairs.find("id"); it != pairs.end()) {
    id = it->second;
    pairs.erase(it);
  } else {
    id = "e" + std::to_string(step_index) + "_" + std::to_string(position);
  }

  OpticalElement element;
  element.id = id;
  if (kind == "bs") {
    BeamSplitter bs;
    bs.mode_a = take(pairs, "a", context);
    bs.mode_b = take(pairs, "b", context);
    bs.reflectivity = parse_real(take(pairs, "R", context), context);
    element.kind = bs;
  } else if (kind == "mirror") {
    element.kind = Mirror{take(pairs, "mode", context)};
  } else if (kind == "phase") {
    PhaseShift ps;
    ps.mode = take(pairs, "mode", context);
    ps.phase = parse_real(take(pairs, "phi", context), context);
    element.kind = ps;
  } else if (kind == "absorber") {
    Absorber ab;
    ab.mode = take(pairs, "mode", context);
    ab.transmission = parse_complex(take(pairs, "t", context));
    element.kind = ab;
  } else if (kind == "detect") {
    DetectorSet det;
    for (const auto& [name, mode] : pairs) det.monitors[name] = mode;
    pairs.clear();
    element.kind = det;
  } else {
    throw ParseError(context + ": unknown element kind '" + kind + "'");
  }
  if (!pairs.empty()) {
    throw ParseError(context + ": unexpected key '" + pairs.begin()->first + "'");
  }
  return element;
}

std::vector<OpticalElement> parse_step(const std::string& value, int step_index) {
  if (trim(value) == "none") return {};
  std::vector<OpticalElement> elements;
  int position = 0;
  for (const auto& part : split(value, '|')) {
    elements.push_back(parse_element(trim(part), step_index, position++));
  }
  return elements;
}

std::string element_to_text(const OpticalElement& element) {
  std::ostringstream os;
  std::visit(
      [&](const auto& kind) {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          os << "bs id=" << element.id << " a=" << kind.mode_a << " b=" << kind.mode_b
             << " R=" << format_real(kind.reflectivity);
        } else if constexpr (std::is_same_v<T, Mirror>) {
          os << "mirror id=" << element.id << " mode=" << kind.mode;
        } else if constexpr (std::is_same_v<T, PhaseShift>) {
          os << "phase id=" << element.id << " mode=" << kind.mode
             << " phi=" << format_real(kind.phase);
        } else if constexpr (std::is_same_v<T, Absorber>) {
          os << "absorber id=" << element.id << " mode=" << kind.mode
             << " t=" << format_complex(kind.transmission);
        } else if constexpr (std::is_same_v<T, DetectorSet>) {
          os << "detect id=" << element.id;
          for (const auto& [name, mode] : kind.monitors) os << ' ' << name << '=' << mode;
        }
      },
      element.kind);
  return os.str();
}

struct RawLine {
  std::string key;
  std::string value;
  int number = 0;
};

std::vector<RawLine> raw_lines(const std::string& text) {
  std::vector<RawLine> lines;
  int number = 0;
  for (const auto& raw : split(text, '\n')) {
    ++number;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw ParseError("line " + std::to_string(number) + ": expected 'key: value'");
    }
    lines.push_back(RawLine{trim(line.substr(0, colon)), trim(line.substr(colon + 1)), number});
  }
  return lines;
}

struct ParticleBlock {
  std::vector<std::string> modes;
  std::string input;
  std::vector<std::vector<OpticalElement>> steps;
};

void feed_particle(ParticleBlock& block, const RawLine& line) {
  if (line.key == "modes") {
    block.modes = tokens(line.value);
  } else if (line.key == "input") {
    block.input = line.value;
  } else if (line.key == "step") {
    block.steps.push_back(parse_step(line.value, static_cast<int>(block.steps.size())));
  } else {
    throw ParseError("line " + std::to_string(line.number) + ": unknown key '" + line.key + "'");
  }
}

Circuit build_particle_circuit(const ParticleBlock& block, const std::string& which) {
  if (block.modes.empty()) {
    throw ParseError("scenario " + which + ": missing 'modes:' line");
  }
  if (block.input.empty()) {
    throw ParseError("scenario " + which + ": missing 'input:' line");
  }
  Circuit circuit(ModeSpace(block.modes), block.steps);
  if (!circuit.space().contains(block.input)) {
    throw ParseError("scenario " + which + ": input mode '" + block.input + "' not declared");
  }
  return circuit;
}

}  // namespace

Complex parse_complex(const std::string& token) {
  const std::string s = trim(token);
  if (s.empty()) throw ParseError("empty complex number");
  // forms: "a", "bi", "a+bi", "a-bi"
  if (s.back() == 'i' || s.back() == 'I') {
    const std::string body = s.substr(0, s.size() - 1);
    // find the split between real and imaginary parts (a sign not in position
    // 0 and not following an exponent marker)
    for (std::size_t k = body.size(); k-- > 1;) {
      const char c = body[k];
      if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        const double re = parse_real(body.substr(0, k), "complex");
        std::string imag = body.substr(k);
        if (imag == "+" || imag == "-") imag += "1";
        return Complex{re, parse_real(imag, "complex")};
      }
    }
    std::string imag = body;
    if (imag.empty() || imag == "+" || imag == "-") imag += "1";
    return Complex{0.0, parse_real(imag, "complex")};
  }
  return Complex{parse_real(s, "complex"), 0.0};
}

std::string format_complex(Complex value) {
  if (value.imag() == 0.0) return format_real(value.real());
  if (value.real() == 0.0) return format_real(value.imag()) + "i";
  const std::string sign = value.imag() < 0.0 ? "" : "+";
  return format_real(value.real()) + sign + format_real(value.imag()) + "i";
}

bool looks_like_grid(const std::string& token) {
  return token.find("..") != std::string::npos || token.find(',') != std::string::npos;
}

std::vector<double> parse_grid(const std::string& token) {
  const std::string s = trim(token);
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const std::string from = s.substr(0, dots);
    std::string rest = s.substr(dots + 2);
    double step = 1.0;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
      step = parse_real(rest.substr(colon + 1), "grid");
      rest = rest.substr(0, colon);
    }
    const double start = parse_real(from, "grid");
    const double stop = parse_real(rest, "grid");
    if (!(step > 0.0)) throw ParseError("grid step must be positive");
    if (stop < start) throw ParseError("grid end below start");
    std::vector<double> values;
    for (int k = 0;; ++k) {
      const double v = start + step * k;
      if (v > stop + step * 1e-9) break;
      values.push_back(v);
    }
    return values;
  }
  std::vector<double> values;
  for (const auto& part : split(s, ',')) {
    const std::string item = trim(part);
    if (item.empty()) throw ParseError("empty grid entry in '" + s + "'");
    values.push_back(parse_real(item, "grid"));
  }
  return values;
}

ParamMap ParamMap::parse(const std::string& text) {
  ParamMap map;
  for (const auto& line : raw_lines(text)) {
    map.set(line.key, line.value);
  }
  return map;
}

void ParamMap::set(const std::string& key, const std::string& value) {
  if (values_.find(key) == values_.end()) order_.push_back(key);
  values_[key] = value;
}

bool ParamMap::has(const std::string& key) const { return values_.count(key) > 0; }

std::string ParamMap::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ParseError("missing parameter '" + key + "'");
  return it->second;
}

std::string ParamMap::get_string_or(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ParamMap::get_real(const std::string& key) const {
  return parse_real(get_string(key), "parameter '" + key + "'");
}

double ParamMap::get_real_or(const std::string& key, double fallback) const {
  return has(key) ? get_real(key) : fallback;
}

int ParamMap::get_int(const std::string& key) const {
  const double v = get_real(key);
  const double rounded = std::round(v);
  if (std::abs(v - rounded) > 1e-9) {
    throw ParseError("parameter '" + key + "' must be an integer");
  }
  return static_cast<int>(rounded);
}

int ParamMap::get_int_or(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool ParamMap::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string v = get_string(key);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParseError("parameter '" + key + "' is not a boolean: '" + v + "'");
}

Complex ParamMap::get_complex_or(const std::string& key, Complex fallback) const {
  return has(key) ? parse_complex(get_string(key)) : fallback;
}

std::vector<double> ParamMap::get_grid(const std::string& key) const {
  return parse_grid(get_string(key));
}

bool is_composite_scenario(const std::string& text) {
  for (const auto& line : raw_lines(text)) {
    if (line.key == "particle") return true;
  }
  return false;
}

CircuitScenario parse_circuit_scenario(const std::string& text) {
  ParticleBlock block;
  std::optional<std::string> postselect;
  for (const auto& line : raw_lines(text)) {
    if (line.key == "postselect") {
      postselect = line.value;
    } else if (line.key == "particle" || line.key == "overlap") {
      throw ParseError("line " + std::to_string(line.number) +
                       ": composite scenario keys in a single-particle scenario");
    } else {
      feed_particle(block, line);
    }
  }
  CircuitScenario scenario{build_particle_circuit(block, "circuit"), block.input, postselect};
  if (scenario.postselect) {
    const auto detectors = scenario.circuit.detectors();
    if (!detectors || detectors->monitors.count(*scenario.postselect) == 0) {
      throw ParseError("postselect target '" + *scenario.postselect + "' is not a detector");
    }
  }
  return scenario;
}

CompositeScenario parse_composite_scenario(const std::string& text) {
  ParticleBlock block_a;
  ParticleBlock block_b;
  ParticleBlock* current = nullptr;
  std::vector<std::pair<int, std::pair<std::string, std::string>>> overlaps;
  std::optional<std::pair<std::string, std::string>> postselect;

  for (const auto& line : raw_lines(text)) {
    if (line.key == "particle") {
      if (line.value == "a") {
        current = &block_a;
      } else if (line.value == "b") {
        current = &block_b;
      } else {
        throw ParseError("line " + std::to_string(line.number) + ": particle must be 'a' or 'b'");
      }
    } else if (line.key == "overlap") {
      auto pairs = parse_pairs(tokens(line.value), 0, "overlap");
      const int step = static_cast<int>(parse_real(take(pairs, "step", "overlap"), "overlap"));
      const std::string ma = take(pairs, "a", "overlap");
      const std::string mb = take(pairs, "b", "overlap");
      if (!pairs.empty()) {
        throw ParseError("overlap: unexpected key '" + pairs.begin()->first + "'");
      }
      overlaps.push_back({step, {ma, mb}});
    } else if (line.key == "postselect") {
      const auto toks = tokens(line.value);
      if (toks.size() != 2) {
        throw ParseError("composite postselect needs two detector names");
      }
      postselect = {toks[0], toks[1]};
    } else {
      if (current == nullptr) {
        throw ParseError("line " + std::to_string(line.number) +
                         ": expected 'particle: a' before circuit lines");
      }
      feed_particle(*current, line);
    }
  }

  Circuit circuit_a = build_particle_circuit(block_a, "particle a");
  Circuit circuit_b = build_particle_circuit(block_b, "particle b");
  const auto det_a = circuit_a.detectors();
  const auto det_b = circuit_b.detectors();
  if (!det_a || !det_b) {
    throw ParseError("both particles need a detect step");
  }

  const std::size_t count = std::max(circuit_a.step_count(), circuit_b.step_count());
  std::vector<CompositeStep> steps(count);
  for (std::size_t s = 0; s < count; ++s) {
    if (s < circuit_a.step_count()) steps[s].a_elements = circuit_a.steps()[s];
    if (s < circuit_b.step_count()) steps[s].b_elements = circuit_b.steps()[s];
  }
  for (const auto& [step, pair] : overlaps) {
    if (step < 0 || static_cast<std::size_t>(step) >= count) {
      throw ParseError("overlap step " + std::to_string(step) + " beyond circuit end");
    }
    steps[static_cast<std::size_t>(step)].coincidences.push_back(pair);
  }

  CompositeScenario scenario{
      CompositeCircuit(circuit_a.space(), circuit_b.space(), std::move(steps), *det_a, *det_b),
      block_a.input, block_b.input, postselect};
  if (postselect) {
    if (det_a->monitors.count(postselect->first) == 0 ||
        det_b->monitors.count(postselect->second) == 0) {
      throw ParseError("composite postselect names an unknown detector");
    }
  }
  return scenario;
}

namespace {

void write_particle(std::ostringstream& os, const ModeSpace& space, const std::string& input,
                    const std::vector<std::vector<OpticalElement>>& steps) {
  os << "modes:";
  for (const auto& label : space.labels()) os << ' ' << label;
  os << "\ninput: " << input << "\n";
  for (const auto& step : steps) {
    os << "step: ";
    if (step.empty()) {
      os << "none";
    } else {
      for (std::size_t k = 0; k < step.size(); ++k) {
        if (k > 0) os << " | ";
        os << element_to_text(step[k]);
      }
    }
    os << "\n";
  }
}

}  // namespace

std::string to_text(const CircuitScenario& scenario) {
  std::ostringstream os;
  write_particle(os, scenario.circuit.space(), scenario.input, scenario.circuit.steps());
  if (scenario.postselect) os << "postselect: " << *scenario.postselect << "\n";
  return os.str();
}

std::string to_text(const CompositeScenario& scenario) {
  std::ostringstream os;
  std::vector<std::vector<OpticalElement>> steps_a;
  std::vector<std::vector<OpticalElement>> steps_b;
  for (const auto& step : scenario.circuit.steps()) {
    steps_a.push_back(step.a_elements);
    steps_b.push_back(step.b_elements);
  }
  os << "particle: a\n";
  write_particle(os, scenario.circuit.space_a(), scenario.input_a, steps_a);
  os << "particle: b\n";
  write_particle(os, scenario.circuit.space_b(), scenario.input_b, steps_b);
  for (std::size_t s = 0; s < scenario.circuit.steps().size(); ++s) {
    for (const auto& [ma, mb] : scenario.circuit.steps()[s].coincidences) {
      os << "overlap: step=" << s << " a=" << ma << " b=" << mb << "\n";
    }
  }
  if (scenario.postselect) {
    os << "postselect: " << scenario.postselect->first << ' ' << scenario.postselect->second
       << "\n";
  }
  return os.str();
}

}  // namespace ifm
