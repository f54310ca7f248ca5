#pragma once

#include <string>
#include <vector>

#include "ifm/scenario.hpp"

namespace ifm {

class UnknownProtocolError : public std::runtime_error {
public:
  explicit UnknownProtocolError(const std::string& what) : std::runtime_error(what) {}
};

/// Numeric rows under named columns, optionally with a leading label column.
/// Column order is fixed per protocol and documented in the README.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string label_column;             // empty when rows are unlabeled
  std::vector<std::string> row_labels;  // parallel to rows when labeled

  std::size_t column_index(const std::string& name) const;
  double cell(std::size_t row, const std::string& column) const;
};

/// Protocols: ev, ev_iterated, frontier, zeno, cavity, renninger, dicke,
/// irradiation, circuit (params text is a scenario), nested.
ResultTable run_protocol(const std::string& protocol, const std::string& params_text);

/// One parameter carries a grid expression; the protocol runs per grid point
/// and the rows stack in grid order.
ResultTable sweep_protocol(const std::string& protocol, const std::string& params_text);

/// Scenario text with a postselect line; emits the |forward*backward| grid.
ResultTable run_trace(const std::string& scenario_text);

ResultTable run_nested(const std::string& params_text);

}  // namespace ifm
