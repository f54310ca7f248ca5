#include "ifm/ifm_c.h"

#include <string>

#include "ifm/runner.hpp"

struct ifm_table {
  ifm::ResultTable data;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
int guarded(ifm_table** out, Fn&& fn) {
  if (out == nullptr) {
    return fail(IFM_ERR_VALIDATION, "output table pointer is null");
  }
  *out = nullptr;
  try {
    *out = new ifm_table{fn()};
    g_last_error.clear();
    return IFM_OK;
  } catch (const ifm::ParseError& e) {
    return fail(IFM_ERR_PARSE, e.what());
  } catch (const ifm::ConditioningError& e) {
    return fail(IFM_ERR_CONDITIONING, e.what());
  } catch (const ifm::UnknownProtocolError& e) {
    return fail(IFM_ERR_UNKNOWN_PROTOCOL, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(IFM_ERR_VALIDATION, e.what());
  } catch (const std::exception& e) {
    return fail(IFM_ERR_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

const char* ifm_version(void) { return "0.1.0"; }

const char* ifm_last_error(void) { return g_last_error.c_str(); }

int ifm_run_protocol(const char* protocol, const char* params_text, ifm_table** out) {
  if (protocol == nullptr) return fail(IFM_ERR_VALIDATION, "protocol name is null");
  const std::string params = params_text == nullptr ? "" : params_text;
  return guarded(out, [&] { return ifm::run_protocol(protocol, params); });
}

int ifm_sweep_protocol(const char* protocol, const char* params_text, ifm_table** out) {
  if (protocol == nullptr) return fail(IFM_ERR_VALIDATION, "protocol name is null");
  const std::string params = params_text == nullptr ? "" : params_text;
  return guarded(out, [&] { return ifm::sweep_protocol(protocol, params); });
}

int ifm_run_trace(const char* scenario_text, ifm_table** out) {
  if (scenario_text == nullptr) return fail(IFM_ERR_VALIDATION, "scenario text is null");
  return guarded(out, [&] { return ifm::run_trace(scenario_text); });
}

int ifm_run_nested(const char* params_text, ifm_table** out) {
  const std::string params = params_text == nullptr ? "" : params_text;
  return guarded(out, [&] { return ifm::run_nested(params); });
}

size_t ifm_table_rows(const ifm_table* table) {
  return table == nullptr ? 0 : table->data.rows.size();
}

size_t ifm_table_cols(const ifm_table* table) {
  return table == nullptr ? 0 : table->data.columns.size();
}

const char* ifm_table_column_name(const ifm_table* table, size_t col) {
  if (table == nullptr || col >= table->data.columns.size()) return nullptr;
  return table->data.columns[col].c_str();
}

double ifm_table_value(const ifm_table* table, size_t row, size_t col) {
  if (table == nullptr || row >= table->data.rows.size() ||
      col >= table->data.rows[row].size()) {
    return 0.0;
  }
  return table->data.rows[row][col];
}

const char* ifm_table_label_name(const ifm_table* table) {
  if (table == nullptr || table->data.label_column.empty()) return nullptr;
  return table->data.label_column.c_str();
}

const char* ifm_table_row_label(const ifm_table* table, size_t row) {
  if (table == nullptr || row >= table->data.row_labels.size()) return nullptr;
  return table->data.row_labels[row].c_str();
}

void ifm_table_free(ifm_table* table) { delete table; }

}  // extern "C"
