#pragma once

#include <stdexcept>
#include <string>

#include "ifm/ifm_c.h"

// Output formatting for result tables, on top of the C API accessors only.
namespace ifm_cli {

// Header row plus one line per table row; floats with 12 significant digits.
// Byte-identical output for identical tables.
std::string table_to_csv(const ifm_table* table);

// Aligned columns for terminal reading.
std::string table_to_text(const ifm_table* table);

// Polyline plot: first column is x, every further column is one series.
// Throws std::runtime_error when there is nothing to plot.
std::string table_to_svg(const ifm_table* table);

// "title: col=value col=value ..." for single-row tables; a row/column count
// for larger ones.
std::string summary_line(const std::string& title, const ifm_table* table);

}  // namespace ifm_cli
