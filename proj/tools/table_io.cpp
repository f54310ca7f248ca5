#include "table_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace ifm_cli {

namespace {

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string fmt_coord(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

bool has_labels(const ifm_table* table) { return ifm_table_label_name(table) != nullptr; }

}  // namespace

std::string table_to_csv(const ifm_table* table) {
  std::ostringstream os;
  const bool labeled = has_labels(table);
  if (labeled) os << ifm_table_label_name(table);
  for (size_t c = 0; c < ifm_table_cols(table); ++c) {
    if (labeled || c > 0) os << ',';
    os << ifm_table_column_name(table, c);
  }
  os << '\n';
  for (size_t r = 0; r < ifm_table_rows(table); ++r) {
    if (labeled) os << ifm_table_row_label(table, r);
    for (size_t c = 0; c < ifm_table_cols(table); ++c) {
      if (labeled || c > 0) os << ',';
      os << fmt(ifm_table_value(table, r, c));
    }
    os << '\n';
  }
  return os.str();
}

std::string table_to_text(const ifm_table* table) {
  const bool labeled = has_labels(table);
  const size_t cols = ifm_table_cols(table);
  const size_t rows = ifm_table_rows(table);

  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header;
  if (labeled) header.push_back(ifm_table_label_name(table));
  for (size_t c = 0; c < cols; ++c) header.push_back(ifm_table_column_name(table, c));
  grid.push_back(header);
  for (size_t r = 0; r < rows; ++r) {
    std::vector<std::string> line;
    if (labeled) line.push_back(ifm_table_row_label(table, r));
    for (size_t c = 0; c < cols; ++c) line.push_back(fmt(ifm_table_value(table, r, c)));
    grid.push_back(std::move(line));
  }

  std::vector<size_t> widths(grid[0].size(), 0);
  for (const auto& line : grid) {
    for (size_t k = 0; k < line.size(); ++k) widths[k] = std::max(widths[k], line[k].size());
  }
  std::ostringstream os;
  for (const auto& line : grid) {
    for (size_t k = 0; k < line.size(); ++k) {
      if (k > 0) os << "  ";
      os << line[k];
      if (k + 1 < line.size()) os << std::string(widths[k] - line[k].size(), ' ');
    }
    os << '\n';
  }
  return os.str();
}

std::string table_to_svg(const ifm_table* table) {
  const size_t rows = ifm_table_rows(table);
  const size_t cols = ifm_table_cols(table);
  if (rows == 0 || cols < 2) {
    throw std::runtime_error("nothing to plot: need at least one row and two columns");
  }

  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
  bool first_x = true, first_y = true;
  for (size_t r = 0; r < rows; ++r) {
    const double x = ifm_table_value(table, r, 0);
    if (std::isfinite(x)) {
      x_min = first_x ? x : std::min(x_min, x);
      x_max = first_x ? x : std::max(x_max, x);
      first_x = false;
    }
    for (size_t c = 1; c < cols; ++c) {
      const double y = ifm_table_value(table, r, c);
      if (std::isfinite(y)) {
        y_min = first_y ? y : std::min(y_min, y);
        y_max = first_y ? y : std::max(y_max, y);
        first_y = false;
      }
    }
  }
  if (first_x || first_y) {
    throw std::runtime_error("nothing to plot: no finite values");
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  const double width = 720.0, height = 480.0;
  const double left = 70.0, right = 20.0, top = 20.0, bottom = 50.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  const auto py = [&](double y) { return top + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  const size_t palette_size = sizeof(palette) / sizeof(palette[0]);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
        "viewBox=\"0 0 720 480\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"720\" height=\"480\" fill=\"#ffffff\"/>\n";
  os << "<line x1=\"" << fmt_coord(left) << "\" y1=\"" << fmt_coord(top + plot_h) << "\" x2=\""
     << fmt_coord(left + plot_w) << "\" y2=\"" << fmt_coord(top + plot_h)
     << "\" stroke=\"#000000\"/>\n";
  os << "<line x1=\"" << fmt_coord(left) << "\" y1=\"" << fmt_coord(top) << "\" x2=\""
     << fmt_coord(left) << "\" y2=\"" << fmt_coord(top + plot_h) << "\" stroke=\"#000000\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double fx = x_min + (x_max - x_min) * k / 4.0;
    const double fy = y_min + (y_max - y_min) * k / 4.0;
    os << "<line x1=\"" << fmt_coord(px(fx)) << "\" y1=\"" << fmt_coord(top + plot_h)
       << "\" x2=\"" << fmt_coord(px(fx)) << "\" y2=\"" << fmt_coord(top + plot_h + 5)
       << "\" stroke=\"#000000\"/>\n";
    os << "<text x=\"" << fmt_coord(px(fx)) << "\" y=\"" << fmt_coord(top + plot_h + 18)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";
    os << "<line x1=\"" << fmt_coord(left - 5) << "\" y1=\"" << fmt_coord(py(fy)) << "\" x2=\""
       << fmt_coord(left) << "\" y2=\"" << fmt_coord(py(fy)) << "\" stroke=\"#000000\"/>\n";
    os << "<text x=\"" << fmt_coord(left - 8) << "\" y=\"" << fmt_coord(py(fy) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(fy) << "</text>\n";
  }
  os << "<text x=\"" << fmt_coord(left + plot_w / 2) << "\" y=\"" << fmt_coord(height - 12)
     << "\" font-size=\"13\" text-anchor=\"middle\">" << ifm_table_column_name(table, 0)
     << "</text>\n";

  for (size_t c = 1; c < cols; ++c) {
    const char* color = palette[(c - 1) % palette_size];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (size_t r = 0; r < rows; ++r) {
      const double x = ifm_table_value(table, r, 0);
      const double y = ifm_table_value(table, r, c);
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (!first) os << ' ';
      os << fmt_coord(px(x)) << ',' << fmt_coord(py(y));
      first = false;
    }
    os << "\"/>\n";
    os << "<text x=\"" << fmt_coord(left + plot_w - 6) << "\" y=\""
       << fmt_coord(top + 14.0 * static_cast<double>(c)) << "\" font-size=\"12\" "
          "text-anchor=\"end\" fill=\""
       << color << "\">" << ifm_table_column_name(table, c) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string summary_line(const std::string& title, const ifm_table* table) {
  std::ostringstream os;
  os << title << ':';
  const size_t rows = ifm_table_rows(table);
  const size_t cols = ifm_table_cols(table);
  if (rows == 1) {
    if (has_labels(table)) {
      os << ' ' << ifm_table_label_name(table) << '=' << ifm_table_row_label(table, 0);
    }
    for (size_t c = 0; c < cols; ++c) {
      os << ' ' << ifm_table_column_name(table, c) << '=' << fmt(ifm_table_value(table, 0, c));
    }
  } else if (cols == 1 && has_labels(table)) {
    for (size_t r = 0; r < rows; ++r) {
      os << ' ' << ifm_table_row_label(table, r) << '=' << fmt(ifm_table_value(table, r, 0));
    }
  } else {
    os << ' ' << rows << " rows x " << cols << " columns";
  }
  return os.str();
}

}  // namespace ifm_cli
