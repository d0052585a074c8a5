#pragma once

#include <string>
#include <vector>

namespace opdyn {

/// One named curve for CSV and plot emission.
struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

std::string format_double(double v);

/// Long-format CSV: one row per point, columns x_name, y_name, series.
void write_series_csv(const std::string& path, const std::string& x_name,
                      const std::string& y_name, const std::vector<Series>& series);

/// Generic CSV with string cells.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Minimal standalone SVG line plot of the given series.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<Series>& series);

std::string read_file(const std::string& path);

}  // namespace opdyn
