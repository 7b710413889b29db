#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace hyperrelax {

struct PlotOptions {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  int width = 640;
  int height = 420;
};

/// Single-series SVG line chart with axes and min/max tick labels.
/// Non-finite points, and nonpositive ones on log axes, are skipped.
void write_svg_line_plot(std::ostream& os, const std::vector<double>& x, const std::vector<double>& y,
                         const PlotOptions& opt);

/// Creates `dir` (and parents) if needed.
void ensure_directory(const std::filesystem::path& dir);

/// Writes a file through `fill`; throws std::runtime_error on I/O failure.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill);

}  // namespace hyperrelax
