#pragma once
#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace patmg {

enum class Marker { none, square, star };

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
  std::array<unsigned char, 3> color{0, 0, 0};
  bool line = true;
  Marker marker = Marker::none;
};

// Simple raster line plot (PNG). Non-finite y values are skipped; with logy,
// nonpositive values are skipped too.
void write_line_plot(const std::filesystem::path& path, const std::vector<PlotSeries>& series,
                     const std::string& xlabel, const std::string& ylabel, bool logy = false);

}  // namespace patmg
