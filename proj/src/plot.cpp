#include "patmg/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>

#include "patmg/png.hpp"

namespace patmg {

namespace {

// 5x7 bitmap font: 7 rows, 5 least-significant bits each (MSB = left pixel)
const std::map<char, std::array<unsigned char, 7>>& font() {
  static const std::map<char, std::array<unsigned char, 7>> f = {
      {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
      {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
      {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
      {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
      {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
      {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
      {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
      {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
      {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
      {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
      {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
      {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
      {'+', {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00}},
      {'%', {0x19, 0x19, 0x02, 0x04, 0x08, 0x13, 0x13}},
      {':', {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}},
      {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
      {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}},
      {'/', {0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10}},
      {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
      {'a', {0x00, 0x00, 0x0E, 0x01, 0x0F, 0x11, 0x0F}},
      {'b', {0x10, 0x10, 0x16, 0x19, 0x11, 0x11, 0x1E}},
      {'c', {0x00, 0x00, 0x0E, 0x10, 0x10, 0x11, 0x0E}},
      {'d', {0x01, 0x01, 0x0D, 0x13, 0x11, 0x11, 0x0F}},
      {'e', {0x00, 0x00, 0x0E, 0x11, 0x1F, 0x10, 0x0E}},
      {'f', {0x06, 0x09, 0x08, 0x1C, 0x08, 0x08, 0x08}},
      {'g', {0x00, 0x0F, 0x11, 0x11, 0x0F, 0x01, 0x0E}},
      {'h', {0x10, 0x10, 0x16, 0x19, 0x11, 0x11, 0x11}},
      {'i', {0x04, 0x00, 0x0C, 0x04, 0x04, 0x04, 0x0E}},
      {'j', {0x02, 0x00, 0x06, 0x02, 0x02, 0x12, 0x0C}},
      {'k', {0x10, 0x10, 0x12, 0x14, 0x18, 0x14, 0x12}},
      {'l', {0x0C, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}},
      {'m', {0x00, 0x00, 0x1A, 0x15, 0x15, 0x11, 0x11}},
      {'n', {0x00, 0x00, 0x16, 0x19, 0x11, 0x11, 0x11}},
      {'o', {0x00, 0x00, 0x0E, 0x11, 0x11, 0x11, 0x0E}},
      {'p', {0x00, 0x00, 0x1E, 0x11, 0x1E, 0x10, 0x10}},
      {'q', {0x00, 0x00, 0x0D, 0x13, 0x0F, 0x01, 0x01}},
      {'r', {0x00, 0x00, 0x16, 0x19, 0x10, 0x10, 0x10}},
      {'s', {0x00, 0x00, 0x0E, 0x10, 0x0E, 0x01, 0x1E}},
      {'t', {0x08, 0x08, 0x1C, 0x08, 0x08, 0x09, 0x06}},
      {'u', {0x00, 0x00, 0x11, 0x11, 0x11, 0x13, 0x0D}},
      {'v', {0x00, 0x00, 0x11, 0x11, 0x11, 0x0A, 0x04}},
      {'w', {0x00, 0x00, 0x11, 0x11, 0x15, 0x15, 0x0A}},
      {'x', {0x00, 0x00, 0x11, 0x0A, 0x04, 0x0A, 0x11}},
      {'y', {0x00, 0x00, 0x11, 0x11, 0x0F, 0x01, 0x0E}},
      {'z', {0x00, 0x00, 0x1F, 0x02, 0x04, 0x08, 0x1F}},
  };
  return f;
}

struct Canvas {
  int w, h;
  std::vector<unsigned char> rgb;
  Canvas(int w_, int h_) : w(w_), h(h_), rgb(static_cast<std::size_t>(w_) * h_ * 3, 255) {}
  void set(int x, int y, const std::array<unsigned char, 3>& c) {
    if (x < 0 || y < 0 || x >= w || y >= h) return;
    unsigned char* p = &rgb[(static_cast<std::size_t>(y) * w + x) * 3];
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
  }
  void line(int x0, int y0, int x1, int y1, const std::array<unsigned char, 3>& c) {
    int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1, err = dx + dy;
    while (true) {
      set(x0, y0, c);
      if (x0 == x1 && y0 == y1) break;
      int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }
  void text(int x, int y, const std::string& s, const std::array<unsigned char, 3>& c) {
    int cx = x;
    for (char raw : s) {
      char ch = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
      auto it = font().find(ch);
      if (it != font().end())
        for (int r = 0; r < 7; ++r)
          for (int b = 0; b < 5; ++b)
            if (it->second[r] & (1 << (4 - b))) set(cx + b, y + r, c);
      cx += 6;
    }
  }
  void marker(int x, int y, Marker m, const std::array<unsigned char, 3>& c) {
    if (m == Marker::square) {
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) set(x + dx, y + dy, c);
    } else if (m == Marker::star) {
      for (int d = -3; d <= 3; ++d) {
        set(x + d, y, c);
        set(x, y + d, c);
      }
      for (int d = -2; d <= 2; ++d) {
        set(x + d, y + d, c);
        set(x + d, y - d, c);
      }
    }
  }
};

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

void write_line_plot(const std::filesystem::path& path, const std::vector<PlotSeries>& series,
                     const std::string& xlabel, const std::string& ylabel, bool logy) {
  const int W = 960, H = 640;
  const int ml = 90, mr = 30, mt = 30, mb = 60;
  Canvas cv(W, H);
  const std::array<unsigned char, 3> black{0, 0, 0};
  const std::array<unsigned char, 3> grey{210, 210, 210};

  auto usable = [&](double v) { return std::isfinite(v) && (!logy || v > 0); };

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.x[i]) && usable(s.y[i])) {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        double yv = logy ? std::log10(s.y[i]) : s.y[i];
        ymin = std::min(ymin, yv);
        ymax = std::max(ymax, yv);
      }
  if (!(xmin <= xmax)) {
    xmin = 0;
    xmax = 1;
  }
  if (!(ymin <= ymax)) {
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;

  auto px = [&](double x) {
    return ml + static_cast<int>((x - xmin) / (xmax - xmin) * (W - ml - mr) + 0.5);
  };
  auto py = [&](double yv) {
    double t = (yv - ymin) / (ymax - ymin);
    return H - mb - static_cast<int>(t * (H - mt - mb) + 0.5);
  };

  // frame and ticks
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double fx = xmin + (xmax - xmin) * i / nticks;
    const double fy = ymin + (ymax - ymin) * i / nticks;
    cv.line(px(fx), mt, px(fx), H - mb, grey);
    cv.line(ml, py(fy), W - mr, py(fy), grey);
    cv.text(px(fx) - 12, H - mb + 8, fmt_tick(fx), black);
    const double shown = logy ? std::pow(10.0, fy) : fy;
    cv.text(6, py(fy) - 3, fmt_tick(shown), black);
  }
  cv.line(ml, mt, ml, H - mb, black);
  cv.line(ml, H - mb, W - mr, H - mb, black);
  cv.text((W - ml - mr) / 2 + ml - 3 * static_cast<int>(xlabel.size()), H - 24, xlabel, black);
  cv.text(6, mt - 14, ylabel + (logy ? " (log)" : ""), black);

  int legend_y = mt + 6;
  for (const auto& s : series) {
    int prevx = 0, prevy = 0;
    bool have_prev = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !usable(s.y[i])) {
        have_prev = false;
        continue;
      }
      const int X = px(s.x[i]);
      const int Y = py(logy ? std::log10(s.y[i]) : s.y[i]);
      if (s.line && have_prev) cv.line(prevx, prevy, X, Y, s.color);
      if (s.marker != Marker::none) cv.marker(X, Y, s.marker, s.color);
      prevx = X;
      prevy = Y;
      have_prev = true;
    }
    cv.line(W - mr - 150, legend_y + 3, W - mr - 130, legend_y + 3, s.color);
    cv.marker(W - mr - 140, legend_y + 3, s.marker, s.color);
    cv.text(W - mr - 124, legend_y, s.label, black);
    legend_y += 12;
  }

  write_png_rgb(path, W, H, cv.rgb);
}

}  // namespace patmg
