#pragma once
#include <filesystem>
#include <vector>

#include "patmg/field.hpp"

namespace patmg {

// Minimal PNG writer (8-bit RGB, zlib-compressed).
void write_png_rgb(const std::filesystem::path& path, int width, int height,
                   const std::vector<unsigned char>& rgb);

enum class Colormap { gray, hot };

// Render a 2D field row 0 at the top, values mapped linearly from [vmin, vmax].
void write_field_png(const std::filesystem::path& path, const Field& f, double vmin, double vmax,
                     Colormap map = Colormap::hot);

}  // namespace patmg
