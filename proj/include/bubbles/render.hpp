#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bubbles/dynamics.hpp"

namespace bubbles {

struct Window {
  cplx center;
  double width = 4.0;
  double height = 4.0;
  int nx = 256;
  int ny = 256;

  Window() = default;
  Window(cplx c, double w, double h, int nx_, int ny_);

  // Square window of side `width` at resolution n x n.
  static Window square(cplx c, double width, int n) { return Window(c, width, width, n, n); }

  // Center of pixel (i, j); i is the column, row 0 is the top.
  cplx pixel(int i, int j) const;
  double pixel_width() const { return width / nx; }
  double pixel_height() const { return height / ny; }
  // Pixel containing z; false outside the window.
  bool locate(cplx z, int& i, int& j) const;
  bool contains(cplx z) const;
  Window with_resolution(int nx_, int ny_) const { return Window(center, width, height, nx_, ny_); }
};

struct PixelLabel {
  FateKind kind = FateKind::Undecided;
  std::int16_t attractor = -1;
  std::int16_t phase = 0;
  std::int32_t iterations = 0;
  // Orbit escaped or converged, but the seed lies within the boundary band:
  // its distance estimate to the Julia set is below the band width.
  bool boundary = false;
  // Distance estimate to the Julia set in pixel widths (0 when unknown).
  float distance = 0.0f;

  // Part of the Julia/Undecided separating set.
  bool julia() const { return boundary || kind == FateKind::Undecided; }
};

struct ClassificationGrid {
  Window window;
  std::vector<PixelLabel> labels;  // row-major, top row first

  const PixelLabel& at(int i, int j) const { return labels[static_cast<std::size_t>(j) * window.nx + i]; }
  PixelLabel& at(int i, int j) { return labels[static_cast<std::size_t>(j) * window.nx + i]; }
  std::size_t size() const { return labels.size(); }
  double undecided_fraction() const;
  double julia_fraction() const;
};

struct RenderOptions {
  int workers = 0;  // 0: hardware concurrency, overridable by BUBBLES_WORKERS
  Kernel kernel = Kernel::Auto;
  // Seeds whose distance estimate is below band * pixel width are marked as
  // boundary pixels. 0 disables the band.
  double band = 0.5;
  DynamicsOptions dynamics;
};

constexpr int kTileSize = 64;

// Worker count after applying the 0 default and the BUBBLES_WORKERS override.
int resolve_workers(int requested);

ClassificationGrid render_grid(const RationalMap& f, const Window& window, const AttractorSet& attractors,
                               int budget, const RenderOptions& opts = {});
ClassificationGrid render_grid(const FamilyInstance& inst, const Window& window, const AttractorSet& attractors,
                               int budget, const RenderOptions& opts = {});

// Square window around the non-escaping set, found on a coarse render of the
// escape disk (radius 4 without one) and padded by a fifth of its side.
Window fit_window(const RationalMap& f, const AttractorSet& attractors, int budget, int resolution);

using Rgb = std::array<std::uint8_t, 3>;
using Palette = std::function<Rgb(const PixelLabel&)>;

// Julia pixels black; each attractor gets a hue, shaded by iteration count mod 16.
Palette default_palette();
Palette constant_palette(Rgb c);

void write_ppm(const ClassificationGrid& grid, const Palette& palette, const std::string& path);
std::string encode_ppm(const ClassificationGrid& grid, const Palette& palette);

}  // namespace bubbles
