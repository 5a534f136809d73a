#include "bubbles/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "bubbles/errors.hpp"

namespace bubbles {

Window::Window(cplx c, double w, double h, int nx_, int ny_) : center(c), width(w), height(h), nx(nx_), ny(ny_) {
  if (!(w > 0.0) || !(h > 0.0) || !std::isfinite(w) || !std::isfinite(h)) {
    throw InvalidWindowError("window width and height must be positive");
  }
  if (nx < 16 || ny < 16) throw InvalidWindowError("window resolution must be at least 16x16");
}

cplx Window::pixel(int i, int j) const {
  const double x = ((i + 0.5) / nx - 0.5) * width;
  const double y = (0.5 - (j + 0.5) / ny) * height;
  return center + cplx(x, y);
}

bool Window::locate(cplx z, int& i, int& j) const {
  const double u = ((z.real() - center.real()) / width + 0.5) * nx;
  const double v = (0.5 - (z.imag() - center.imag()) / height) * ny;
  if (!(u >= 0.0 && u < nx && v >= 0.0 && v < ny)) return false;
  i = std::min(static_cast<int>(u), nx - 1);
  j = std::min(static_cast<int>(v), ny - 1);
  return true;
}

bool Window::contains(cplx z) const {
  int i = 0;
  int j = 0;
  return locate(z, i, j);
}

double ClassificationGrid::undecided_fraction() const {
  if (labels.empty()) return 0.0;
  std::size_t n = 0;
  for (const auto& l : labels) n += l.kind == FateKind::Undecided;
  return static_cast<double>(n) / static_cast<double>(labels.size());
}

double ClassificationGrid::julia_fraction() const {
  if (labels.empty()) return 0.0;
  std::size_t n = 0;
  for (const auto& l : labels) n += l.julia();
  return static_cast<double>(n) / static_cast<double>(labels.size());
}

int resolve_workers(int requested) {
  if (const char* env = std::getenv("BUBBLES_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

ClassificationGrid render_grid(const RationalMap& f, const Window& window, const AttractorSet& attractors,
                               int budget, const RenderOptions& opts) {
  const OrbitClassifier cls(f, attractors, budget, opts.dynamics);
  ClassificationGrid grid;
  grid.window = window;
  grid.labels.resize(static_cast<std::size_t>(window.nx) * window.ny);

  const int tx = (window.nx + kTileSize - 1) / kTileSize;
  const int ty = (window.ny + kTileSize - 1) / kTileSize;
  const int tiles = tx * ty;
  const double px = std::min(window.pixel_width(), window.pixel_height());
  const double band = opts.band * px;

  // Each tile writes a disjoint block of labels, so workers need no locking and
  // the result does not depend on the partition.
  auto run_tile = [&](int t, std::vector<cplx>& seeds, std::vector<OrbitFate>& fates) {
    const int i0 = (t % tx) * kTileSize;
    const int j0 = (t / tx) * kTileSize;
    const int i1 = std::min(i0 + kTileSize, window.nx);
    const int j1 = std::min(j0 + kTileSize, window.ny);
    seeds.clear();
    for (int j = j0; j < j1; ++j) {
      for (int i = i0; i < i1; ++i) seeds.push_back(window.pixel(i, j));
    }
    fates.resize(seeds.size());
    cls.classify_batch(seeds.data(), seeds.size(), fates.data(), opts.kernel);
    std::size_t k = 0;
    for (int j = j0; j < j1; ++j) {
      for (int i = i0; i < i1; ++i, ++k) {
        const OrbitFate& fate = fates[k];
        PixelLabel& l = grid.at(i, j);
        l.kind = fate.kind;
        l.attractor = static_cast<std::int16_t>(fate.attractor);
        l.phase = static_cast<std::int16_t>(fate.phase);
        l.iterations = fate.iterations;
        l.distance = static_cast<float>(std::min(fate.boundary_distance / px, 1e30));
        l.boundary = fate.kind != FateKind::Undecided && fate.boundary_distance < band;
      }
    }
  };

  const int workers = std::min(resolve_workers(opts.workers), tiles);
  if (workers <= 1) {
    std::vector<cplx> seeds;
    std::vector<OrbitFate> fates;
    for (int t = 0; t < tiles; ++t) run_tile(t, seeds, fates);
    return grid;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        std::vector<cplx> seeds;
        std::vector<OrbitFate> fates;
        for (int t = w; t < tiles; t += workers) run_tile(t, seeds, fates);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return grid;
}

ClassificationGrid render_grid(const FamilyInstance& inst, const Window& window, const AttractorSet& attractors,
                               int budget, const RenderOptions& opts) {
  return render_grid(inst.map, window, attractors, budget, opts);
}

Window fit_window(const RationalMap& f, const AttractorSet& attractors, int budget, int resolution) {
  const double radius = attractors.escape_radius.value_or(4.0);
  const Window coarse = Window::square(0.0, 2.0 * radius, 256);
  const auto grid = render_grid(f, coarse, attractors, budget);
  double x0 = radius, x1 = -radius, y0 = radius, y1 = -radius;
  for (int j = 0; j < coarse.ny; ++j) {
    for (int i = 0; i < coarse.nx; ++i) {
      const PixelLabel& l = grid.at(i, j);
      if (l.kind == FateKind::Escape && !l.boundary) continue;
      const cplx z = coarse.pixel(i, j);
      x0 = std::min(x0, z.real());
      x1 = std::max(x1, z.real());
      y0 = std::min(y0, z.imag());
      y1 = std::max(y1, z.imag());
    }
  }
  if (x0 > x1) return coarse.with_resolution(resolution, resolution);
  const double side = 1.2 * std::max(x1 - x0, y1 - y0) + 2.0 * coarse.pixel_width();
  return Window::square(cplx(0.5 * (x0 + x1), 0.5 * (y0 + y1)), side, resolution);
}

namespace {

Rgb hsv(double h, double s, double v) {
  h = std::fmod(h, 1.0) * 6.0;
  const int k = static_cast<int>(h);
  const double f = h - k;
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  double r = v, g = t, b = p;
  switch (k % 6) {
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    case 5: r = v; g = p; b = q; break;
    default: break;
  }
  auto c = [](double x) { return static_cast<std::uint8_t>(std::clamp(x * 255.0 + 0.5, 0.0, 255.0)); };
  return {c(r), c(g), c(b)};
}

}  // namespace

Palette default_palette() {
  return [](const PixelLabel& l) -> Rgb {
    if (l.julia()) return {0, 0, 0};
    const double shade = 0.65 + 0.35 * ((l.iterations % 16) / 15.0);
    if (l.kind == FateKind::Escape) return hsv(0.6, 0.35, shade);
    const double hue = 0.08 + 0.27 * l.attractor + 0.05 * l.phase;
    return hsv(hue, l.kind == FateKind::Parabolic ? 0.5 : 0.75, shade);
  };
}

Palette constant_palette(Rgb c) {
  return [c](const PixelLabel&) { return c; };
}

std::string encode_ppm(const ClassificationGrid& grid, const Palette& palette) {
  const Window& w = grid.window;
  std::string out = "P6\n" + std::to_string(w.nx) + " " + std::to_string(w.ny) + "\n255\n";
  out.reserve(out.size() + grid.size() * 3);
  for (const auto& l : grid.labels) {
    const Rgb c = palette(l);
    out.append(reinterpret_cast<const char*>(c.data()), 3);
  }
  return out;
}

void write_ppm(const ClassificationGrid& grid, const Palette& palette, const std::string& path) {
  const std::string data = encode_ppm(grid, palette);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace bubbles
