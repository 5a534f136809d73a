#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "bubbles/criterion.hpp"
#include "bubbles/families.hpp"
#include "bubbles/metrics.hpp"
#include "bubbles/render.hpp"
#include "bubbles/solver.hpp"
#include "bubbles/topology.hpp"
#include "json.hpp"

namespace bubbles::cli {

using json = nlohmann::json;

namespace {

std::string located(const std::string& stage, const std::string& key, const std::string& what) {
  return "stage '" + stage + "', key '" + key + "': " + what;
}

}  // namespace

UsageError::UsageError(const std::string& stage, const std::string& key, const std::string& what)
    : Error(located(stage, key, what)) {}

StageError::StageError(const std::string& stage, const std::string& key, const std::string& what)
    : Error(located(stage, key, what)) {}

namespace {

double to_number(std::string s) {
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

}  // namespace

cplx parse_complex(const std::string& text) {
  static const std::string num = R"((?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)";
  static const std::regex real_only("^([+-]?" + num + ")$");
  static const std::regex imag_only("^([+-]?)(" + num + ")?i$");
  static const std::regex both("^([+-]?" + num + ")([+-])(" + num + ")?i$");
  std::smatch m;
  if (std::regex_match(text, m, real_only)) return {to_number(m[1]), 0.0};
  if (std::regex_match(text, m, imag_only)) {
    const double im = m[2].matched ? to_number(m[2]) : 1.0;
    return {0.0, m[1] == "-" ? -im : im};
  }
  if (std::regex_match(text, m, both)) {
    const double im = m[3].matched ? to_number(m[3]) : 1.0;
    return {to_number(m[1]), m[2] == "-" ? -im : im};
  }
  throw std::invalid_argument("expected a complex number such as 1.5-2e-3i, got '" + text + "'");
}

namespace {

json cj(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json ej(ExtComplex z) { return z.is_finite() ? cj(z.value()) : json{{"infinity", true}}; }

json fate_json(const OrbitFate& f) {
  return {{"kind", to_string(f.kind)}, {"attractor", f.attractor}, {"iterations", f.iterations}};
}

json attractors_json(const AttractorSet& set) {
  json out = json::array();
  for (const auto& a : set.cycles) {
    json pts = json::array();
    for (const auto& p : a.cycle.points) pts.push_back(ej(p));
    out.push_back({{"kind", to_string(a.kind)},
                   {"period", a.cycle.period},
                   {"points", pts},
                   {"multiplier", cj(a.cycle.multiplier)},
                   {"root_order", a.root_order}});
  }
  return out;
}

json evidence_json(const Evidence& e) { return {{"value", to_string(e.value)}, {"notes", e.notes}}; }

json verdict_json(const CriterionVerdict& v) {
  return {{"topology_class", to_string(v.topology_class)},
          {"u_component", v.u_id},
          {"v_component", v.v_id},
          {"u_completely_invariant", evidence_json(v.u_completely_invariant)},
          {"v_not_completely_invariant", evidence_json(v.v_not_completely_invariant)},
          {"critical_values_in_uv", evidence_json(v.critical_values_in_uv)},
          {"all_hypotheses_hold", v.all_hypotheses_hold()},
          {"undecided_fraction", v.undecided_fraction},
          {"undecided_limit", v.undecided_limit},
          {"multiply_connected", v.multiply_connected},
          {"simply_connected", v.simply_connected},
          {"residue_pixels", v.residue_pixels},
          {"julia_clusters", v.julia_clusters},
          {"shared_filled_regions", v.shared_filled_regions},
          {"basilica_witnesses", v.basilica_witnesses}};
}

json components_json(const ComponentGraph& g) {
  json out = json::array();
  for (const int id : g.significant_ids()) {
    const auto& c = g.components[id];
    out.push_back({{"id", c.id},
                   {"kind", to_string(c.kind)},
                   {"attractor", c.attractor},
                   {"pixels", c.pixels},
                   {"holes", c.holes},
                   {"contains_infinity", c.contains_infinity},
                   {"touches_border", c.touches_border}});
  }
  return out;
}

json window_json(const Window& w) {
  return {{"center", cj(w.center)}, {"width", w.width}, {"resolution", w.nx}};
}

// Runs one stage, relabelling library failures with the stage and config key.
template <class F>
auto stage(const std::string& name, const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, key, e.what());
  }
}

void emit(const JobConfig& cfg, const json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (cfg.report.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.report, std::ios::binary);
  f << text;
  if (!f) throw StageError("output", "report", "cannot write " + cfg.report);
}

Kernel kernel_of(const std::string& k) {
  if (k == "scalar") return Kernel::Scalar;
  if (k == "avx2") return Kernel::Avx2;
  return Kernel::Auto;
}

RenderOptions render_options(const JobConfig& cfg) {
  RenderOptions o;
  o.workers = cfg.workers;
  o.kernel = kernel_of(cfg.kernel);
  return o;
}

FamilyInstance build_family(const JobConfig& cfg) {
  Params params;
  for (const auto& [key, text] : cfg.params) {
    try {
      params[key] = parse_complex(text);
    } catch (const std::invalid_argument& e) {
      throw UsageError("family", key, e.what());
    }
  }
  try {
    make_family(cfg.family);
  } catch (const Error& e) {
    throw UsageError("family", "family", e.what());
  }
  // One parameter at a time first, so the message can name the culprit.
  for (const auto& [key, value] : params) {
    try {
      make_family(cfg.family, {{key, value}});
    } catch (const Error& e) {
      throw UsageError("family", key, e.what());
    }
  }
  try {
    return make_family(cfg.family, params);
  } catch (const Error& e) {
    throw UsageError("family", "params", e.what());
  }
}

// The configured window, with missing parts taken from a fit around the
// non-escaping set.
Window resolve_window(const JobConfig& cfg, const FamilyInstance& inst, const AttractorSet& set) {
  cplx center;
  double width = 0.0;
  if (cfg.center && cfg.width) {
    center = *cfg.center;
    width = *cfg.width;
  } else {
    const Window fit = stage("window", "width", [&] { return fit_window(inst.map, set, cfg.budget, cfg.resolution); });
    center = cfg.center.value_or(fit.center);
    width = cfg.width.value_or(fit.width);
  }
  try {
    return Window::square(center, width, cfg.resolution);
  } catch (const Error& e) {
    throw UsageError("window", "width", e.what());
  }
}

json config_json(const JobConfig& cfg, const FamilyInstance& inst, const Window& w) {
  json params = json::object();
  for (const auto& [k, v] : inst.params) params[k] = cj(v);
  return {{"command", cfg.command},
          {"family", inst.name},
          {"params", params},
          {"window", window_json(w)},
          {"budget", cfg.budget},
          {"kernel", cfg.kernel},
          {"seed", cfg.seed},
          {"image", cfg.image},
          {"report", cfg.report}};
}

void write_image(const std::string& path, const ClassificationGrid& grid) {
  if (path.empty()) return;
  stage("output", "out", [&] { write_ppm(grid, default_palette(), path); });
}

CriterionOptions criterion_options(const JobConfig& cfg, int samples) {
  CriterionOptions o;
  o.samples = samples;
  o.seed = cfg.seed;
  o.render = render_options(cfg);
  return o;
}

// Options shared by the pipeline subcommands.
struct PipelineFlags {
  JobConfig cfg;
  std::map<std::string, std::string> param_text;
  std::map<std::string, CLI::Option*> param_opts;
  std::string center_text;
  CLI::Option* center_opt = nullptr;
  double width = 0.0;
  CLI::Option* width_opt = nullptr;

  void add(CLI::App* app, int default_res) {
    cfg.resolution = default_res;
    app->add_option("--family", cfg.family, "family name or alias (see 'families')")->required();
    std::vector<std::string> names;
    for (const auto& s : list_families()) {
      for (const auto& p : s.params) names.push_back(p.name);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    for (const auto& n : names) {
      param_opts[n] = app->add_option("--" + n, param_text[n], "family parameter " + n + " (complex)");
    }
    center_opt = app->add_option("--center", center_text, "window center (complex); fitted when omitted");
    width_opt = app->add_option("--width", width, "window side length; fitted when omitted")
                    ->check(CLI::PositiveNumber);
    add_common(app);
  }

  void add_common(CLI::App* app) {
    app->add_option("--res", cfg.resolution, "pixels per side")
        ->check(CLI::Range(kMinResolution, kMaxResolution))
        ->capture_default_str();
    app->add_option("--budget", cfg.budget, "iteration budget per orbit")
        ->check(CLI::Range(1, kMaxBudget))
        ->capture_default_str();
    app->add_option("--workers", cfg.workers, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
    app->add_option("--kernel", cfg.kernel, "orbit kernel")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
        ->capture_default_str();
    app->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
    app->add_option("--report", cfg.report, "JSON report path (stdout when omitted)");
    app->fallthrough();
  }

  // Copies the parsed strings into the config.
  void finish() {
    for (const auto& [n, opt] : param_opts) {
      if (opt->count() > 0) cfg.params[n] = param_text[n];
    }
    if (center_opt != nullptr && center_opt->count() > 0) {
      try {
        cfg.center = parse_complex(center_text);
      } catch (const std::invalid_argument& e) {
        throw UsageError("window", "center", e.what());
      }
    }
    if (width_opt != nullptr && width_opt->count() > 0) cfg.width = width;
  }
};

struct Prepared {
  FamilyInstance inst;
  AttractorSet attractors;
  Window window;
};

Prepared prepare(const JobConfig& cfg) {
  FamilyInstance inst = build_family(cfg);
  AttractorSet set = stage("attractors", "budget", [&] { return find_attractors(inst, cfg.budget); });
  Window w = resolve_window(cfg, inst, set);
  return {std::move(inst), std::move(set), w};
}

json families_report() {
  json fams = json::array();
  for (const auto& s : list_families()) {
    json params = json::array();
    for (const auto& p : s.params) {
      params.push_back({{"name", p.name},
                        {"integer", p.integer},
                        {"constraint", p.constraint},
                        {"default", cj(p.default_value)}});
    }
    fams.push_back({{"name", s.name}, {"formula", s.formula}, {"params", params}, {"excluded", s.excluded}});
  }
  json aliases = json::object();
  for (const char* a : {"f0", "g", "h"}) aliases[a] = canonical_family_name(a);
  return {{"command", "families"}, {"families", fams}, {"aliases", aliases}};
}

json render_command(const JobConfig& cfg) {
  const Prepared p = prepare(cfg);
  const ClassificationGrid grid = stage("render", "res", [&] {
    return render_grid(p.inst, p.window, p.attractors, cfg.budget, render_options(cfg));
  });
  write_image(cfg.image, grid);
  json r = {{"command", cfg.command},
            {"config", config_json(cfg, p.inst, p.window)},
            {"attractors", attractors_json(p.attractors)},
            {"undecided_fraction", grid.undecided_fraction()},
            {"julia_fraction", grid.julia_fraction()}};
  r["escape_radius"] = p.attractors.escape_radius ? json(*p.attractors.escape_radius) : json(nullptr);
  return r;
}

CriterionRun criterion_stage(const JobConfig& cfg, const Prepared& p, int samples) {
  return stage("criterion", "res",
               [&] { return run_criterion(p.inst, p.window, cfg.budget, criterion_options(cfg, samples)); });
}

json criterion_command(const JobConfig& cfg, int samples) {
  const Prepared p = prepare(cfg);
  const CriterionRun run = criterion_stage(cfg, p, samples);
  write_image(cfg.image, run.grid);
  return {{"command", cfg.command},
          {"config", config_json(cfg, p.inst, p.window)},
          {"attractors", attractors_json(run.attractors)},
          {"components", components_json(run.graph)},
          {"verdict", verdict_json(run.verdict)}};
}

struct DimensionFlags {
  std::string set = "julia";
  int k_min = 3;
  int k_max = -1;  // -1: finest scale with 8-pixel boxes
};

json dimension_command(const JobConfig& cfg, const DimensionFlags& d) {
  const Prepared p = prepare(cfg);
  const ClassificationGrid grid = stage("render", "res", [&] {
    return render_grid(p.inst, p.window, p.attractors, cfg.budget, render_options(cfg));
  });
  write_image(cfg.image, grid);
  int k_max = d.k_max;
  if (k_max < 0) k_max = static_cast<int>(std::floor(std::log2(cfg.resolution / 8.0)));
  if (k_max < d.k_min) throw UsageError("dimension", "k-max", "k-max is below k-min");
  std::vector<int> ks;
  for (int k = d.k_min; k <= k_max; ++k) ks.push_back(k);
  const PixelPredicate pred = d.set == "filled" ? PixelPredicate(not_escape) : PixelPredicate(is_julia);
  const BoxDimension bd = stage("dimension", "k-max", [&] { return box_dimension(grid, pred, ks); });
  json cfg_j = config_json(cfg, p.inst, p.window);
  cfg_j["set"] = d.set;
  cfg_j["k_min"] = d.k_min;
  cfg_j["k_max"] = k_max;
  return {{"command", cfg.command},
          {"config", cfg_j},
          {"slope", bd.slope},
          {"r2", bd.r2},
          {"box_pixels", bd.box_pixels},
          {"counts", bd.counts}};
}

struct SeparationFlags {
  int largest = 30;
  int min_pixels = 16;
  int geometry = 10;
  int pairs = 512;
  int samples = 16;
};

json separation_command(const JobConfig& cfg, const SeparationFlags& s) {
  const Prepared p = prepare(cfg);
  const CriterionRun run = criterion_stage(cfg, p, s.samples);
  write_image(cfg.image, run.grid);
  const auto curves = stage("separation", "min-pixels", [&] {
    return extract_bubble_curves(run.graph, run.verdict.u_id, static_cast<std::size_t>(s.min_pixels));
  });
  const SeparationReport rep = stage("separation", "largest", [&] { return separation_report(curves, s.largest); });
  json geometry = json::array();
  for (int k = 0; k < std::min<int>(s.geometry, static_cast<int>(curves.size())); ++k) {
    json g = {{"component", curves[k].component}, {"vertices", curves[k].points.size()}};
    try {
      const CurveGeometry cg = curve_geometry(curves[k], s.pairs, cfg.seed);
      g["bounded_turning"] = cg.bounded_turning;
      g["roundness"] = cg.roundness;
      g["diameter"] = cg.diameter;
    } catch (const DegenerateComponentError& e) {
      g["skipped"] = e.what();
    }
    geometry.push_back(g);
  }
  const double acc = stage("separation", "budget", [&] {
    return critical_accumulation_distance(p.inst, run.attractors, curves, 1000, 200, cfg.budget);
  });
  json closest = nullptr;
  for (const auto& pr : rep.pairs) {
    if (pr.delta == rep.min_delta) {
      closest = {{"a", pr.a}, {"b", pr.b}, {"delta", pr.delta}};
      break;
    }
  }
  json cfg_j = config_json(cfg, p.inst, p.window);
  cfg_j["largest"] = s.largest;
  cfg_j["min_pixels"] = s.min_pixels;
  cfg_j["pairs"] = s.pairs;
  return {{"command", cfg.command},
          {"config", cfg_j},
          {"topology_class", to_string(run.verdict.topology_class)},
          {"curve_count", rep.curve_count},
          {"pair_count", rep.pairs.size()},
          {"min_delta_largest", rep.min_delta_largest},
          {"min_delta", rep.min_delta},
          {"q10", rep.q10},
          {"median", rep.median},
          {"q90", rep.q90},
          {"closest_pair", closest},
          {"geometry", geometry},
          {"critical_accumulation_distance", acc}};
}

struct SolveFlags {
  int period = 1;
  std::string v0_text;
  int max_iters = 50;
  bool check = false;
  int samples = 16;
};

json solve_command(const JobConfig& cfg, const SolveFlags& s) {
  SolveOptions o;
  try {
    o.max_iters = s.max_iters;
    const cplx v0 = parse_complex(s.v0_text);
    o.check_criterion = s.check;
    o.resolution = cfg.resolution;
    o.budget = cfg.budget;
    o.criterion = criterion_options(cfg, s.samples);
    const SolveResult r = stage("solve", "v0", [&] {
      try {
        return solve_superattracting(s.period, v0, o);
      } catch (const WrongPeriodError& e) {
        throw StageError("solve", "p", e.what());
      }
    });
    json pts = json::array();
    for (const auto& z : r.cycle.points) pts.push_back(ej(z));
    json cfg_j = {{"command", cfg.command},
                  {"p", s.period},
                  {"v0", cj(v0)},
                  {"max_iters", s.max_iters},
                  {"check", s.check},
                  {"budget", cfg.budget},
                  {"resolution", cfg.resolution},
                  {"kernel", cfg.kernel},
                  {"seed", cfg.seed},
                  {"report", cfg.report}};
    json out = {{"command", cfg.command},
                {"config", cfg_j},
                {"parameter", cj(r.parameter)},
                {"residual", r.residual},
                {"newton_iterations", r.newton_iters},
                {"cycle", pts},
                {"multiplier", cj(r.cycle.multiplier)},
                {"other_critical_fate", fate_json(r.other_critical_fate)}};
    if (r.window) out["window"] = window_json(*r.window);
    if (r.verdict) out["verdict"] = verdict_json(*r.verdict);
    return out;
  } catch (const std::invalid_argument& e) {
    throw UsageError("solve", "v0", e.what());
  }
}

struct Panel {
  std::string suffix;
  std::string family;
  Params params;
  cplx center;
  double width;
  int budget;
};

std::vector<Panel> figure_panels(int figure) {
  const cplx dm_pole = std::polar(0.5, std::acos(-1.0) / 4.0);
  switch (figure) {
    case 1:
      return {{"", "devaney_marotta", {}, 0.0, 3.0, 10000},
              {"_zoom", "devaney_marotta", {}, dm_pole, 0.5, 10000}};
    case 2:
      return {{"", "cubic_bubble", {{"a", cplx(0.06, 1.31)}}, cplx(0.0, -0.7), 3.6, 10000}};
    case 3:
      return {{"", "para_cubic", {{"a", -1.8}}, 0.0, 6.0, 10000}};
    case 4:
      return {{"", "f0", {}, 0.0, 4.0, 10000}};
    case 5:
      return {{"_a", "g_cubic", {{"a", 2.5}}, 1.25, 4.0, 10000}, {"_b", "g_cubic", {{"a", 0.5}}, 0.25, 3.0, 10000}};
    case 6:
      return {{"", "h_quartic", {{"a", 1.05}}, 0.5, 3.0, 100000}};
    default:
      throw UsageError("reproduce-figure", "figure", "figures are numbered 1 to 6");
  }
}

json figure_command(const JobConfig& cfg, int figure, const std::string& out_dir) {
  json panels = json::array();
  for (const auto& pn : figure_panels(figure)) {
    const FamilyInstance inst = stage("family", "figure", [&] { return make_family(pn.family, pn.params); });
    const Window w = Window::square(pn.center, pn.width, cfg.resolution);
    const CriterionRun run =
        stage("criterion", "figure", [&] { return run_criterion(inst, w, pn.budget, criterion_options(cfg, 16)); });
    const std::string image = out_dir + "/figure" + std::to_string(figure) + pn.suffix + ".ppm";
    write_image(image, run.grid);
    json params = json::object();
    for (const auto& [k, v] : inst.params) params[k] = cj(v);
    panels.push_back({{"family", inst.name},
                      {"params", params},
                      {"window", window_json(w)},
                      {"budget", pn.budget},
                      {"image", image},
                      {"verdict", verdict_json(run.verdict)}});
  }
  return {{"command", cfg.command},
          {"config",
           {{"command", cfg.command},
            {"figure", figure},
            {"resolution", cfg.resolution},
            {"kernel", cfg.kernel},
            {"seed", cfg.seed},
            {"out_dir", out_dir},
            {"report", cfg.report}}},
          {"panels", panels}};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rational map dynamics: Julia set renders, topology verdicts and curve metrics."};
  app.set_config("--config", "", "TOML/INI file with one [subcommand] section; flags override it");
  app.require_subcommand(1);

  auto* families = app.add_subcommand("families", "list the map catalog with parameter schemas");
  families->fallthrough();
  std::string families_report_path;
  families->add_option("--report", families_report_path, "JSON report path (stdout when omitted)");

  PipelineFlags render_f;
  auto* render = app.add_subcommand("render", "render a classification image");
  render_f.add(render, 512);
  render->add_option("--out", render_f.cfg.image, "PPM image path");

  PipelineFlags crit_f;
  int crit_samples = 16;
  auto* criterion = app.add_subcommand("criterion", "classify the Julia set topology and test the hypotheses");
  crit_f.add(criterion, 512);
  criterion->add_option("--out", crit_f.cfg.image, "PPM image path");
  criterion->add_option("--samples", crit_samples, "deep samples per invariance test")
      ->check(CLI::Range(1, 4096))
      ->capture_default_str();

  PipelineFlags dim_f;
  DimensionFlags dim_flags;
  auto* dimension = app.add_subcommand("dimension", "box-counting dimension of the Julia pixels");
  dim_f.add(dimension, 2048);
  dimension->add_option("--out", dim_f.cfg.image, "PPM image path");
  dimension->add_option("--set", dim_flags.set, "pixel set to measure")
      ->check(CLI::IsMember({"julia", "filled"}))
      ->capture_default_str();
  dimension->add_option("--k-min", dim_flags.k_min, "coarsest dyadic scale")->check(CLI::Range(0, 20));
  dimension->add_option("--k-max", dim_flags.k_max, "finest dyadic scale")->check(CLI::Range(0, 20));

  PipelineFlags sep_f;
  SeparationFlags sep_flags;
  auto* separation = app.add_subcommand("separation", "relative separation and shape of the bubble curves");
  sep_f.add(separation, 1024);
  separation->add_option("--out", sep_f.cfg.image, "PPM image path");
  separation->add_option("--largest", sep_flags.largest, "curves compared pairwise")->check(CLI::Range(2, 100000));
  separation->add_option("--min-pixels", sep_flags.min_pixels, "smallest bubble kept")->check(CLI::Range(1, 1 << 30));
  separation->add_option("--geometry", sep_flags.geometry, "curves measured for shape")->check(CLI::Range(0, 100000));
  separation->add_option("--pairs", sep_flags.pairs, "vertex pairs per bounded-turning estimate")
      ->check(CLI::Range(1, 1 << 20));

  PipelineFlags solve_f;
  SolveFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "parameter v with z^3 - 3z + v superattracting at period p");
  solve->add_option("--p", solve_flags.period, "period")->required()->check(CLI::Range(1, 12));
  solve->add_option("--v0", solve_flags.v0_text, "Newton start (complex)")->required();
  solve->add_option("--max-iters", solve_flags.max_iters, "Newton iterations")->check(CLI::Range(1, 10000));
  solve->add_flag("--check", solve_flags.check, "run the criterion on the solved map");
  solve->add_option("--samples", solve_flags.samples, "deep samples per invariance test")->check(CLI::Range(1, 4096));
  solve_f.add_common(solve);

  PipelineFlags fig_f;
  int figure = 0;
  std::string out_dir = ".";
  auto* reproduce = app.add_subcommand("reproduce-figure", "render and classify a canned figure");
  reproduce->add_option("figure", figure, "figure number")->required()->check(CLI::Range(1, 6));
  reproduce->add_option("--out-dir", out_dir, "directory for the PPM panels")->capture_default_str();
  fig_f.add_common(reproduce);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    json report;
    JobConfig cfg;
    if (families->parsed()) {
      cfg.report = families_report_path;
      report = families_report();
    } else if (render->parsed()) {
      render_f.finish();
      cfg = render_f.cfg;
      cfg.command = "render";
      report = render_command(cfg);
    } else if (criterion->parsed()) {
      crit_f.finish();
      cfg = crit_f.cfg;
      cfg.command = "criterion";
      report = criterion_command(cfg, crit_samples);
    } else if (dimension->parsed()) {
      dim_f.finish();
      cfg = dim_f.cfg;
      cfg.command = "dimension";
      report = dimension_command(cfg, dim_flags);
    } else if (separation->parsed()) {
      sep_f.finish();
      cfg = sep_f.cfg;
      cfg.command = "separation";
      report = separation_command(cfg, sep_flags);
    } else if (solve->parsed()) {
      cfg = solve_f.cfg;
      cfg.command = "solve";
      report = solve_command(cfg, solve_flags);
    } else {
      cfg = fig_f.cfg;
      cfg.command = "reproduce-figure";
      report = figure_command(cfg, figure, out_dir);
    }
    emit(cfg, report, out);
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace bubbles::cli
