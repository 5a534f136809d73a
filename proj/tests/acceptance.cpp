// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "bubbles/criterion.hpp"
#include "bubbles/metrics.hpp"
#include "bubbles/solver.hpp"
#include "cli.hpp"

using namespace bubbles;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::ostringstream log;

  void expect(bool cond, const std::string& what) {
    log << "    " << (cond ? "ok   " : "FAIL ") << what << "\n";
    ok = ok && cond;
  }
};

std::string fmt(double v, int digits = 10) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

cplx at(const RationalMap& f, cplx z) { return f(ExtComplex(z)).value(); }

const cplx kBubbleA(0.06, 1.31);

// 1. Closed-form values against direct evaluation.
void algebraic(Check& c) {
  const double tol = 1e-12;
  const auto f0 = make_family("f0");
  const cplx o1 = at(f0.map, 2.0);
  const cplx o2 = at(f0.map, o1);
  c.expect(std::abs(o1 - (-4.0)) <= tol && std::abs(o2 - (-112.0)) <= tol,
           "cubic_bubble a=-2 orbit 2 -> " + fmt(o1.real()) + " -> " + fmt(o2.real()));

  const auto g = make_family("g_cubic", {{"a", 2.5}});
  c.expect(std::abs(at(g.map, 0.0) - 2.5) <= tol, "g_cubic a=5/2(0) = 5/2");
  c.expect(std::abs(at(g.map, 2.5)) <= tol, "g_cubic a=5/2(5/2) = 0");
  bool found = false;
  for (const auto& cp : critical_points(g.map)) {
    found = found || (cp.point.is_finite() && std::abs(cp.point.value() - 29.0 / 15.0) <= 1e-9);
  }
  c.expect(found, "29/15 is a critical point of g_cubic a=5/2");

  const cplx a = -1.05;
  const auto p = make_family("para_cubic", {{"a", a}});
  const cplx f1 = at(p.map, 1.0);
  const cplx df1 = p.map.derivative_at(1.0);
  c.expect(std::abs(f1 - 1.0) <= 1e-9 && std::abs(df1 - 1.0) <= 1e-9, "para_cubic: f(1) = 1 and f'(1) = 1");
  const cplx f0v = at(p.map, 0.0);
  c.expect(std::abs(f0v - (1.0 + 2.0 * a) / (2.0 + 3.0 * a)) <= 1e-9 && std::abs(f0v - 0.9565217391304348) <= 1e-9,
           "para_cubic: f(0) = " + fmt(f0v.real()));
  const cplx cv = at(p.map, -1.5 * a);
  const cplx closed = 1.0 + (a + 1.0) * (3.0 * a + 2.0) * (3.0 * a - 1.0) / 4.0;
  c.expect(std::abs(cv - closed) <= 1e-9 && std::abs(cv - 0.94034375) <= 1e-9,
           "para_cubic: f(-3a/2) = " + fmt(cv.real()) + " matches 1 + (a+1)(3a+2)(3a-1)/4");

  const double ha = 1.05;
  const auto h = make_family("h_quartic", {{"a", ha}});
  c.expect(std::abs(at(h.map, ha) - ha) <= 1e-9, "h_quartic a=1.05(a) = a");
  c.expect(std::abs(h.map.derivative_at(ha) - 1.0) <= 1e-6,
           "h_quartic a=1.05'(a) = " + fmt(h.map.derivative_at(ha).real()));
  const double free_crit = ha * (9.0 * ha - 8.0) / (2.0 * (4.0 * ha - 3.0));
  c.expect(std::abs(free_crit - 0.634375) <= 1e-12 && std::abs(h.map.derivative_at(free_crit)) <= 1e-9,
           "h_quartic a=1.05: free critical point " + fmt(free_crit) + " is critical");
}

struct Case {
  std::string label;
  std::string family;
  Params params;
  cplx center;
  double width;
};

// 2. Verdicts at 1024^2, stable from 512^2.
void verdicts(Check& c) {
  const std::vector<Case> cases = {
      {"bubble cubic a=0.06+1.31i", "cubic_bubble", {{"a", kBubbleA}}, cplx(0.0, -0.7), 3.6},
      {"g_cubic a=5/2", "g_cubic", {{"a", 2.5}}, 1.25, 4.0},
      {"g_cubic a=1/2", "g_cubic", {{"a", 0.5}}, 0.25, 3.0},
      {"Devaney-Marotta", "devaney_marotta", {}, 0.0, 3.0},
      {"McMullen 3,3 lambda=1e-3", "mcmullen", {{"n", 3.0}, {"m", 3.0}, {"lambda", 1e-3}}, 0.0, 3.0},
      {"McMullen 2,2 lambda=100", "mcmullen", {{"n", 2.0}, {"m", 2.0}, {"lambda", 100.0}}, 0.0, 12.0},
  };
  for (const auto& k : cases) {
    const auto inst = make_family(k.family, k.params);
    const auto t0 = Clock::now();
    const auto fine = run_criterion(inst, Window::square(k.center, k.width, 1024), 10000);
    const double secs = seconds_since(t0);
    const auto coarse = run_criterion(inst, Window::square(k.center, k.width, 512), 10000);
    const auto& v = fine.verdict;
    const std::string cls = to_string(v.topology_class);
    const bool stable = v.topology_class == coarse.verdict.topology_class;
    bool want = false;
    std::string extra;
    if (k.label == "bubble cubic a=0.06+1.31i") {
      want = v.topology_class == TopologyClass::CantorBubbles && v.all_hypotheses_hold();
      extra = " hypotheses " + to_string(v.u_completely_invariant.value) + "/" +
              to_string(v.v_not_completely_invariant.value) + "/" + to_string(v.critical_values_in_uv.value);
    } else if (k.label == "g_cubic a=1/2") {
      const bool witness = same_component(fine.grid, 0.0, 0.5);
      want = v.topology_class != TopologyClass::CantorBubbles && witness;
      extra = std::string(" same_component(0, 0.5) = ") + (witness ? "true" : "false");
    } else if (k.label == "McMullen 3,3 lambda=1e-3") {
      want = v.topology_class == TopologyClass::CantorCirclesLike;
    } else if (k.label == "McMullen 2,2 lambda=100") {
      want = v.topology_class == TopologyClass::CantorLike;
    } else {
      want = v.topology_class == TopologyClass::CantorBubbles;
    }
    c.expect(want && stable && secs < 60.0, k.label + ": " + cls + extra + " (512^2: " +
                                                to_string(coarse.verdict.topology_class) + ", " + fmt(secs, 3) +
                                                " s)");
  }
}

// 3. Parabolic maps with a long budget.
void parabolic(Check& c) {
  const std::vector<Case> cases = {
      {"para_cubic a=-1.05", "para_cubic", {{"a", -1.05}}, 0.0, 1200.0},
      {"h_quartic a=1.05", "h_quartic", {{"a", 1.05}}, 0.5, 3.0},
  };
  for (const auto& k : cases) {
    const auto r = run_criterion(make_family(k.family, k.params), Window::square(k.center, k.width, 1024), 100000);
    const auto& v = r.verdict;
    c.expect(v.topology_class == TopologyClass::CantorBubbles && v.undecided_fraction <= 0.10,
             k.label + ": " + to_string(v.topology_class) + ", undecided " + fmt(100.0 * v.undecided_fraction, 3) +
                 "%");
  }
}

// 4. Superattracting parameters of z^3 - 3z + v.
void solver(Check& c) {
  const auto p1 = solve_superattracting(1, 2.5);
  c.expect(p1.parameter == cplx(3.0, 0.0) && p1.residual <= 1e-12,
           "p=1: v = " + to_string(ExtComplex(p1.parameter)) + ", residual " + fmt(p1.residual));
  const auto p2 = solve_superattracting(2, 2.5);
  const double golden = 2.0 + (std::sqrt(5.0) - 1.0) / 2.0;
  c.expect(std::abs(p2.parameter - golden) <= 1e-9 && p2.newton_iters <= 20,
           "p=2: v = " + fmt(p2.parameter.real(), 12) + " in " + std::to_string(p2.newton_iters) + " steps");

  SolveOptions o;
  o.check_criterion = true;
  o.resolution = 512;
  bool echo = false;
  bool all_verified = true;
  std::string found;
  for (int p = 1; p <= 3; ++p) {
    for (const cplx v0 : {cplx(2.5, 0.0), cplx(0.4, 0.0), cplx(1.0, 1.0), cplx(-2.5, 0.0)}) {
      SolveResult r;
      try {
        r = solve_superattracting(p, v0, o);
      } catch (const Error&) {
        continue;
      }
      const auto inst = make_family("solver_cubic", {{"v", r.parameter}});
      all_verified = all_verified && verify_superattracting(inst.map, ExtComplex(1.0), p).ok;
      if (!echo && r.other_critical_fate.kind == FateKind::Escape && r.verdict &&
          r.verdict->topology_class == TopologyClass::CantorBubbles) {
        echo = true;
        found = "p=" + std::to_string(p) + " v=" + to_string(ExtComplex(r.parameter));
      }
    }
  }
  c.expect(all_verified, "every returned cycle passes verify_superattracting");
  c.expect(echo, "escaping co-critical point with CantorBubbles: " + (echo ? found : std::string("none")));
}

// 5. Box-counting dimension.
void dimension(Check& c) {
  const std::vector<int> ks = {3, 4, 5, 6, 7};
  const auto sq = make_family("power", {{"n", 2.0}});
  const auto sq_grid = render_grid(sq, Window::square(0.0, 3.0, 2048), find_attractors(sq), 10000);
  const auto circle = box_dimension(sq_grid, is_julia, ks);
  c.expect(circle.slope >= 0.9 && circle.slope <= 1.1 && circle.r2 >= 0.99,
           "z^2 at 2048^2: slope " + fmt(circle.slope, 4) + ", r^2 " + fmt(circle.r2, 5));
  const auto f = make_family("cubic_bubble", {{"a", kBubbleA}});
  const auto grid = render_grid(f, Window::square(cplx(0.0, -0.7), 3.6, 2048), find_attractors(f), 10000);
  const auto bubble = box_dimension(grid, is_julia, ks);
  c.expect(bubble.slope > 1.0, "bubble cubic Julia pixels at 2048^2: slope " + fmt(bubble.slope, 4));
}

// 6. Separation, quasicircle and accumulation measurements.
void uniformization(Check& c) {
  {
    const auto inst = make_family("power", {{"n", 2.0}});
    const auto r = run_criterion(inst, Window::square(0.0, 3.0, 1024), 1000);
    const auto curves = extract_bubble_curves(r.graph, r.verdict.u_id);
    const double bt = curves.empty() ? INFINITY : bounded_turning(curves[0]);
    c.expect(bt <= 1.2, "unit circle curve: bounded turning " + fmt(bt, 4));
  }
  const auto bubble_map = make_family("cubic_bubble", {{"a", kBubbleA}});
  double sep[2] = {0.0, 0.0};
  double acc = 0.0;
  int idx = 0;
  for (const int n : {512, 1024}) {
    const auto r = run_criterion(bubble_map, Window::square(cplx(0.0, -0.7), 3.6, n), 10000);
    const auto curves = extract_bubble_curves(r.graph, r.verdict.u_id);
    sep[idx++] = separation_report(curves, 30).min_delta_largest;
    if (n == 1024) acc = critical_accumulation_distance(bubble_map, r.attractors, curves);
  }
  const double spread = std::abs(sep[0] - sep[1]) / std::max(sep[0], sep[1]);
  c.expect(sep[0] > 0.0 && sep[1] > 0.0 && spread <= 0.30,
           "bubble cubic min separation of 30 largest: " + fmt(sep[0], 4) + " (512^2), " + fmt(sep[1], 4) +
               " (1024^2), spread " + fmt(100.0 * spread, 3) + "%");
  c.expect(acc > 0.0 && std::isfinite(acc), "bubble cubic critical accumulation distance " + fmt(acc, 4));

  // The bounded bubbles of this map are tiny and cluster at the pole -a = 1.05.
  const auto para = make_family("para_cubic", {{"a", -1.05}});
  const auto r = run_criterion(para, Window::square(1.05, 2e-5, 512), 100000);
  const auto curves = extract_bubble_curves(r.graph, r.verdict.u_id);
  const double pacc = critical_accumulation_distance(para, r.attractors, curves, 1000, 200, 100000);
  c.expect(!curves.empty() && pacc > 0.0 && std::isfinite(pacc),
           "para_cubic a=-1.05: " + std::to_string(curves.size()) + " curves near the pole, distance " +
               fmt(pacc, 4));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// Random member of a family; integer parameters keep their defaults.
Params random_member(const FamilySchema& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Params p;
  for (const auto& ps : s.params) {
    if (ps.integer) continue;
    p[ps.name] = ps.default_value + 0.1 * std::abs(ps.default_value) * cplx(u(rng), u(rng));
  }
  return p;
}

// 7. Determinism, derivative accuracy, Riemann-Hurwitz.
void infrastructure(Check& c) {
  const auto dir = std::filesystem::temp_directory_path() / "bubbles_acceptance";
  std::filesystem::create_directories(dir);
  std::string bytes[2];
  int k = 0;
  for (const char* workers : {"1", "8"}) {
    std::ostringstream out;
    std::ostringstream err;
    const auto img = (dir / "bubble.ppm").string();
    const auto rep = (dir / "bubble.json").string();
    const int code = cli::run_cli({"criterion", "--family", "cubic_bubble", "--a", "0.06+1.31i", "--res", "512",
                                   "--workers", workers, "--out", img, "--report", rep},
                                  out, err);
    bytes[k++] = code == 0 ? slurp(img) + "|" + slurp(rep) : "error " + err.str();
  }
  c.expect(bytes[0] == bytes[1] && bytes[0].rfind("error", 0) != 0,
           "PPM and report byte-identical with 1 and 8 workers (" + std::to_string(bytes[0].size()) + " bytes)");

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int checked = 0;
  int bad = 0;
  int rh_bad = 0;
  int instances = 0;
  for (const auto& s : list_families()) {
    for (int t = 0; t < 20; ++t) {
      std::optional<FamilyInstance> made;
      try {
        made = make_family(s.name, t == 0 ? Params{} : random_member(s, rng));
      } catch (const Error&) {
        continue;
      }
      const FamilyInstance& inst = *made;
      ++instances;
      int sum = 0;
      for (const auto& cp : critical_points(inst.map)) sum += cp.local_degree - 1;
      rh_bad += sum != 2 * inst.map.degree() - 2;
      for (int i = 0; i < 25; ++i) {
        const cplx z(u(rng), u(rng));
        if (inst.map.near_pole(z) || std::abs(inst.map.den()(z)) < 1e-3 * inst.map.den().abs_scale(z)) continue;
        const double h = 1e-6 * (1.0 + std::abs(z));
        const cplx fd = (at(inst.map, z + h) - at(inst.map, z - h)) / (2.0 * h);
        const cplx exact = inst.map.derivative_at(z);
        ++checked;
        bad += std::abs(fd - exact) > 1e-6 * std::max(1.0, std::abs(exact));
      }
    }
  }
  c.expect(bad == 0, "derivative vs central difference: " + std::to_string(checked - bad) + "/" +
                         std::to_string(checked) + " within 1e-6");
  c.expect(rh_bad == 0, "Riemann-Hurwitz count 2d-2 on " + std::to_string(instances - rh_bad) + "/" +
                            std::to_string(instances) + " family instances");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"algebraic identities", algebraic},   {"criterion verdicts", verdicts},
      {"parabolic case", parabolic},         {"solver", solver},
      {"dimension", dimension},              {"uniformization metrics", uniformization},
      {"infrastructure", infrastructure},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %zu %s: %s (%.1f s)\n%s", i + 1, criteria[i].first.c_str(), c.ok ? "PASS" : "FAIL",
                seconds_since(t0), c.log.str().c_str());
    std::fflush(stdout);
    all = all && c.ok;
  }
  return all ? 0 : 1;
}
