#include "bubbles/families.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "bubbles/errors.hpp"

namespace bubbles {
namespace {

constexpr double kExcludedGuard = 1e-12;

const cplx kDmA = std::polar(0.5, std::numbers::pi / 4.0);
const cplx kDmLambda = std::polar(1e-4, 4.0 * std::numbers::pi / 3.0);

class Reader {
 public:
  Reader(const FamilySchema& schema, const Params& given) : schema_(schema), given_(given) {
    for (const auto& [key, value] : given) {
      bool known = false;
      for (const auto& p : schema.params) known = known || p.name == key;
      if (!known) {
        throw ExcludedParameterError(schema.name + ": unknown parameter '" + key + "'");
      }
    }
  }

  cplx get(const std::string& key) {
    for (const auto& p : schema_.params) {
      if (p.name != key) continue;
      const auto it = given_.find(key);
      const cplx v = it == given_.end() ? p.default_value : it->second;
      resolved_[key] = v;
      return v;
    }
    throw Error(schema_.name + ": schema has no parameter '" + key + "'");
  }

  int get_int(const std::string& key, int min_value) {
    const cplx v = get(key);
    const double r = std::round(v.real());
    if (v.imag() != 0.0 || r != v.real()) {
      throw ExcludedParameterError(schema_.name + ": parameter " + key + " must be an integer");
    }
    if (r < min_value) {
      throw ExcludedParameterError(schema_.name + ": parameter " + key + " must be >= " +
                                   std::to_string(min_value));
    }
    return static_cast<int>(r);
  }

  void exclude(const std::string& key, cplx value, cplx bad, const std::string& label) const {
    if (std::abs(value - bad) <= kExcludedGuard) {
      throw ExcludedParameterError(schema_.name + ": " + key + " must not equal " + label);
    }
  }

  const Params& resolved() const { return resolved_; }

 private:
  const FamilySchema& schema_;
  const Params& given_;
  Params resolved_;
};

Cycle cycle_of(const RationalMap& f, std::vector<ExtComplex> points) {
  Cycle c;
  c.period = static_cast<int>(points.size());
  c.multiplier = cycle_multiplier(f, points);
  c.points = std::move(points);
  return c;
}

void add_unique(std::vector<ExtComplex>& v, ExtComplex z) {
  for (const auto& w : v) {
    if (chordal_distance(w, z) <= 1e-12) return;
  }
  v.push_back(z);
}

// The k-th roots of w.
std::vector<ExtComplex> roots_of(cplx w, int k) {
  std::vector<ExtComplex> out;
  const double r = std::pow(std::abs(w), 1.0 / k);
  const double t = std::arg(w) / k;
  for (int j = 0; j < k; ++j) out.emplace_back(std::polar(r, t + 2.0 * std::numbers::pi * j / k));
  return out;
}

FamilyInstance finish(const FamilySchema& schema, const Reader& rd, RationalMap f,
                      std::vector<std::vector<ExtComplex>> cycles, std::vector<ExtComplex> crit) {
  FamilyInstance inst{std::move(f), schema.name, rd.resolved(), {}, {}};
  for (auto& c : cycles) inst.known_cycles.push_back(cycle_of(inst.map, std::move(c)));
  for (const auto& c : crit) add_unique(inst.known_critical, c);
  return inst;
}

const ExtComplex kInf = ExtComplex::infinity();

using Builder = std::function<FamilyInstance(const FamilySchema&, Reader&)>;

struct Entry {
  FamilySchema schema;
  Builder build;
};

const std::vector<Entry>& catalog() {
  static const std::vector<Entry> entries = {
      {{"power", "z^n", {{"n", true, "n >= 2", 2.0}}, "none"},
       [](const FamilySchema& s, Reader& rd) {
         const int n = rd.get_int("n", 2);
         auto f = RationalMap::polynomial(Polynomial::monomial(n));
         return finish(s, rd, f, {{ExtComplex(0.0)}, {kInf}}, {ExtComplex(0.0), kInf});
       }},
      {{"quadratic", "z^2 + c", {{"c", false, "any complex c", -1.0}}, "none"},
       [](const FamilySchema& s, Reader& rd) {
         const cplx c = rd.get("c");
         auto f = RationalMap::polynomial(Polynomial{c, 0.0, 1.0});
         return finish(s, rd, f, {{kInf}}, {ExtComplex(0.0), kInf});
       }},
      {{"mcmullen",
        "z^n + lambda/z^m = (z^(n+m) + lambda)/z^m",
        {{"n", true, "n >= 2", 3.0}, {"m", true, "m >= 1", 3.0}, {"lambda", false, "lambda != 0", 1e-3}},
        "lambda = 0"},
       [](const FamilySchema& s, Reader& rd) {
         const int n = rd.get_int("n", 2);
         const int m = rd.get_int("m", 1);
         const cplx lambda = rd.get("lambda");
         rd.exclude("lambda", lambda, 0.0, "0");
         RationalMap f(Polynomial::monomial(n + m) + Polynomial::constant(lambda),
                       Polynomial::monomial(m));
         std::vector<ExtComplex> crit = roots_of(static_cast<double>(m) * lambda / static_cast<double>(n), n + m);
         crit.push_back(kInf);
         if (m >= 2) crit.emplace_back(0.0);
         return finish(s, rd, f, {{kInf}}, crit);
       }},
      {{"devaney_marotta",
        "z^n + lambda/(z-a)^m = (z^n (z-a)^m + lambda)/(z-a)^m",
        {{"n", true, "n >= 2", 4.0},
         {"m", true, "m >= 1", 4.0},
         {"a", false, "a != 0", kDmA},
         {"lambda", false, "lambda != 0", kDmLambda}},
        "a = 0, lambda = 0"},
       [](const FamilySchema& s, Reader& rd) {
         const int n = rd.get_int("n", 2);
         const int m = rd.get_int("m", 1);
         const cplx a = rd.get("a");
         const cplx lambda = rd.get("lambda");
         rd.exclude("a", a, 0.0, "0");
         rd.exclude("lambda", lambda, 0.0, "0");
         const Polynomial den = Polynomial::linear_power(a, m);
         RationalMap f(Polynomial::monomial(n) * den + Polynomial::constant(lambda), den);
         std::vector<ExtComplex> crit{kInf};
         if (m >= 2) crit.emplace_back(a);
         return finish(s, rd, f, {{kInf}}, crit);
       }},
      {{"gen_mcmullen",
        "z^n + a/z^n + b = (z^(2n) + b z^n + a)/z^n",
        {{"n", true, "n >= 2", 3.0}, {"a", false, "a != 0", 1e-3}, {"b", false, "b != 0", 0.1}},
        "a = 0, b = 0"},
       [](const FamilySchema& s, Reader& rd) {
         const int n = rd.get_int("n", 2);
         const cplx a = rd.get("a");
         const cplx b = rd.get("b");
         rd.exclude("a", a, 0.0, "0");
         rd.exclude("b", b, 0.0, "0");
         RationalMap f(Polynomial::monomial(2 * n) + Polynomial::monomial(n, b) + Polynomial::constant(a),
                       Polynomial::monomial(n));
         std::vector<ExtComplex> crit = roots_of(a, 2 * n);
         crit.push_back(kInf);
         crit.emplace_back(0.0);
         return finish(s, rd, f, {{kInf}}, crit);
       }},
      {{"para_cubic",
        "b (z^3 + c z + d)/(z + a), b = (1+a)^2/(2+3a), c = (1+2a)/(1+a)^2, d = a(1+2a)/(1+a)^2",
        {{"a", false, "a not in {0, -1, -2/3}", -1.8}},
        "a = 0, a = -1, a = -2/3"},
       [](const FamilySchema& s, Reader& rd) {
         const cplx a = rd.get("a");
         rd.exclude("a", a, 0.0, "0");
         rd.exclude("a", a, -1.0, "-1");
         rd.exclude("a", a, -2.0 / 3.0, "-2/3");
         const cplx b = (1.0 + a) * (1.0 + a) / (2.0 + 3.0 * a);
         const cplx c = (1.0 + 2.0 * a) / ((1.0 + a) * (1.0 + a));
         const cplx d = a * (1.0 + 2.0 * a) / ((1.0 + a) * (1.0 + a));
         RationalMap f(Polynomial{b * d, b * c, 0.0, b}, Polynomial{a, 1.0});
         return finish(s, rd, f, {{kInf}, {ExtComplex(1.0)}}, {ExtComplex(0.0), ExtComplex(-1.5 * a), kInf});
       }},
      {{"cubic_bubble", "z^3 + (3/2) a z^2", {{"a", false, "any complex a", cplx(0.06, 1.31)}}, "none"},
       [](const FamilySchema& s, Reader& rd) {
         const cplx a = rd.get("a");
         auto f = RationalMap::polynomial(Polynomial{0.0, 0.0, 1.5 * a, 1.0});
         return finish(s, rd, f, {{ExtComplex(0.0)}, {kInf}}, {ExtComplex(0.0), ExtComplex(-a), kInf});
       }},
      {{"g_cubic", "z^3 - (a + 1/a) z^2 + a", {{"a", false, "a != 0", 2.5}}, "a = 0"},
       [](const FamilySchema& s, Reader& rd) {
         const cplx a = rd.get("a");
         rd.exclude("a", a, 0.0, "0");
         const cplx k = a + 1.0 / a;
         auto f = RationalMap::polynomial(Polynomial{a, 0.0, -k, 1.0});
         return finish(s, rd, f, {{ExtComplex(0.0), ExtComplex(a)}, {kInf}},
                       {ExtComplex(0.0), ExtComplex(2.0 / 3.0 * k), kInf});
       }},
      {{"h_quartic",
        "z^2 (b + c z + d z^2)/(2 a^2 (a-1)(a-2)), b = -a(9a-8), c = 6a^2-4, d = 3-4a",
        {{"a", false, "a not in {0, 1, 2, 3/4}", 1.05}},
        "a = 0, a = 1, a = 2, a = 3/4"},
       [](const FamilySchema& s, Reader& rd) {
         const cplx a = rd.get("a");
         rd.exclude("a", a, 0.0, "0");
         rd.exclude("a", a, 1.0, "1");
         rd.exclude("a", a, 2.0, "2");
         rd.exclude("a", a, 0.75, "3/4");
         const cplx b = -a * (9.0 * a - 8.0);
         const cplx c = 6.0 * a * a - 4.0;
         const cplx d = 3.0 - 4.0 * a;
         const cplx k = 1.0 / (2.0 * a * a * (a - 1.0) * (a - 2.0));
         auto f = RationalMap::polynomial(Polynomial{0.0, 0.0, b * k, c * k, d * k});
         const cplx free_crit = a * (9.0 * a - 8.0) / (2.0 * (4.0 * a - 3.0));
         return finish(s, rd, f, {{ExtComplex(0.0)}, {ExtComplex(a)}, {kInf}},
                       {ExtComplex(0.0), ExtComplex(1.0), ExtComplex(free_crit), kInf});
       }},
      {{"solver_cubic", "z^3 - 3z + v", {{"v", false, "any complex v", 3.0}}, "none"},
       [](const FamilySchema& s, Reader& rd) {
         const cplx v = rd.get("v");
         auto f = RationalMap::polynomial(Polynomial{v, -3.0, 0.0, 1.0});
         return finish(s, rd, f, {{kInf}}, {ExtComplex(1.0), ExtComplex(-1.0), kInf});
       }},
  };
  return entries;
}

}  // namespace

const std::vector<FamilySchema>& list_families() {
  static const std::vector<FamilySchema> schemas = [] {
    std::vector<FamilySchema> out;
    for (const auto& e : catalog()) out.push_back(e.schema);
    return out;
  }();
  return schemas;
}

std::string canonical_family_name(const std::string& name) {
  if (name == "g") return "g_cubic";
  if (name == "h") return "h_quartic";
  if (name == "f0") return "cubic_bubble";
  return name;
}

FamilyInstance make_family(const std::string& name, const Params& params) {
  const std::string canon = canonical_family_name(name);
  for (const auto& e : catalog()) {
    if (e.schema.name != canon) continue;
    if (name == "f0") {
      Params p = params;
      p.emplace("a", -2.0);
      Reader rd(e.schema, p);
      return e.build(e.schema, rd);
    }
    Reader rd(e.schema, params);
    return e.build(e.schema, rd);
  }
  throw UnknownFamilyError("unknown family '" + name + "'");
}

}  // namespace bubbles
