#pragma once

#include <map>
#include <string>
#include <vector>

#include "bubbles/rational_map.hpp"

namespace bubbles {

using Params = std::map<std::string, cplx>;

struct ParamSpec {
  std::string name;
  bool integer = false;
  std::string constraint;  // human-readable, e.g. "n >= 2"
  cplx default_value;
};

struct FamilySchema {
  std::string name;
  std::string formula;
  std::vector<ParamSpec> params;
  std::string excluded;  // description of excluded parameter values
};

struct FamilyInstance {
  RationalMap map;
  std::string name;
  Params params;
  // Cycles known in closed form (infinity included for maps where it is
  // superattracting). Multipliers are computed from the map.
  std::vector<Cycle> known_cycles;
  // Critical points known in closed form.
  std::vector<ExtComplex> known_critical;
};

// Catalog in a fixed order.
const std::vector<FamilySchema>& list_families();

// Builds a family member. Missing parameters take the schema default; unknown
// parameter names are rejected.
// Throws UnknownFamilyError, ExcludedParameterError, InvalidMapError.
FamilyInstance make_family(const std::string& name, const Params& params = {});

// Canonical name for a family name or alias ("g" -> "g_cubic").
std::string canonical_family_name(const std::string& name);

}  // namespace bubbles
