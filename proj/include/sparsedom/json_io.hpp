#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "sparsedom/cube.hpp"
#include "sparsedom/lerner.hpp"
#include "sparsedom/shifts.hpp"
#include "sparsedom/step_function.hpp"

namespace sparsedom {

using json = nlohmann::json;

// Wire formats:
//   cube      {"d":int,"level":int,"index":[int],"shift":[0|1|2]}
//   function  {"d":int,"depth":int,"root":cube,"values":[float]}
//   coeffs    {"root":cube,"depth":int,"entries":[{"cube":cube,"lambda":float}]}

json cube_to_json(const DyadicCube& q);
DyadicCube cube_from_json(const json& j);

json function_to_json(const StepFunction& f);
StepFunction function_from_json(const json& j);

json coefficients_to_json(const ShiftCoefficients& c);
ShiftCoefficients coefficients_from_json(const json& j);

json decomposition_to_json(const LernerDecomposition& dec, const Grid& g, double min_slack);

/// "cell_index,value" rows.
void write_function_csv(const StepFunction& f, std::ostream& os);

json load_json_file(const std::string& path);
void save_json_file(const json& j, const std::string& path);

/// Fixed 17-significant-digit decimal, round-trip exact for binary64.
std::string format_double(double v);

}  // namespace sparsedom
