#include "sparsedom/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sparsedom {

json cube_to_json(const DyadicCube& q) {
  json j;
  j["d"] = q.d;
  j["level"] = q.level;
  j["index"] = q.index;
  j["shift"] = q.shift;
  return j;
}

DyadicCube cube_from_json(const json& j) {
  return DyadicCube(j.at("d").get<int>(), j.at("level").get<int>(),
                    j.at("index").get<std::vector<long long>>(),
                    j.at("shift").get<std::vector<uint8_t>>());
}

json function_to_json(const StepFunction& f) {
  json j;
  j["d"] = f.grid().dim();
  j["depth"] = f.grid().depth();
  j["root"] = cube_to_json(f.grid().root());
  j["values"] = f.values();
  return j;
}

StepFunction function_from_json(const json& j) {
  Grid g(cube_from_json(j.at("root")), j.at("depth").get<int>());
  if (j.at("d").get<int>() != g.dim())
    throw std::invalid_argument("function file: dimension disagrees with root cube");
  return StepFunction(g, j.at("values").get<std::vector<double>>());
}

json coefficients_to_json(const ShiftCoefficients& c) {
  json j;
  j["root"] = cube_to_json(c.grid().root());
  j["depth"] = c.grid().depth();
  json entries = json::array();
  for (const auto& [node, lam] : c.entries()) {
    json e;
    e["cube"] = cube_to_json(c.grid().cube_of(node));
    e["lambda"] = lam;
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

ShiftCoefficients coefficients_from_json(const json& j) {
  Grid g(cube_from_json(j.at("root")), j.at("depth").get<int>());
  ShiftCoefficients c(g);
  for (const auto& e : j.at("entries")) {
    NodeId n = g.node_of(cube_from_json(e.at("cube")));
    c.set(n, e.at("lambda").get<double>());
  }
  return c;
}

json decomposition_to_json(const LernerDecomposition& dec, const Grid& g, double min_slack) {
  json j;
  j["lambda"] = dec.lambda;
  j["base_median"] = dec.base_median;
  j["gamma"] = dec.family.gamma;
  j["min_slack"] = min_slack;
  json cubes = json::array();
  for (size_t i = 0; i < dec.family.cubes.size(); ++i) {
    json e;
    e["cube"] = cube_to_json(g.cube_of(dec.family.cubes[i]));
    e["coefficient"] = dec.coefficients[i];
    e["generation"] = dec.generation[i];
    e["major_subset"] = dec.family.major[i];
    cubes.push_back(std::move(e));
  }
  j["cubes"] = std::move(cubes);
  return j;
}

void write_function_csv(const StepFunction& f, std::ostream& os) {
  os << "cell_index,value\n";
  for (uint64_t c = 0; c < f.grid().cell_count(); ++c)
    os << c << "," << format_double(f.value(c)) << "\n";
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace sparsedom
