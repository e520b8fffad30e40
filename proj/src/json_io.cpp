#include "grplan/json_io.hpp"

#include <json.hpp>

namespace grplan {

using nlohmann::json;

namespace {

json cell_to_json(const Cell& c, bool is3d) {
  return is3d ? json{c.x, c.y, c.z} : json{c.x, c.y};
}

Cell cell_from_json(const json& j, bool is3d) {
  if (!j.is_array() || j.size() != (is3d ? 3u : 2u))
    throw StructuralError("cell must be a [x,y] or [x,y,z] array matching dims");
  return is3d ? Cell(j[0].get<int>(), j[1].get<int>(), j[2].get<int>())
              : Cell(j[0].get<int>(), j[1].get<int>());
}

std::string dump(const json& j, int indent) { return j.dump(indent); }

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw StructuralError("malformed JSON");
  return j;
}

}  // namespace

std::string instance_to_json(const Instance& instance, int indent) {
  const bool is3d = instance.space.is3d();
  json j;
  j["dims"] = is3d ? json{instance.space.m1(), instance.space.m2(), instance.space.m3()}
                   : json{instance.space.m1(), instance.space.m2()};
  j["obstacles"] = json::array();
  for (const Cell& c : instance.space.obstacles())
    j["obstacles"].push_back(cell_to_json(c, is3d));
  j["robots"] = json::array();
  for (int i = 0; i < instance.num_robots(); ++i) {
    json r;
    r["id"] = i + 1;
    r["start"] = cell_to_json(instance.starts[i], is3d);
    r["goal"] = cell_to_json(instance.goals[i], is3d);
    if (instance.is_virtual(i)) r["virtual"] = true;
    j["robots"].push_back(std::move(r));
  }
  return dump(j, indent);
}

Instance instance_from_json(const std::string& text) {
  json j = parse(text);
  if (!j.contains("dims") || !j["dims"].is_array())
    throw StructuralError("instance JSON needs a dims array");
  auto& dims = j["dims"];
  if (dims.size() != 2 && dims.size() != 3)
    throw StructuralError("dims must have 2 or 3 entries");
  const bool is3d = dims.size() == 3;

  std::vector<Cell> obstacles;
  if (j.contains("obstacles"))
    for (const auto& o : j["obstacles"]) obstacles.push_back(cell_from_json(o, is3d));

  GridSpace space =
      is3d ? GridSpace(dims[0].get<int>(), dims[1].get<int>(), dims[2].get<int>(),
                       std::move(obstacles))
           : GridSpace(dims[0].get<int>(), dims[1].get<int>(), std::move(obstacles));

  int n = j.contains("robots") ? int(j["robots"].size()) : 0;
  Instance instance{std::move(space), std::vector<Cell>(n), std::vector<Cell>(n), {}};
  std::vector<uint8_t> mask(n, 0);
  bool any_virtual = false;
  std::vector<uint8_t> seen(n, 0);
  for (const auto& r : j["robots"]) {
    if (!r.contains("id")) throw StructuralError("robot entry without id");
    int id = r["id"].get<int>();
    if (id < 1 || id > n || seen[id - 1])
      throw StructuralError("robot ids must be a permutation of 1..n");
    seen[id - 1] = 1;
    instance.starts[id - 1] = cell_from_json(r.at("start"), is3d);
    instance.goals[id - 1] = cell_from_json(r.at("goal"), is3d);
    if (r.value("virtual", false)) {
      mask[id - 1] = 1;
      any_virtual = true;
    }
  }
  if (any_virtual) instance.virtual_mask = std::move(mask);
  instance.check();
  return instance;
}

std::string plan_to_json(const Plan& plan, int indent) {
  json j;
  j["horizon"] = plan.horizon;
  json paths = json::object();
  for (int i = 0; i < plan.num_robots(); ++i) {
    json p = json::array();
    for (const Cell& c : plan.paths[i]) p.push_back(cell_to_json(c, c.z != 0));
    paths[std::to_string(i + 1)] = std::move(p);
  }
  j["paths"] = std::move(paths);
  return dump(j, indent);
}

Plan plan_from_json(const std::string& text) {
  json j = parse(text);
  Plan plan;
  plan.horizon = j.at("horizon").get<int>();
  if (plan.horizon < 0) throw StructuralError("horizon must be non-negative");
  const auto& paths = j.at("paths");
  plan.paths.resize(paths.size());
  for (auto it = paths.begin(); it != paths.end(); ++it) {
    int id = std::stoi(it.key());
    if (id < 1 || id > int(paths.size()))
      throw StructuralError("plan robot ids must be 1..n");
    auto& path = plan.paths[id - 1];
    for (const auto& c : it.value()) {
      bool is3d = c.is_array() && c.size() == 3;
      path.push_back(cell_from_json(c, is3d));
    }
    if (int(path.size()) != plan.horizon + 1)
      throw StructuralError("path length differs from horizon+1");
  }
  return plan;
}

std::string report_to_json(const ValidationReport& report, int indent) {
  json j;
  j["valid"] = report.valid;
  j["violations"] = json::array();
  for (const Violation& v : report.violations) {
    json e;
    e["kind"] = to_string(v.kind);
    e["time"] = v.time;
    e["robots"] = json::array();
    for (int r : v.robots) e["robots"].push_back(r + 1);
    j["violations"].push_back(std::move(e));
  }
  return dump(j, indent);
}

std::string metrics_to_json(const Metrics& metrics, int indent) {
  json j;
  j["makespan"] = metrics.makespan;
  j["soc"] = metrics.soc;
  j["lower_bound"] = metrics.lower_bound;
  j["optimality_ratio"] = metrics.optimality_ratio;
  return dump(j, indent);
}

}  // namespace grplan
