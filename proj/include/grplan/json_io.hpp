#pragma once

#include <string>

#include "grplan/instance.hpp"

namespace grplan {

// Wire formats. Coordinates are 1-based; robot ids are 1..n.
// Instance: {"dims":[m1,m2] or [m1,m2,m3], "obstacles":[[x,y],...],
//            "robots":[{"id":k,"start":[...],"goal":[...],"virtual":bool}]}
// Plan:     {"horizon":T, "paths":{"k":[[x,y],...], ...}}

std::string instance_to_json(const Instance& instance, int indent = -1);
Instance instance_from_json(const std::string& text);

std::string plan_to_json(const Plan& plan, int indent = -1);
Plan plan_from_json(const std::string& text);

std::string report_to_json(const ValidationReport& report, int indent = -1);
std::string metrics_to_json(const Metrics& metrics, int indent = -1);

}  // namespace grplan
