#pragma once

#include <string>
#include <vector>

#include "tbgeo/geometry_base.hpp"

namespace tbg {

// Shipped charts: flat2/flat3/flat4 (with "flat" as an alias for flat2),
// sphere2 in stereographic coordinates, hyperbolic2 on the Poincare disk.
// Domains keep the samples away from the chart singularities.
RiemannianChart catalog_chart(const std::string& name);

std::vector<std::string> catalog_names();

} // namespace tbg
