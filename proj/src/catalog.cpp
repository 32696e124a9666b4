#include "tbgeo/catalog.hpp"

namespace tbg {

namespace {

std::vector<std::pair<double, double>> box(int m, double a, double b) {
  return std::vector<std::pair<double, double>>(static_cast<size_t>(m), {a, b});
}

RiemannianChart flat(int m) {
  std::vector<std::string> entries(static_cast<size_t>(m) * m, "0");
  for (int i = 0; i < m; ++i) entries[static_cast<size_t>(i) * m + i] = "1";
  return load_chart(m, entries, box(m, -1.0, 1.0), TorsionSpec::none(),
                    "flat" + std::to_string(m));
}

} // namespace

RiemannianChart catalog_chart(const std::string& name) {
  if (name == "flat" || name == "flat2") return flat(2);
  if (name == "flat3") return flat(3);
  if (name == "flat4") return flat(4);
  if (name == "sphere2") {
    std::string conf = "4/(1+x1^2+x2^2)^2";
    return load_chart(2, {conf, "0", "0", conf}, box(2, -0.8, 0.8), TorsionSpec::none(),
                      "sphere2");
  }
  if (name == "hyperbolic2") {
    std::string conf = "4/(1-x1^2-x2^2)^2";
    return load_chart(2, {conf, "0", "0", conf}, box(2, -0.55, 0.55), TorsionSpec::none(),
                      "hyperbolic2");
  }
  throw GeometryError("unknown catalog chart '" + name + "'");
}

std::vector<std::string> catalog_names() {
  return {"flat2", "flat3", "flat4", "sphere2", "hyperbolic2"};
}

} // namespace tbg
