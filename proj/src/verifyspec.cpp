#include "tbgeo/verifyspec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <tuple>

#include "tbgeo/catalog.hpp"

namespace tbg {

namespace {

struct Assignment {
  std::string key;
  std::string value;
  size_t key_off = 0;
  size_t value_off = 0;
};

bool key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '.' || c == '[' ||
         c == ']';
}

bool space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::vector<Assignment> lex(std::string_view text) {
  std::vector<Assignment> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();

    size_t i = pos;
    while (i < eol && space(text[i])) ++i;
    if (i < eol && text[i] != '#') {
      const size_t key_start = i;
      while (i < eol && key_char(text[i])) ++i;
      if (i == key_start) throw SpecError("expected a key", i);
      std::string key(text.substr(key_start, i - key_start));
      while (i < eol && space(text[i])) ++i;
      if (i == eol || text[i] != '=')
        throw SpecError("expected '=' after key '" + key + "'", i);
      ++i;
      while (i < eol && space(text[i])) ++i;

      // value ends at an unquoted '#' or at end of line, trailing blanks cut
      size_t vend = i;
      bool in_quote = false;
      for (size_t j = i; j < eol; ++j) {
        if (text[j] == '"') in_quote = !in_quote;
        if (text[j] == '#' && !in_quote) break;
        if (!space(text[j])) vend = j + 1;
      }
      if (vend == i) throw SpecError("missing value for key '" + key + "'", i);
      out.push_back({std::move(key), std::string(text.substr(i, vend - i)), key_start, i});
    }
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return out;
}

long long parse_int(const Assignment& a) {
  long long v = 0;
  auto [p, ec] = std::from_chars(a.value.data(), a.value.data() + a.value.size(), v);
  if (ec != std::errc{} || p != a.value.data() + a.value.size())
    throw SpecError("expected an integer for '" + a.key + "'", a.value_off);
  return v;
}

std::uint64_t parse_u64(const Assignment& a) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(a.value.data(), a.value.data() + a.value.size(), v);
  if (ec != std::errc{} || p != a.value.data() + a.value.size())
    throw SpecError("expected an unsigned integer for '" + a.key + "'", a.value_off);
  return v;
}

double parse_num(const Assignment& a) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(a.value.data(), a.value.data() + a.value.size(), v);
  if (ec != std::errc{} || p != a.value.data() + a.value.size())
    throw SpecError("expected a number for '" + a.key + "'", a.value_off);
  return v;
}

// contents of a quoted value plus the byte offset of its first character
std::pair<std::string, size_t> quoted(const Assignment& a) {
  if (a.value.size() < 2 || a.value.front() != '"' || a.value.back() != '"')
    throw SpecError("expected a quoted expression for '" + a.key + "'", a.value_off);
  return {a.value.substr(1, a.value.size() - 2), a.value_off + 1};
}

Expr parse_expr(const std::string& src, int dim, size_t content_off) {
  try {
    return parse(src, dim);
  } catch (const ParseError& e) {
    throw SpecError(e.what(), content_off + e.offset());
  }
}

// bracketed 1-based index list after a prefix, e.g. g[1][2]
std::optional<std::vector<int>> indexed_key(const std::string& key, const std::string& prefix,
                                            size_t count) {
  if (key.size() <= prefix.size() || key.compare(0, prefix.size(), prefix) != 0)
    return std::nullopt;
  std::vector<int> idx;
  size_t i = prefix.size();
  while (i < key.size()) {
    if (key[i] != '[') return std::nullopt;
    size_t close = key.find(']', i);
    if (close == std::string::npos) return std::nullopt;
    int v = 0;
    auto [p, ec] = std::from_chars(key.data() + i + 1, key.data() + close, v);
    if (ec != std::errc{} || p != key.data() + close) return std::nullopt;
    idx.push_back(v);
    i = close + 1;
  }
  if (idx.size() != count) return std::nullopt;
  return idx;
}

std::vector<std::pair<double, double>> parse_domain(const Assignment& a, int dim) {
  std::vector<std::pair<double, double>> out;
  const std::string& s = a.value;
  size_t i = 0;
  auto fail = [&](const char* msg, size_t at) -> void {
    throw SpecError(std::string("domain: ") + msg, a.value_off + at);
  };
  auto number = [&]() {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
    if (ec != std::errc{}) fail("expected a number", i);
    i = static_cast<size_t>(p - s.data());
    return v;
  };
  while (i < s.size()) {
    while (i < s.size() && space(s[i])) ++i;
    if (i == s.size()) break;
    if (s[i] != '[') fail("expected '['", i);
    ++i;
    double lo = number();
    if (i >= s.size() || s[i] != ',') fail("expected ','", i);
    ++i;
    double hi = number();
    if (i >= s.size() || s[i] != ']') fail("expected ']'", i);
    ++i;
    if (!(lo < hi)) fail("empty interval", i - 1);
    out.emplace_back(lo, hi);
  }
  if (static_cast<int>(out.size()) != dim)
    throw SpecError("domain needs one interval per coordinate", a.value_off);
  return out;
}

} // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"base", "connection", "hermitian", "contact",
                                                 "dynamics"};
  return names;
}

VerifySpec parse_verify_spec(std::string_view text, std::string name) {
  std::optional<Assignment> a_catalog, a_dim, a_domain, a_torsion, a_potential, a_phi1, a_phi2,
      a_radius, a_samples, a_seed, a_suite, a_f3, a_f4, a_f5, a_f6;
  std::map<std::pair<int, int>, Assignment> a_g;
  std::map<std::tuple<int, int, int>, Assignment> a_t;

  auto set_once = [](std::optional<Assignment>& slot, const Assignment& a) {
    if (slot) throw SpecError("duplicate key '" + a.key + "'", a.key_off);
    slot = a;
  };

  for (const Assignment& a : lex(text)) {
    if (auto idx = indexed_key(a.key, "g", 2)) {
      auto key = std::make_pair((*idx)[0], (*idx)[1]);
      if (a_g.count(key)) throw SpecError("duplicate key '" + a.key + "'", a.key_off);
      a_g.emplace(key, a);
    } else if (auto tidx = indexed_key(a.key, "torsion.T", 3)) {
      auto key = std::make_tuple((*tidx)[0], (*tidx)[1], (*tidx)[2]);
      if (a_t.count(key)) throw SpecError("duplicate key '" + a.key + "'", a.key_off);
      a_t.emplace(key, a);
    } else if (a.key == "catalog") {
      set_once(a_catalog, a);
    } else if (a.key == "dim") {
      set_once(a_dim, a);
    } else if (a.key == "domain") {
      set_once(a_domain, a);
    } else if (a.key == "torsion") {
      set_once(a_torsion, a);
    } else if (a.key == "torsion.potential") {
      set_once(a_potential, a);
    } else if (a.key == "phi1") {
      set_once(a_phi1, a);
    } else if (a.key == "phi2") {
      set_once(a_phi2, a);
    } else if (a.key == "radius") {
      set_once(a_radius, a);
    } else if (a.key == "f3") {
      set_once(a_f3, a);
    } else if (a.key == "f4") {
      set_once(a_f4, a);
    } else if (a.key == "f5") {
      set_once(a_f5, a);
    } else if (a.key == "f6") {
      set_once(a_f6, a);
    } else if (a.key == "samples") {
      set_once(a_samples, a);
    } else if (a.key == "seed") {
      set_once(a_seed, a);
    } else if (a.key == "suite") {
      set_once(a_suite, a);
    } else {
      throw SpecError("unknown key '" + a.key + "'", a.key_off);
    }
  }

  VerifySpec spec;
  spec.name = std::move(name);

  // chart: catalog or inline metric
  int dim = 0;
  if (a_catalog) {
    for (const auto* conflict : {&a_dim, &a_domain}) {
      if (*conflict)
        throw SpecError("'" + (*conflict)->key + "' conflicts with 'catalog'",
                        (*conflict)->key_off);
    }
    if (!a_g.empty())
      throw SpecError("inline metric entries conflict with 'catalog'",
                      a_g.begin()->second.key_off);
    try {
      spec.chart = catalog_chart(a_catalog->value);
    } catch (const GeometryError& e) {
      throw SpecError(e.what(), a_catalog->value_off);
    }
    dim = spec.chart.dim;
  } else {
    if (!a_dim) throw SpecError("spec needs either 'catalog' or 'dim'", 0);
    long long d = parse_int(*a_dim);
    if (d < 2 || d > 6) throw SpecError("dim must be between 2 and 6", a_dim->value_off);
    dim = static_cast<int>(d);
    if (!a_domain) throw SpecError("inline charts need a 'domain'", 0);

    std::vector<std::string> entries(static_cast<size_t>(dim) * dim);
    std::vector<bool> given(entries.size(), false);
    for (const auto& [ij, a] : a_g) {
      auto [i, j] = ij;
      if (i < 1 || i > dim || j < 1 || j > dim)
        throw SpecError("metric index out of range in '" + a.key + "'", a.key_off);
      auto [src, off] = quoted(a);
      parse_expr(src, dim, off);
      entries[static_cast<size_t>(i - 1) * dim + (j - 1)] = src;
      given[static_cast<size_t>(i - 1) * dim + (j - 1)] = true;
    }
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        size_t ij = static_cast<size_t>(i) * dim + j, ji = static_cast<size_t>(j) * dim + i;
        if (!given[ij]) entries[ij] = given[ji] ? entries[ji] : "0";
      }

    const size_t chart_off = a_g.empty() ? a_dim->value_off : a_g.begin()->second.key_off;
    try {
      spec.chart = load_chart(dim, entries, parse_domain(*a_domain, dim), TorsionSpec::none(),
                              "inline");
    } catch (const GeometryError& e) {
      throw SpecError(e.what(), chart_off);
    }
  }

  // torsion
  std::string kind = a_torsion ? a_torsion->value : "none";
  if (kind == "none") {
    if (a_potential)
      throw SpecError("'torsion.potential' needs torsion = vectorial", a_potential->key_off);
    if (!a_t.empty())
      throw SpecError("'torsion.T' entries need torsion = general", a_t.begin()->second.key_off);
  } else if (kind == "vectorial") {
    if (!a_potential)
      throw SpecError("torsion = vectorial needs 'torsion.potential'", a_torsion->key_off);
    if (!a_t.empty())
      throw SpecError("'torsion.T' entries need torsion = general", a_t.begin()->second.key_off);
    auto [src, off] = quoted(*a_potential);
    spec.chart.torsion = TorsionSpec::vectorial(parse_expr(src, dim, off));
  } else if (kind == "general") {
    if (a_potential)
      throw SpecError("'torsion.potential' needs torsion = vectorial", a_potential->key_off);
    std::vector<std::string> comp(static_cast<size_t>(dim) * dim * dim, "0");
    std::vector<bool> given(comp.size(), false);
    for (const auto& [ijk, a] : a_t) {
      auto [i, j, k] = ijk;
      if (i < 1 || i > dim || j < 1 || j > dim || k < 1 || k > dim)
        throw SpecError("torsion index out of range in '" + a.key + "'", a.key_off);
      auto [src, off] = quoted(a);
      parse_expr(src, dim, off);
      size_t at = (static_cast<size_t>(i - 1) * dim + (j - 1)) * dim + (k - 1);
      comp[at] = src;
      given[at] = true;
    }
    // unspecified entries antisymmetrized from their mirror, then zero
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) {
          size_t ijk = (static_cast<size_t>(i) * dim + j) * dim + k;
          size_t jik = (static_cast<size_t>(j) * dim + i) * dim + k;
          if (!given[ijk] && given[jik]) comp[ijk] = "-(" + comp[jik] + ")";
        }
    std::vector<Expr> parsed;
    parsed.reserve(comp.size());
    for (const auto& src : comp) parsed.push_back(parse(src, dim));

    // sampled antisymmetry check over the first two slots
    std::mt19937_64 rng(0x70a5u);
    for (int trial = 0; trial < 8; ++trial) {
      Vec x(dim);
      for (int i = 0; i < dim; ++i) {
        std::uniform_real_distribution<double> u(spec.chart.domain[static_cast<size_t>(i)].first,
                                                 spec.chart.domain[static_cast<size_t>(i)].second);
        x[i] = u(rng);
      }
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          for (int k = 0; k < dim; ++k) {
            double fwd = eval(parsed[(static_cast<size_t>(i) * dim + j) * dim + k], x);
            double rev = eval(parsed[(static_cast<size_t>(j) * dim + i) * dim + k], x);
            if (std::abs(fwd + rev) > 1e-12)
              throw SpecError("torsion is not antisymmetric in its first two slots",
                              a_t.empty() ? a_torsion->value_off
                                          : a_t.begin()->second.key_off);
          }
    }
    spec.chart.torsion = TorsionSpec::general(std::move(parsed));
  } else {
    throw SpecError("torsion must be none, vectorial or general", a_torsion->value_off);
  }

  // weights
  spec.weights = WeightSpec::unit(dim);
  auto weight_expr = [&](const std::optional<Assignment>& a, Expr& slot) {
    if (!a) return;
    auto [src, off] = quoted(*a);
    slot = parse_expr(src, dim, off);
  };
  weight_expr(a_phi1, spec.weights.phi1);
  weight_expr(a_phi2, spec.weights.phi2);
  weight_expr(a_radius, spec.weights.radius);
  if (a_f3) spec.weights.f3 = parse_num(*a_f3);
  if (a_f4) spec.weights.f4 = parse_num(*a_f4);
  if (a_f5) spec.weights.f5 = parse_num(*a_f5);
  if (a_f6) spec.weights.f6 = parse_num(*a_f6);
  try {
    validate_weights(spec.chart, spec.weights);
  } catch (const GeometryError& e) {
    size_t off = a_radius ? a_radius->value_off : (a_f3 ? a_f3->value_off : 0);
    throw SpecError(e.what(), off);
  }

  if (a_samples) {
    long long s = parse_int(*a_samples);
    if (s < 1) throw SpecError("samples must be at least 1", a_samples->value_off);
    spec.samples = static_cast<int>(s);
  }
  if (a_seed) spec.seed = parse_u64(*a_seed);

  if (a_suite) {
    std::istringstream words(a_suite->value);
    std::string w;
    while (words >> w) {
      if (w == "all") {
        spec.suites.clear();
        break;
      }
      const auto& names = suite_names();
      if (std::find(names.begin(), names.end(), w) == names.end())
        throw SpecError("unknown suite '" + w + "'", a_suite->value_off);
      spec.suites.push_back(w);
    }
  }

  return spec;
}

VerifySpec load_verify_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot read spec file '" + path + "'", std::string::npos);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_verify_spec(buf.str(), path);
}

} // namespace tbg
