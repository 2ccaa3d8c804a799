#include "caplab/class_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "caplab/error.hpp"
#include "caplab/rng.hpp"

namespace caplab {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ValidationError("field '" + field + "': " + what);
}

const Json& member(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) field_error(where.empty() ? "<root>" : where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) field_error(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

double real_field(const Json& j, const std::string& key, const std::string& where = "") {
  const Json& v = member(j, key, where);
  if (!v.is_number()) field_error(key, "expected a number");
  return v.get<double>();
}

std::size_t count_field(const Json& j, const std::string& key, const std::string& where = "") {
  const Json& v = member(j, key, where);
  if (!v.is_number_integer() || v.get<long long>() < 0) field_error(key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::vector<double> matrix_values(const Json& m, double bound, std::size_t n, const std::string& where) {
  if (!m.is_array() || m.empty()) field_error(where, "expected a nonempty array of rows");
  std::vector<double> values;
  for (std::size_t r = 0; r < m.size(); ++r) {
    const std::string row_name = where + "[" + std::to_string(r) + "]";
    if (!m[r].is_array()) field_error(row_name, "expected an array");
    if (m[r].size() != n)
      field_error(row_name, "has " + std::to_string(m[r].size()) + " entries, expected n = " + std::to_string(n));
    for (std::size_t c = 0; c < n; ++c) {
      const Json& v = m[r][c];
      const std::string cell = row_name + "[" + std::to_string(c) + "]";
      if (!v.is_number()) field_error(cell, "expected a number");
      const double x = v.get<double>();
      if (!(std::fabs(x) <= bound)) field_error(cell, "value " + std::to_string(x) + " exceeds M = " + std::to_string(bound));
      values.push_back(x);
    }
  }
  return values;
}

void check_header(const Json& j, double& bound, std::size_t& n) {
  bound = real_field(j, "M");
  if (!(bound > 0.0)) field_error("M", "must be positive");
  n = count_field(j, "n");
  if (n == 0) field_error("n", "must be >= 1");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
T with_path(const std::string& path, T (*fn)(const Json&)) {
  const Json j = read_json_file(path);
  try {
    return fn(j);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace

Json read_json_file(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ValidationError(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": JSON syntax error");
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + tmp + "'");
    out << text;
    if (!out) throw ValidationError("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, target);
}

TabulatedClass class_from_json(const Json& j) {
  double bound;
  std::size_t n;
  check_header(j, bound, n);
  return TabulatedClass(bound, n, matrix_values(member(j, "values", ""), bound, n, "values"));
}

VectorClass vector_class_from_json(const Json& j) {
  double bound;
  std::size_t n;
  check_header(j, bound, n);
  const std::size_t c = count_field(j, "C");
  if (c < 3) field_error("C", "must be >= 3");
  if (bound < 1.0) field_error("M", "vector class bound must be >= 1");
  const Json& comps = member(j, "components", "");
  if (!comps.is_array() || comps.size() != c)
    field_error("components", "expected an array of C = " + std::to_string(c) + " matrices");
  std::vector<TabulatedClass> out;
  for (std::size_t k = 0; k < c; ++k) {
    const std::string where = "components[" + std::to_string(k) + "]";
    out.emplace_back(bound, n, matrix_values(comps[k], bound, n, where));
    if (out.back().size() != out.front().size())
      field_error(where, "row count differs from components[0]");
  }
  return VectorClass(std::move(out));
}

DiscreteDistribution distribution_from_json(const Json& j) {
  const Json& atoms = member(j, "atoms", "");
  if (!atoms.is_array() || atoms.empty()) field_error("atoms", "expected a nonempty array");
  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string where = "atoms[" + std::to_string(i) + "]";
    const Json& a = atoms[i];
    try {
      out.push_back({count_field(a, "x", where), count_field(a, "y", where), real_field(a, "p", where)});
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return DiscreteDistribution(std::move(out));
}

AnyClass any_class_from_json(const Json& j) {
  if (j.is_object() && j.contains("components")) return vector_class_from_json(j);
  return class_from_json(j);
}

Json to_json(const TabulatedClass& f) {
  return Json{{"M", f.bound()}, {"n", f.ground_size()}, {"values", f.rows()}};
}

Json to_json(const VectorClass& g) {
  Json comps = Json::array();
  for (const auto& c : g.components()) comps.push_back(c.rows());
  return Json{{"C", g.categories()}, {"M", g.bound()}, {"n", g.ground_size()}, {"components", comps}};
}

Json to_json(const DiscreteDistribution& p) {
  Json atoms = Json::array();
  for (const auto& a : p.atoms()) atoms.push_back(Json{{"x", a.x}, {"y", a.y}, {"p", a.p}});
  return Json{{"atoms", atoms}};
}

TabulatedClass read_class(const std::string& path) { return with_path(path, &class_from_json); }
VectorClass read_vector_class(const std::string& path) { return with_path(path, &vector_class_from_json); }
DiscreteDistribution read_distribution(const std::string& path) {
  return with_path(path, &distribution_from_json);
}

AnyClass generate_class(const Json& spec, std::uint64_t seed) {
  if (!spec.is_object()) field_error("<root>", "generator description must be an object");
  if (!spec.contains("kind")) {
    if (spec.contains("values") || spec.contains("components")) return any_class_from_json(spec);
    field_error("kind", "missing");
  }
  const std::string kind = member(spec, "kind", "").get<std::string>();
  const bool shifted = spec.value("shifted", false);
  if (kind == "uniform")
    return generate_uniform(count_field(spec, "rows"), count_field(spec, "n"), real_field(spec, "M"), seed);
  if (kind == "grid") {
    const CodomainGrid grid(real_field(spec, "M"), count_field(spec, "N"));
    return generate_grid(count_field(spec, "rows"), count_field(spec, "n"), grid, shifted, seed);
  }
  if (kind == "all_functions") {
    const CodomainGrid grid(real_field(spec, "M"), count_field(spec, "N"));
    const std::size_t cap = spec.contains("cap") ? count_field(spec, "cap") : std::size_t{1} << 16;
    return enumerate_all_functions(count_field(spec, "n"), grid, shifted, cap);
  }
  if (kind == "product") {
    const Json& comps = member(spec, "components", "");
    if (!comps.is_array() || comps.empty()) field_error("components", "expected a nonempty array");
    std::vector<TabulatedClass> parts;
    for (std::size_t k = 0; k < comps.size(); ++k) {
      AnyClass c = generate_class(comps[k], derive_seed(seed, k));
      if (!std::holds_alternative<TabulatedClass>(c))
        field_error("components[" + std::to_string(k) + "]", "must describe a scalar class");
      parts.push_back(std::get<TabulatedClass>(std::move(c)));
    }
    const std::string assembly = spec.value("assembly", std::string("full"));
    if (assembly == "full") {
      const std::size_t cap = spec.contains("cap") ? count_field(spec, "cap") : 4096;
      return assemble_product(parts, cap);
    }
    if (assembly == "joint") return VectorClass(std::move(parts));
    field_error("assembly", "expected 'full' or 'joint'");
  }
  field_error("kind", "unknown generator '" + kind + "'");
}

}  // namespace caplab
