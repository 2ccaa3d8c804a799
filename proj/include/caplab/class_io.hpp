#pragma once

// JSON formats for classes, vector classes, distributions, and generators.

#include <cstdint>
#include <string>
#include <variant>

#include "json.hpp"

#include "caplab/fclass.hpp"
#include "caplab/risk.hpp"

namespace caplab {

using Json = nlohmann::json;
using AnyClass = std::variant<TabulatedClass, VectorClass>;

/// Parses a file; syntax errors report "path:line:column".
Json read_json_file(const std::string& path);
/// Writes through a temporary file and a rename.
void write_text_file(const std::string& path, const std::string& text);

/// {"M": real, "n": int, "values": [[...], ...]}
TabulatedClass class_from_json(const Json& j);
/// {"C": int, "M": real, "n": int, "components": [matrix, ...]}
VectorClass vector_class_from_json(const Json& j);
/// {"atoms": [{"x": int, "y": int, "p": real}, ...]}
DiscreteDistribution distribution_from_json(const Json& j);
/// Vector class when "components" is present, scalar class otherwise.
AnyClass any_class_from_json(const Json& j);

Json to_json(const TabulatedClass& f);
Json to_json(const VectorClass& g);
Json to_json(const DiscreteDistribution& p);

TabulatedClass read_class(const std::string& path);
VectorClass read_vector_class(const std::string& path);
DiscreteDistribution read_distribution(const std::string& path);

/// Generator descriptions, selected by "kind":
///   uniform:       rows, n, M
///   grid:          rows, n, M, N, shifted (default false)
///   all_functions: n, M, N, shifted (default false), cap (default 65536)
///   product:       components (list of descriptions or literal classes),
///                  assembly "full" (all combinations, default) or "joint"
/// Component k of a product draws from derive_seed(seed, k).
AnyClass generate_class(const Json& spec, std::uint64_t seed);

}  // namespace caplab
