#pragma once

// Instance files: a JSON document with format tag "sheaftree/1".
//
//   {"format": "sheaftree/1", "field": "Q" | "Fp:<p>",
//    "tree":  {"vertices": n, "edges": [[id, x, y], ...]},
//    "sheaf": {"vertex_dims": [...], "edge_dims": [...],
//              "restrictions": {"v:e": [[scalar strings]], ...}},
//    "group": {"order": n, "mul": [[...]], "vertex_perm": [[...]], "edge_perm": [[...]],
//              "eta_vertices": {"g:v": M}, "eta_edges": {"g:e": M}}}
//
// The group section is optional. Matrices with a zero dimension may be omitted.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sheaftree/equivariant.hpp"
#include "sheaftree/sheaf.hpp"

namespace sheaftree {

class SchemaError : public std::invalid_argument {
public:
    SchemaError(const std::string& location, const std::string& what)
        : std::invalid_argument(location + ": " + what), location_(location) {}
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

/// A module-level validation failure; `section` is field, tree, sheaf or group.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(const std::string& section, const std::string& what)
        : std::invalid_argument(section + ": " + what), section_(section) {}
    const std::string& section() const { return section_; }

private:
    std::string section_;
};

struct Instance {
    Sheaf sheaf;
    std::optional<EquivariantSheaf> equivariant;

    friend bool operator==(const Instance& a, const Instance& b);
};

inline constexpr std::string_view kFormatTag = "sheaftree/1";

/// Throws SchemaError, ScalarParseError (with location) or ValidationError.
Instance parse_instance(std::string_view text);
Instance instance_from_json(const nlohmann::ordered_json& doc);

nlohmann::ordered_json instance_to_json(const Instance& inst);
std::string serialize_instance(const Instance& inst);

/// FNV-1a over the canonical serialization, as 16 hex digits.
std::string instance_digest(const Instance& inst);

nlohmann::ordered_json matrix_to_json(const Matrix& m);

}  // namespace sheaftree
