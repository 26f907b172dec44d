#pragma once

/**
 * @file io.hpp
 * @brief Strict JSON encoding of numbers, decompositions, systems, tuples and
 * reports.
 *
 * Rationals are [num, den]; surds are {"a":[p,q], "b":[r,s], "d":m}. Integers
 * that do not fit in 64 bits may be given as decimal strings. Parsing never
 * fills in a missing mathematical field and rejects unknown keys.
 */

#include "sik/audit.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace sik {

using json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "sik/1";

/// Parse failure carrying the offending field path, e.g. "geodesics[1].rot_rational[0]".
class SchemaError : public std::invalid_argument {
public:
    SchemaError(std::string field, const std::string& message);
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

json int_to_json(const Int& v);
Int int_from_json(const json& j, const std::string& field);

json rational_to_json(const Rational& q);
Rational rational_from_json(const json& j, const std::string& field);

json scalar_to_json(const ExactScalar& x);
ExactScalar scalar_from_json(const json& j, const std::string& field);

json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const json& j, const std::string& field = "");

/// Encodes n, geodesics, and the optional regime name and axiom_j0.
json system_to_json(const GeodesicSystem& s);
/// Structural parse plus validate_system.
GeodesicSystem system_from_json(const json& j);

json tuple_to_json(const JumpTuple& t);
JumpTuple tuple_from_json(const json& j, const std::string& field = "");

/// Reads a file as JSON; syntax errors report line and column.
json read_json_file(const std::filesystem::path& path);

/// read_json_file + system_from_json.
GeodesicSystem parse_config(const std::filesystem::path& path);

json to_json(const SolveStats& s);
json to_json(const VerifyReport& r);
json to_json(const GateResult& r);
json to_json(const MorseReport& r);
json to_json(const Lemma42Report& r);
json to_json(const AuditReport& r);
json to_json(const CensusReport& r);
json to_json(const WeakCountReport& r);

}  // namespace sik
