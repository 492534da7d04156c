#pragma once

#include <qhd/birational.hpp>
#include <qhd/curve_config.hpp>
#include <qhd/discriminant.hpp>
#include <qhd/search.hpp>

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace qhd {

using Json = nlohmann::json;

/// Malformed or inconsistent input file.
class FormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

auto to_json(const CurveConfig & config) -> Json;
/// Throws FormatError on schema errors and on configurations that fail validate().
auto config_from_json(const Json & j) -> CurveConfig;

auto to_json(const IncidencePoint & point) -> Json;
auto to_json(const BlowDownRecord & record) -> Json;
auto to_json(const Subgroup & h) -> Json;
auto to_json(const FiniteAbelianGroup & g) -> Json;
auto to_json(const RationalVector & v) -> Json;

/// {"extras": [{"attach": [ids]}, ...]}
auto placement_from_json(const CurveConfig & gamma, const Json & j) -> Placement;
auto placement_to_json(const CurveConfig & gamma, const Placement & placement) -> Json;

auto to_json(const CurveConfig & gamma, const ClassificationResult & result) -> Json;

auto read_json_file(const std::string & path) -> Json;
/// Sorted keys, two-space indent, trailing newline.
auto dump(const Json & j) -> std::string;

} // namespace qhd
