#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "ifc/model.hpp"

// JSON forms of the model types. Complex numbers are always [re, im] pairs.
//   channel spec: {"schema_version": 1, "K": int, "H": [[[re, im], ...], ...]}
//   noise spec:   {"schema_version": 1, "K": int, "Sigma": [[[re, im], ...], ...]}
namespace ifc {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

using ChannelSpec = std::variant<ChannelMatrix, NoiseCorrelation>;

/// Parses a channel or noise spec. Throws SchemaError (with JSON pointer)
/// for structural problems, then any validate_* error.
ChannelSpec parse_channel_spec(std::string_view text);
ChannelSpec channel_spec_from_json(const json& doc);

ChannelMatrix parse_channel(const json& doc);
NoiseCorrelation parse_noise(const json& doc);

json to_json(const ChannelMatrix& h);
json to_json(const NoiseCorrelation& sigma);

json complex_to_json(Complex z);
json matrix_to_json(const CMatrix& m);
json vector_to_json(const std::vector<Complex>& v);

Complex complex_from_json(const json& j, const std::string& pointer);
CMatrix matrix_from_json(const json& j, int rows, int cols, const std::string& pointer);
std::vector<Complex> complex_vector_from_json(const json& j, const std::string& pointer);
std::vector<double> real_vector_from_json(const json& j, const std::string& pointer);

}  // namespace ifc
