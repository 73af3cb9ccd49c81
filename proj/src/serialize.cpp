#include "ifc/serialize.hpp"

namespace ifc {

namespace {

const json& member(const json& doc, const char* key, const std::string& parent) {
  const std::string where = parent + "/" + key;
  if (!doc.is_object()) throw SchemaError(parent.empty() ? "" : parent, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError(where, "missing required field");
  return *it;
}

int read_users(const json& doc) {
  const json& k = member(doc, "K", "");
  if (!k.is_number_integer()) throw SchemaError("/K", "expected an integer");
  const auto value = k.get<long long>();
  if (value < 1) throw SchemaError("/K", "must be at least 1");
  if (value > 4096) throw SchemaError("/K", "unreasonably large");
  return static_cast<int>(value);
}

void check_version(const json& doc) {
  auto it = doc.find("schema_version");
  if (it == doc.end()) return;
  if (!it->is_number_integer() || it->get<int>() != kSchemaVersion)
    throw SchemaError("/schema_version", "unsupported schema version");
}

}  // namespace

Complex complex_from_json(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw SchemaError(pointer, "expected a [re, im] pair of numbers");
  return {j[0].get<double>(), j[1].get<double>()};
}

CMatrix matrix_from_json(const json& j, int rows, int cols, const std::string& pointer) {
  if (!j.is_array()) throw SchemaError(pointer, "expected an array of rows");
  if (static_cast<int>(j.size()) != rows)
    throw SchemaError(pointer, "expected " + std::to_string(rows) + " rows, got " +
                                   std::to_string(j.size()));
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const std::string row_ptr = pointer + "/" + std::to_string(r);
    const json& row = j[r];
    if (!row.is_array()) throw SchemaError(row_ptr, "expected an array");
    if (static_cast<int>(row.size()) != cols)
      throw SchemaError(row_ptr, "expected " + std::to_string(cols) + " entries, got " +
                                     std::to_string(row.size()));
    for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[c], row_ptr + "/" + std::to_string(c));
  }
  return m;
}

std::vector<Complex> complex_vector_from_json(const json& j, const std::string& pointer) {
  if (!j.is_array()) throw SchemaError(pointer, "expected an array");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(complex_from_json(j[i], pointer + "/" + std::to_string(i)));
  return out;
}

std::vector<double> real_vector_from_json(const json& j, const std::string& pointer) {
  if (!j.is_array()) throw SchemaError(pointer, "expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError(pointer + "/" + std::to_string(i), "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

ChannelMatrix parse_channel(const json& doc) {
  check_version(doc);
  const int k = read_users(doc);
  return ChannelMatrix::validate(matrix_from_json(member(doc, "H", ""), k, k, "/H"));
}

NoiseCorrelation parse_noise(const json& doc) {
  check_version(doc);
  const int k = read_users(doc);
  return NoiseCorrelation::validate(matrix_from_json(member(doc, "Sigma", ""), k, k, "/Sigma"));
}

ChannelSpec channel_spec_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "expected a JSON object");
  const bool has_h = doc.contains("H");
  const bool has_sigma = doc.contains("Sigma");
  if (has_h && has_sigma) throw SchemaError("", "document has both \"H\" and \"Sigma\"");
  if (has_sigma) return parse_noise(doc);
  if (!has_h) {
    read_users(doc);  // report a missing K before a missing matrix
    throw SchemaError("/H", "missing required field (or \"Sigma\")");
  }
  return parse_channel(doc);
}

ChannelSpec parse_channel_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  return channel_spec_from_json(doc);
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const std::vector<Complex>& v) {
  json out = json::array();
  for (const Complex& z : v) out.push_back(complex_to_json(z));
  return out;
}

json to_json(const ChannelMatrix& h) {
  return json{{"schema_version", kSchemaVersion}, {"K", h.users()}, {"H", matrix_to_json(h.gains())}};
}

json to_json(const NoiseCorrelation& sigma) {
  return json{{"schema_version", kSchemaVersion},
              {"K", sigma.users()},
              {"Sigma", matrix_to_json(sigma.matrix())}};
}

}  // namespace ifc
