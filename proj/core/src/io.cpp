#include "numrad/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "numrad/error.hpp"

namespace numrad {

namespace {

using nlohmann::json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::out_of_range& e) {
    // Literals such as 1e400 overflow to infinity.
    throw Error(ErrorKind::NonFinite, e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

std::size_t declared_size(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "expected a JSON object");
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 0) {
    throw Error(ErrorKind::ParseError, "\"n\" must be a nonnegative integer");
  }
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    throw Error(ErrorKind::ParseError, "\"entries\" must be an array");
  }
  return doc["n"].get<std::size_t>();
}

Complex parse_entry(const json& e) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    throw Error(ErrorKind::ParseError, "entry must be [re, im]");
  }
  const double re = e[0].get<double>();
  const double im = e[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) throw Error(ErrorKind::NonFinite, "non-finite entry");
  return {re, im};
}

json entry_json(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace

ComplexMatrix parse_matrix(std::string_view text) {
  const json doc = parse_json(text);
  const std::size_t n = declared_size(doc);
  const json& rows = doc["entries"];
  if (rows.size() != n) throw Error(ErrorKind::ParseError, "row count differs from n");
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) throw Error(ErrorKind::ParseError, "ragged row " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) m(i, j) = parse_entry(rows[i][j]);
  }
  return m;
}

Vector parse_vector(std::string_view text) {
  const json doc = parse_json(text);
  const std::size_t n = declared_size(doc);
  const json& entries = doc["entries"];
  if (entries.size() != n) throw Error(ErrorKind::ParseError, "entry count differs from n");
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = parse_entry(entries[i]);
  return v;
}

std::string format_matrix(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(entry_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"n", m.size()}, {"entries", std::move(rows)}}.dump();
}

std::string format_vector(std::span<const Complex> v) {
  json entries = json::array();
  for (Complex z : v) entries.push_back(entry_json(z));
  return json{{"n", v.size()}, {"entries", std::move(entries)}}.dump();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::IoFailure, "cannot read " + path.string());
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
}

ComplexMatrix read_matrix(const std::filesystem::path& path) { return parse_matrix(read_text(path)); }

Vector read_vector(const std::filesystem::path& path) { return parse_vector(read_text(path)); }

void write_matrix(const std::filesystem::path& path, const ComplexMatrix& m) { write_text(path, format_matrix(m)); }

}  // namespace numrad
