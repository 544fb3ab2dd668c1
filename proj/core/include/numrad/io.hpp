#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "numrad/matrix.hpp"

namespace numrad {

/// Matrix JSON: {"n": <int>, "entries": [[[re, im], ...], ...]}, row-major.
/// Vector JSON uses the same shape one level down: {"n": <int>, "entries": [[re, im], ...]}.
/// Parsing throws ParseError for malformed text, ragged rows or a wrong n, and
/// NonFinite for non-finite entries.
ComplexMatrix parse_matrix(std::string_view text);
Vector parse_vector(std::string_view text);

std::string format_matrix(const ComplexMatrix& m);
std::string format_vector(std::span<const Complex> v);

/// File wrappers; IoFailure when the file cannot be read or written.
ComplexMatrix read_matrix(const std::filesystem::path& path);
Vector read_vector(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const ComplexMatrix& m);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace numrad
