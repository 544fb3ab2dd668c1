#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "numrad/inequalities.hpp"
#include "numrad/matrix.hpp"
#include "numrad/random.hpp"

namespace numrad {

enum class OperatorClass {
  Ginibre,
  Hermitian,
  Psd,
  PsdInvertible,
  Unitary,
  Normal,
  Nilpotent,
  HermitianInvertible,
  RankDeficient,
  Contraction,
};

inline constexpr std::array<OperatorClass, 10> kAllClasses{
    OperatorClass::Ginibre,       OperatorClass::Hermitian,   OperatorClass::Psd,
    OperatorClass::PsdInvertible, OperatorClass::Unitary,     OperatorClass::Normal,
    OperatorClass::Nilpotent,     OperatorClass::HermitianInvertible, OperatorClass::RankDeficient,
    OperatorClass::Contraction,
};

std::string_view to_string(OperatorClass c);
/// Throws InvalidConfig for an unknown tag.
OperatorClass parse_operator_class(std::string_view tag);

/// Draws an n x n sample of the class from the stream. Throws OutOfRange for n = 0.
ComplexMatrix generate(OperatorClass c, std::size_t n, RngStream& rng);

/// The class predicate, evaluated with classify() at 1e-10.
bool satisfies_class(OperatorClass c, const ComplexMatrix& m);

/// Classes for the A, B and X operands of one trial.
struct ClassTriple {
  OperatorClass a, b, x;
};

/// Ten operand pairings cycled by trial index; between them they meet the
/// hypotheses of every registry entry.
std::vector<ClassTriple> default_class_schedule();

struct FuzzConfig {
  std::size_t trials = 1000;
  std::vector<std::size_t> dims{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
  std::vector<ClassTriple> classes = default_class_schedule();
  ParamGrid grid;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  std::vector<std::string> checker_filter;
  /// 0 = NUMRAD_THREADS if set, else hardware concurrency.
  unsigned threads = 0;

  /// Throws InvalidConfig (trials >= 1, dims nonempty and >= 1, schedule and
  /// grid nonempty, known checker ids, tol > 0).
  void validate() const;
};

struct FuzzRow {
  std::size_t trial = 0;
  std::size_t dim = 0;
  ClassTriple classes{};
  std::uint64_t sub_seed = 0;
  CheckResult result;
};

struct CheckerSummary {
  std::size_t count = 0;  ///< rows, one per link evaluation
  std::size_t runs = 0;   ///< evaluations of the entry (rows of its first link)
  double min_slack = 0.0;
  double median_slack = 0.0;
  std::size_t violations = 0;
};

struct FuzzReport {
  std::vector<FuzzRow> rows;
  std::map<std::string, CheckerSummary> summary;
  std::vector<std::string> notes;  ///< per-trial failures and observations
};

/// Trial t draws from RngStream(derive_sub_seed(seed, t)): dimension, then A,
/// B, X, then vectors x (unit), y, e (unit) and scalars a, b in [0, 3).
/// Trials run in parallel; rows are assembled in (trial, registry, grid) order
/// so output does not depend on the thread count.
FuzzReport run_sweep(const FuzzConfig& config);

std::map<std::string, CheckerSummary> summarize(const std::vector<FuzzRow>& rows);

enum class ReportFormat { Csv, Json };

std::string report_csv(const FuzzReport& report);
std::string report_json(const FuzzReport& report);
/// Throws IoFailure.
void write_report(const FuzzReport& report, const std::filesystem::path& path, ReportFormat format);

/// Reads a report written by write_report; format chosen from the content.
/// Throws IoFailure, ParseError.
FuzzReport read_report(const std::filesystem::path& path);
FuzzReport parse_report(std::string_view text);

}  // namespace numrad
