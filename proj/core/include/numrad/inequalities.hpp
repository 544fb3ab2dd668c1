#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "numrad/matrix.hpp"

namespace numrad {

struct CheckParams {
  double r = 1.0;
  double p = 2.0;
  double q = 2.0;
  double alpha = 0.5;
  int n_power = 1;
  double s = 0.5;  ///< exponent of the power function pair f = t^s, g = t^{1-s}
};

/// Parameters an entry actually reads; the rest are reported empty.
struct ParamUse {
  bool r = false;
  bool pq = false;
  bool alpha = false;
  bool n_power = false;
  bool s = false;
};

struct CheckResult {
  std::string checker_id;
  std::string link;  ///< "main" for single-link entries
  CheckParams params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  ///< rhs - lhs
  bool satisfied = false;
  double tolerance = 0.0;
  std::string operand_digest;
  std::string notes;
};

/// Operands by role. Matrix entries read A, B, X; vector entries read x, y, e;
/// the scalar Young entry reads a, b.
struct OperandBundle {
  std::optional<ComplexMatrix> A, B, X;
  std::optional<Vector> x, y, e;
  std::optional<double> a, b;

  std::string digest() const;
};

struct CheckerInfo {
  std::string_view id;
  std::string_view alias;
  std::string_view summary;
  ParamUse uses;
  std::vector<std::string_view> links;
};

/// Registry entries in canonical order R01..R26.
const std::vector<CheckerInfo>& registry();

/// Looks up an id ("R07") or alias ("mixed_power_square"), case-insensitive.
/// Throws UnknownChecker.
const CheckerInfo& find_checker(std::string_view id_or_alias);

/// Violated hypotheses of the entry for these operands and parameters; empty
/// when the entry may run. Throws UnknownChecker.
std::vector<std::string> applicable(std::string_view id, const OperandBundle& ops, const CheckParams& params);

/// Evaluates one entry, one result per link in registry order.
/// satisfied <=> slack >= -tolerance, tolerance = tol * max(1, |lhs|, |rhs|)
/// plus the propagated radius certificate error. Radii are computed to
/// tol / 10 * max(1, ||M||). Throws PreconditionViolated, UnknownChecker.
std::vector<CheckResult> check(std::string_view id, const OperandBundle& ops, const CheckParams& params,
                               double tol = 1e-8);

struct ParamGrid {
  std::vector<double> r{1.0, 1.5, 2.0, 3.0};
  std::vector<std::pair<double, double>> pq{{2.0, 2.0}, {3.0, 1.5}, {4.0, 4.0 / 3.0}};
  std::vector<double> alpha{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<int> n_power{1, 2, 3, 4};
  std::vector<double> s{0.0, 0.25, 0.5, 0.75, 1.0};

  bool empty() const { return r.empty() || pq.empty() || alpha.empty() || n_power.empty() || s.empty(); }
};

/// Parameter points an entry is evaluated at: the product of the grid axes it
/// uses, in (r, pq, alpha, n_power, s) nesting order.
std::vector<CheckParams> grid_points(const CheckerInfo& info, const ParamGrid& grid);

/// Every entry whose operand hypotheses hold, over its grid points. Points
/// failing a parameter constraint are skipped. Order: registry, then grid.
/// `filter` (ids or aliases) restricts the entries when non-empty; skipped
/// combinations are described in `skipped` when given.
std::vector<CheckResult> check_all(const OperandBundle& ops, const ParamGrid& grid, double tol = 1e-8,
                                   std::span<const std::string> filter = {},
                                   std::vector<std::string>* skipped = nullptr);

}  // namespace numrad
