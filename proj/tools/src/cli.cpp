#include "numrad_cli/cli.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "numrad/error.hpp"
#include "numrad/harness.hpp"
#include "numrad/inequalities.hpp"
#include "numrad/io.hpp"
#include "numrad/numrange.hpp"

namespace numrad::cli {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::size_t parse_size(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || s.front() == '-') throw Error(ErrorKind::InvalidConfig, "bad dimension '" + s + "'");
  return static_cast<std::size_t>(v);
}

// "2-16", "3" or "2,4,8".
std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  for (const std::string& part : split(text, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      dims.push_back(parse_size(part));
      continue;
    }
    const std::size_t lo = parse_size(part.substr(0, dash));
    const std::size_t hi = parse_size(part.substr(dash + 1));
    if (lo > hi) throw Error(ErrorKind::InvalidConfig, "empty dimension range '" + part + "'");
    for (std::size_t d = lo; d <= hi; ++d) dims.push_back(d);
  }
  if (dims.empty()) throw Error(ErrorKind::InvalidConfig, "no dimensions given");
  return dims;
}

void print_summary(const std::map<std::string, CheckerSummary>& summary, std::ostream& out) {
  out << "checker  runs  rows  min_slack  median_slack  violations\n";
  for (const auto& [id, s] : summary)
    out << id << "  " << s.runs << "  " << s.count << "  " << num(s.min_slack) << "  " << num(s.median_slack) << "  "
        << s.violations << "\n";
}

std::size_t total_violations(const std::map<std::string, CheckerSummary>& summary) {
  std::size_t v = 0;
  for (const auto& entry : summary) v += entry.second.violations;
  return v;
}

struct RadiusArgs {
  std::string file;
  double tol = 1e-8;
};

struct RangeArgs {
  std::string file;
  int points = 360;
  std::string out;
};

struct CheckArgs {
  std::string id;
  std::string A, B, X, x, y, e;
  std::optional<double> a, b;
  CheckParams params;
  double tol = 1e-8;
};

struct FuzzArgs {
  std::size_t trials = 1000;
  std::string dims = "2-16";
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "csv";
  std::string checkers;
  unsigned threads = 0;
  double tol = 1e-8;
};

int cmd_radius(const RadiusArgs& a, std::ostream& out) {
  const RadiusEstimate est = numerical_radius(read_matrix(a.file), a.tol);
  out << "w = " << num(est.value) << " ± " << num(est.certified_error) << " at theta = " << num(est.theta_star) << "\n";
  return kExitOk;
}

int cmd_range(const RangeArgs& a, std::ostream& out) {
  if (a.points < 3) throw Error(ErrorKind::OutOfRange, "--points must be at least 3");
  const auto boundary = numerical_range_boundary(read_matrix(a.file), static_cast<std::size_t>(a.points));
  std::string csv = "theta,re,im\n";
  for (const BoundaryPoint& p : boundary)
    csv += num(p.theta) + "," + num(p.point.real()) + "," + num(p.point.imag()) + "\n";
  if (a.out.empty())
    out << csv;
  else
    write_text(a.out, csv);
  return kExitOk;
}

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  OperandBundle ops;
  if (!a.A.empty()) ops.A = read_matrix(a.A);
  if (!a.B.empty()) ops.B = read_matrix(a.B);
  if (!a.X.empty()) ops.X = read_matrix(a.X);
  if (!a.x.empty()) ops.x = read_vector(a.x);
  if (!a.y.empty()) ops.y = read_vector(a.y);
  if (!a.e.empty()) ops.e = read_vector(a.e);
  ops.a = a.a;
  ops.b = a.b;

  const CheckerInfo& info = find_checker(a.id);
  if (const auto why = applicable(info.id, ops, a.params); !why.empty()) {
    for (const std::string& w : why) err << info.id << ": " << w << "\n";
    return kExitInvalid;
  }
  bool ok = true;
  for (const CheckResult& r : check(info.id, ops, a.params, a.tol)) {
    out << r.checker_id << "[" << r.link << "] lhs=" << num(r.lhs) << " rhs=" << num(r.rhs)
        << " slack=" << num(r.slack) << (r.satisfied ? " OK" : " VIOLATION") << "\n";
    ok = ok && r.satisfied;
  }
  return ok ? kExitOk : kExitViolation;
}

int cmd_fuzz(const FuzzArgs& a, std::ostream& out) {
  FuzzConfig config;
  config.trials = a.trials;
  config.dims = parse_dims(a.dims);
  config.seed = a.seed;
  config.tol = a.tol;
  config.threads = a.threads;
  config.checker_filter = split(a.checkers, ',');
  config.validate();

  const FuzzReport report = run_sweep(config);
  if (!a.out.empty()) write_report(report, a.out, a.format == "json" ? ReportFormat::Json : ReportFormat::Csv);
  print_summary(report.summary, out);
  for (const std::string& note : report.notes) out << "note: " << note << "\n";
  return total_violations(report.summary) == 0 ? kExitOk : kExitViolation;
}

int cmd_summarize(const std::string& path, std::ostream& out) {
  const FuzzReport report = read_report(path);
  print_summary(report.summary, out);
  out << "violations: " << total_violations(report.summary) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical radius toolkit and inequality checker", "numrad"};
  app.require_subcommand(1);

  RadiusArgs radius_args;
  auto* radius = app.add_subcommand("radius", "Certified numerical radius of a matrix file");
  radius->add_option("file", radius_args.file, "Matrix JSON file")->required();
  radius->add_option("--tol", radius_args.tol, "Absolute tolerance");

  RangeArgs range_args;
  auto* range = app.add_subcommand("range", "Boundary points of the numerical range as CSV");
  range->add_option("file", range_args.file, "Matrix JSON file")->required();
  range->add_option("--points", range_args.points, "Number of supporting angles (>= 3)");
  range->add_option("--out", range_args.out, "Output CSV path (stdout when omitted)");

  CheckArgs check_args;
  auto* chk = app.add_subcommand("check", "Evaluate one registry entry");
  chk->add_option("--id", check_args.id, "Entry id or alias")->required();
  chk->add_option("--A", check_args.A, "Matrix A file");
  chk->add_option("--B", check_args.B, "Matrix B file");
  chk->add_option("--X", check_args.X, "Matrix X file");
  chk->add_option("--x", check_args.x, "Vector x file");
  chk->add_option("--y", check_args.y, "Vector y file");
  chk->add_option("--e", check_args.e, "Vector e file");
  chk->add_option("--a", check_args.a, "Scalar a");
  chk->add_option("--b", check_args.b, "Scalar b");
  chk->add_option("--r", check_args.params.r, "Exponent r");
  chk->add_option("--p", check_args.params.p, "Conjugate exponent p");
  chk->add_option("--q", check_args.params.q, "Conjugate exponent q");
  chk->add_option("--alpha", check_args.params.alpha, "Interpolation weight");
  chk->add_option("--s", check_args.params.s, "Power pair exponent");
  chk->add_option("--n", check_args.params.n_power, "Integer power");
  chk->add_option("--tol", check_args.tol, "Relative tolerance");

  FuzzArgs fuzz_args;
  auto* fuzz = app.add_subcommand("fuzz", "Randomized sweep over the registry");
  fuzz->add_option("--trials", fuzz_args.trials, "Number of trials");
  fuzz->add_option("--dims", fuzz_args.dims, "Dimensions, e.g. 2-16 or 2,4,8");
  fuzz->add_option("--seed", fuzz_args.seed, "Master seed");
  fuzz->add_option("--out", fuzz_args.out, "Report path");
  fuzz->add_option("--format", fuzz_args.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  fuzz->add_option("--checkers", fuzz_args.checkers, "Comma-separated ids or aliases");
  fuzz->add_option("--threads", fuzz_args.threads, "Worker threads (0: NUMRAD_THREADS or all cores)");
  fuzz->add_option("--tol", fuzz_args.tol, "Relative tolerance");

  std::string report_path;
  auto* summ = app.add_subcommand("summarize", "Summary table of a CSV or JSON report");
  summ->add_option("report", report_path, "Report file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*radius) return cmd_radius(radius_args, out);
    if (*range) return cmd_range(range_args, out);
    if (*chk) return cmd_check(check_args, out, err);
    if (*fuzz) return cmd_fuzz(fuzz_args, out);
    return cmd_summarize(report_path, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace numrad::cli
