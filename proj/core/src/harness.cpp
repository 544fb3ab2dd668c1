#include "numrad/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "numrad/error.hpp"
#include "numrad/io.hpp"
#include "numrad/linalg.hpp"
#include "numrad/numrange.hpp"
#include "numrad/transforms.hpp"

namespace numrad {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 10> kClassNames{
    "ginibre", "hermitian", "psd", "psd_invertible", "unitary",
    "normal",  "nilpotent", "hermitian_invertible", "rank_deficient", "contraction",
};

constexpr double kClassTol = 1e-10;

ComplexMatrix ginibre(std::size_t n, RngStream& rng) {
  ComplexMatrix m(n);
  for (auto& z : m.data()) z = rng.complex_gaussian();
  return m;
}

// Modified Gram-Schmidt, two passes; R has a positive diagonal so the draw is
// phase-fixed.
ComplexMatrix orthonormalize(const ComplexMatrix& g) {
  const std::size_t n = g.size();
  ComplexMatrix q(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector v = g.column(j);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        const Vector qk = q.column(k);
        v = axpy(-inner(v, qk), qk, v);
      }
    q.set_column(j, normalized(v));
  }
  return q;
}

ComplexMatrix psd(std::size_t n, RngStream& rng) {
  const ComplexMatrix g = ginibre(n, rng);
  return hermitian_part((1.0 / static_cast<double>(n)) * (g.adjoint() * g));
}

ComplexMatrix conjugate_diagonal(const ComplexMatrix& u, const Vector& d) {
  return u * ComplexMatrix::diagonal(d) * u.adjoint();
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

unsigned thread_count(const FuzzConfig& config) {
  unsigned t = config.threads;
  if (t == 0) {
    if (const char* env = std::getenv("NUMRAD_THREADS")) t = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  }
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(1, config.trials)));
}

struct TrialOutput {
  std::vector<FuzzRow> rows;
  std::vector<std::string> notes;
  std::size_t aluthge_pairs = 0;
  std::size_t aluthge_exceed = 0;
  double aluthge_max_ratio = 0.0;
};

TrialOutput run_trial(const FuzzConfig& config, std::size_t trial) {
  TrialOutput out;
  const std::uint64_t sub_seed = derive_sub_seed(config.seed, trial);
  RngStream rng(sub_seed);
  const std::size_t n = config.dims[rng.below(config.dims.size())];
  const ClassTriple classes = config.classes[trial % config.classes.size()];
  const std::string where = "trial " + std::to_string(trial) + ": ";
  try {
    OperandBundle ops;
    const std::array<std::pair<OperatorClass, std::optional<ComplexMatrix>*>, 3> slots{
        {{classes.a, &ops.A}, {classes.b, &ops.B}, {classes.x, &ops.X}}};
    const char* names[] = {"A", "B", "X"};
    for (std::size_t k = 0; k < slots.size(); ++k) {
      ComplexMatrix m = generate(slots[k].first, n, rng);
      if (!satisfies_class(slots[k].first, m)) {
        out.notes.push_back(where + names[k] + " failed the " + std::string(to_string(slots[k].first)) +
                            " predicate; trial skipped");
        return out;
      }
      *slots[k].second = std::move(m);
    }
    ops.x = rng.unit_vector(n);
    ops.y = rng.gaussian_vector(n);
    ops.e = rng.unit_vector(n);
    ops.a = rng.uniform(0.0, 3.0);
    ops.b = rng.uniform(0.0, 3.0);

    for (CheckResult& r : check_all(ops, config.grid, config.tol, config.checker_filter)) {
      out.rows.push_back({trial, n, classes, sub_seed, std::move(r)});
    }

    // Observed only: how the generalized Aluthge transform moves the radius.
    if (config.checker_filter.empty()) {
      const double wa = numerical_radius(*ops.A, config.tol).value;
      for (double alpha : config.grid.alpha) {
        const double wt = numerical_radius(aluthge_general(*ops.A, alpha), config.tol).value;
        ++out.aluthge_pairs;
        if (wt > wa + config.tol * std::max(1.0, wa)) ++out.aluthge_exceed;
        if (wa > 0.0) out.aluthge_max_ratio = std::max(out.aluthge_max_ratio, wt / wa);
      }
    }
  } catch (const std::exception& e) {
    out.rows.clear();
    out.notes.push_back(where + e.what());
  }
  return out;
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s, double fallback) {
  if (s.empty()) return fallback;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error(ErrorKind::ParseError, "bad number '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') throw Error(ErrorKind::ParseError, "bad integer '" + s + "'");
  return v;
}

constexpr const char* kCsvHeader =
    "trial,checker_id,link,dim,class_A,class_B,class_X,r,p,q,alpha,s,n_power,lhs,rhs,slack,satisfied,tolerance,"
    "sub_seed";

FuzzReport parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || split(line, ',').size() != 19 || line.rfind("trial,checker_id", 0) != 0) {
    throw Error(ErrorKind::ParseError, "missing report CSV header");
  }
  FuzzReport report;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split(line, ',');
    if (f.size() != 19) throw Error(ErrorKind::ParseError, "report row has " + std::to_string(f.size()) + " fields");
    FuzzRow row;
    row.trial = parse_u64(f[0]);
    row.result.checker_id = f[1];
    row.result.link = f[2];
    row.dim = parse_u64(f[3]);
    row.classes = {parse_operator_class(f[4]), parse_operator_class(f[5]), parse_operator_class(f[6])};
    const CheckParams base;
    row.result.params = {parse_double(f[7], base.r),     parse_double(f[8], base.p),
                         parse_double(f[9], base.q),     parse_double(f[10], base.alpha),
                         f[12].empty() ? base.n_power : static_cast<int>(parse_u64(f[12])),
                         parse_double(f[11], base.s)};
    row.result.lhs = parse_double(f[13], NAN);
    row.result.rhs = parse_double(f[14], NAN);
    row.result.slack = parse_double(f[15], NAN);
    if (f[16] != "true" && f[16] != "false") throw Error(ErrorKind::ParseError, "bad satisfied flag '" + f[16] + "'");
    row.result.satisfied = f[16] == "true";
    row.result.tolerance = parse_double(f[17], NAN);
    row.sub_seed = parse_u64(f[18]);
    report.rows.push_back(std::move(row));
  }
  report.summary = summarize(report.rows);
  return report;
}

FuzzReport parse_json_report(std::string_view text) {
  FuzzReport report;
  try {
    const json doc = json::parse(text.begin(), text.end());
    const CheckParams base;
    for (const json& r : doc.at("rows")) {
      FuzzRow row;
      row.trial = r.at("trial").get<std::size_t>();
      row.dim = r.at("dim").get<std::size_t>();
      row.classes = {parse_operator_class(r.at("class_A").get<std::string>()),
                     parse_operator_class(r.at("class_B").get<std::string>()),
                     parse_operator_class(r.at("class_X").get<std::string>())};
      row.sub_seed = r.at("sub_seed").get<std::uint64_t>();
      CheckResult& c = row.result;
      c.checker_id = r.at("checker_id").get<std::string>();
      c.link = r.at("link").get<std::string>();
      auto opt = [&](const char* key, double fallback) {
        const json& v = r.at(key);
        return v.is_null() ? fallback : v.get<double>();
      };
      c.params = {opt("r", base.r), opt("p", base.p), opt("q", base.q), opt("alpha", base.alpha),
                  r.at("n_power").is_null() ? base.n_power : r.at("n_power").get<int>(), opt("s", base.s)};
      c.lhs = opt("lhs", NAN);
      c.rhs = opt("rhs", NAN);
      c.slack = opt("slack", NAN);
      c.satisfied = r.at("satisfied").get<bool>();
      c.tolerance = opt("tolerance", NAN);
      c.operand_digest = r.value("operand_digest", "");
      c.notes = r.value("notes", "");
      report.rows.push_back(std::move(row));
    }
    if (doc.contains("notes"))
      for (const json& n : doc["notes"]) report.notes.push_back(n.get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  report.summary = summarize(report.rows);
  return report;
}

}  // namespace

std::string_view to_string(OperatorClass c) { return kClassNames[static_cast<std::size_t>(c)]; }

OperatorClass parse_operator_class(std::string_view tag) {
  for (std::size_t k = 0; k < kClassNames.size(); ++k)
    if (kClassNames[k] == tag) return static_cast<OperatorClass>(k);
  throw Error(ErrorKind::InvalidConfig, "unknown operator class '" + std::string(tag) + "'");
}

ComplexMatrix generate(OperatorClass c, std::size_t n, RngStream& rng) {
  if (n == 0) throw Error(ErrorKind::OutOfRange, "dimension must be at least 1");
  switch (c) {
    case OperatorClass::Ginibre:
      return ginibre(n, rng);
    case OperatorClass::Hermitian:
      return hermitian_part(ginibre(n, rng));
    case OperatorClass::Psd:
      return psd(n, rng);
    case OperatorClass::PsdInvertible:
      return psd(n, rng) + 0.1 * ComplexMatrix::identity(n);
    case OperatorClass::Unitary:
      return orthonormalize(ginibre(n, rng));
    case OperatorClass::Normal: {
      const ComplexMatrix u = orthonormalize(ginibre(n, rng));
      return conjugate_diagonal(u, rng.gaussian_vector(n));
    }
    case OperatorClass::Nilpotent: {
      ComplexMatrix m(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m(i, j) = rng.complex_gaussian();
      return m;
    }
    case OperatorClass::HermitianInvertible: {
      const ComplexMatrix u = orthonormalize(ginibre(n, rng));
      Vector d(n);
      for (auto& z : d) {
        const double mag = rng.uniform(0.1, 1.0);
        z = rng.uniform() < 0.5 ? -mag : mag;
      }
      return hermitian_part(conjugate_diagonal(u, d));
    }
    case OperatorClass::RankDeficient: {
      // At least one zero eigenvalue, so n = 1 gives the zero matrix.
      HermitianSpectrum sp = hermitian_eig(psd(n, rng));
      const std::size_t zeros = std::max<std::size_t>(1, n / 2);
      for (std::size_t k = 0; k < zeros; ++k) sp.eigenvalues[k] = 0.0;
      for (double& l : sp.eigenvalues) l = std::max(l, 0.0);
      return hermitian_part(sp.reconstruct());
    }
    case OperatorClass::Contraction: {
      const ComplexMatrix g = ginibre(n, rng);
      return (0.9 / operator_norm(g)) * g;
    }
  }
  throw Error(ErrorKind::InvalidConfig, "unhandled operator class");
}

bool satisfies_class(OperatorClass c, const ComplexMatrix& m) {
  if (!m.all_finite()) return false;
  switch (c) {
    case OperatorClass::Ginibre:
      return true;
    case OperatorClass::Nilpotent: {
      const ComplexMatrix p = matrix_power_int(m, static_cast<unsigned>(m.size()));
      return p.max_abs() <= kClassTol * std::max(1.0, std::pow(operator_norm(m), static_cast<double>(m.size())));
    }
    case OperatorClass::Contraction:
      return operator_norm(m) <= 1.0;
    default:
      break;
  }
  const StructureFlags f = classify(m, kClassTol);
  switch (c) {
    case OperatorClass::Hermitian:
      return f.hermitian;
    case OperatorClass::Psd:
      return f.psd;
    case OperatorClass::PsdInvertible:
      return f.psd && f.invertible;
    case OperatorClass::Unitary:
      return f.unitary;
    case OperatorClass::Normal:
      return f.normal;
    case OperatorClass::HermitianInvertible:
      return f.hermitian && f.invertible;
    case OperatorClass::RankDeficient:
      return f.psd && !f.invertible;
    default:
      return false;
  }
}

std::vector<ClassTriple> default_class_schedule() {
  using C = OperatorClass;
  return {
      {C::Ginibre, C::Ginibre, C::Ginibre},
      {C::Psd, C::Psd, C::Ginibre},
      {C::PsdInvertible, C::PsdInvertible, C::Ginibre},
      {C::HermitianInvertible, C::HermitianInvertible, C::Ginibre},
      {C::Normal, C::Normal, C::Contraction},
      {C::Nilpotent, C::Ginibre, C::Ginibre},
      {C::Unitary, C::Hermitian, C::Nilpotent},
      {C::RankDeficient, C::RankDeficient, C::Ginibre},
      {C::Contraction, C::Psd, C::Unitary},
      {C::Hermitian, C::RankDeficient, C::Normal},
  };
}

void FuzzConfig::validate() const {
  if (trials < 1) throw Error(ErrorKind::InvalidConfig, "trials must be at least 1");
  if (dims.empty()) throw Error(ErrorKind::InvalidConfig, "dims must not be empty");
  for (std::size_t d : dims)
    if (d < 1) throw Error(ErrorKind::InvalidConfig, "dimensions must be at least 1");
  if (classes.empty()) throw Error(ErrorKind::InvalidConfig, "class schedule must not be empty");
  if (grid.empty()) throw Error(ErrorKind::InvalidConfig, "parameter grid must not be empty");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw Error(ErrorKind::InvalidConfig, "tol must be positive");
  for (const std::string& id : checker_filter) {
    try {
      find_checker(id);
    } catch (const Error& e) {
      throw Error(ErrorKind::InvalidConfig, e.what());
    }
  }
}

FuzzReport run_sweep(const FuzzConfig& config) {
  config.validate();
  std::vector<TrialOutput> outputs(config.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < config.trials; t = next++) outputs[t] = run_trial(config, t);
  };
  const unsigned threads = thread_count(config);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  FuzzReport report;
  std::size_t pairs = 0, exceed = 0;
  double max_ratio = 0.0;
  for (TrialOutput& out : outputs) {
    for (FuzzRow& row : out.rows) report.rows.push_back(std::move(row));
    for (std::string& note : out.notes) report.notes.push_back(std::move(note));
    pairs += out.aluthge_pairs;
    exceed += out.aluthge_exceed;
    max_ratio = std::max(max_ratio, out.aluthge_max_ratio);
  }
  if (pairs > 0) {
    report.notes.push_back("observed: w(A(alpha)) > w(A) in " + std::to_string(exceed) + " of " +
                           std::to_string(pairs) + " (trial, alpha) pairs; max w(A(alpha)) / w(A) = " +
                           fmt17(max_ratio));
  }
  report.summary = summarize(report.rows);
  return report;
}

std::map<std::string, CheckerSummary> summarize(const std::vector<FuzzRow>& rows) {
  std::map<std::string, std::vector<double>> slacks;
  std::map<std::string, CheckerSummary> out;
  for (const FuzzRow& row : rows) {
    const CheckResult& r = row.result;
    CheckerSummary& s = out[r.checker_id];
    ++s.count;
    std::string_view first_link = "main";
    try {
      first_link = find_checker(r.checker_id).links.front();
    } catch (const Error&) {
    }
    if (r.link == first_link) ++s.runs;
    if (!r.satisfied) ++s.violations;
    slacks[r.checker_id].push_back(r.slack);
  }
  for (auto& [id, v] : slacks) {
    std::sort(v.begin(), v.end());
    CheckerSummary& s = out[id];
    s.min_slack = v.front();
    const std::size_t m = v.size() / 2;
    s.median_slack = v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  }
  return out;
}

std::string report_csv(const FuzzReport& report) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const FuzzRow& row : report.rows) {
    const CheckResult& r = row.result;
    ParamUse uses;
    try {
      uses = find_checker(r.checker_id).uses;
    } catch (const Error&) {
    }
    const CheckParams& p = r.params;
    auto opt = [](bool used, double v) { return used ? fmt17(v) : std::string(); };
    out += std::to_string(row.trial) + ',' + r.checker_id + ',' + r.link + ',' + std::to_string(row.dim) + ',' +
           std::string(to_string(row.classes.a)) + ',' + std::string(to_string(row.classes.b)) + ',' +
           std::string(to_string(row.classes.x)) + ',' + opt(uses.r, p.r) + ',' + opt(uses.pq, p.p) + ',' +
           opt(uses.pq, p.q) + ',' + opt(uses.alpha, p.alpha) + ',' + opt(uses.s, p.s) + ',' +
           (uses.n_power ? std::to_string(p.n_power) : std::string()) + ',' + fmt17(r.lhs) + ',' + fmt17(r.rhs) +
           ',' + fmt17(r.slack) + ',' + bool_text(r.satisfied) + ',' + fmt17(r.tolerance) + ',' +
           std::to_string(row.sub_seed) + '\n';
  }
  return out;
}

std::string report_json(const FuzzReport& report) {
  json rows = json::array();
  for (const FuzzRow& row : report.rows) {
    const CheckResult& r = row.result;
    ParamUse uses;
    try {
      uses = find_checker(r.checker_id).uses;
    } catch (const Error&) {
    }
    auto opt = [](bool used, double v) { return used ? json(v) : json(nullptr); };
    rows.push_back({
        {"trial", row.trial},
        {"checker_id", r.checker_id},
        {"link", r.link},
        {"dim", row.dim},
        {"class_A", to_string(row.classes.a)},
        {"class_B", to_string(row.classes.b)},
        {"class_X", to_string(row.classes.x)},
        {"r", opt(uses.r, r.params.r)},
        {"p", opt(uses.pq, r.params.p)},
        {"q", opt(uses.pq, r.params.q)},
        {"alpha", opt(uses.alpha, r.params.alpha)},
        {"s", opt(uses.s, r.params.s)},
        {"n_power", uses.n_power ? json(r.params.n_power) : json(nullptr)},
        {"lhs", r.lhs},
        {"rhs", r.rhs},
        {"slack", r.slack},
        {"satisfied", r.satisfied},
        {"tolerance", r.tolerance},
        {"sub_seed", row.sub_seed},
        {"operand_digest", r.operand_digest},
        {"notes", r.notes},
    });
  }
  json summary = json::object();
  for (const auto& [id, s] : report.summary) {
    summary[id] = {{"count", s.count},
                   {"runs", s.runs},
                   {"min_slack", s.min_slack},
                   {"median_slack", s.median_slack},
                   {"violations", s.violations}};
  }
  return json{{"rows", std::move(rows)}, {"summary", std::move(summary)}, {"notes", report.notes}}.dump(1) + "\n";
}

void write_report(const FuzzReport& report, const std::filesystem::path& path, ReportFormat format) {
  write_text(path, format == ReportFormat::Csv ? report_csv(report) : report_json(report));
}

FuzzReport parse_report(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json_report(text);
  return parse_csv(text);
}

FuzzReport read_report(const std::filesystem::path& path) { return parse_report(read_text(path)); }

}  // namespace numrad
