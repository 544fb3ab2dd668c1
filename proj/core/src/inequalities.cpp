#include "numrad/inequalities.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <unordered_map>

#include "numrad/error.hpp"
#include "numrad/linalg.hpp"
#include "numrad/numrange.hpp"
#include "numrad/transforms.hpp"

namespace numrad {

namespace {

constexpr double kConjugateTol = 1e-12;
constexpr double kUnitTol = 1e-12;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Eigen-decomposition of |M| (right = true) or |M*| read off an SVD. Singular
// values at or below the PSD threshold are snapped to zero, as psd_spectrum
// does.
HermitianSpectrum modulus_spectrum(const SvdFactors& f, bool right) {
  const std::size_t n = f.singular_values.size();
  HermitianSpectrum sp;
  sp.eigenvalues.resize(n);
  sp.eigenvectors = ComplexMatrix(n);
  const double smax = n == 0 ? 0.0 : f.singular_values.front();
  const ComplexMatrix& v = right ? f.right : f.left;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = n - 1 - k;
    const double sigma = f.singular_values[src];
    sp.eigenvalues[k] = sigma <= kPsdThreshold * smax ? 0.0 : sigma;
    for (std::size_t i = 0; i < n; ++i) sp.eigenvectors(i, k) = v(i, src);
  }
  return sp;
}

// Norm of a PSD matrix.
double psd_norm(const ComplexMatrix& m) { return m.empty() ? 0.0 : std::max(0.0, hermitian_max_eigenvalue(m)); }

// Everything a bundle's checks share: SVDs, spectra, radii, structure flags.
class Context {
 public:
  Context(const OperandBundle& ops, double tol) : ops_(ops), tol_(tol), digest_(ops.digest()) {}

  const OperandBundle& ops() const { return ops_; }
  double tol() const { return tol_; }
  const std::string& digest() const { return digest_; }

  const ComplexMatrix& A() const { return *ops_.A; }
  const ComplexMatrix& B() const { return *ops_.B; }
  const ComplexMatrix& X() const { return *ops_.X; }

  struct Power {
    double value;  // w^r from the estimate's lower end
    double error;  // (w + err)^r - w^r
  };

  // w(M)^r with its certified error carried through the power.
  Power radius_pow(const ComplexMatrix& m, double r) {
    const RadiusEstimate& e = radius(m);
    const double v = std::pow(e.value, r);
    return {v, std::pow(e.value + e.certified_error, r) - v};
  }

  const RadiusEstimate& radius(const ComplexMatrix& m) {
    const double want = tol_ / 10.0 * std::max(1.0, norm_of(m));
    auto& bucket = radii_[numrad::digest(m)];
    for (auto& [mat, est] : bucket)
      if (mat == m && est.certified_error <= want) return est;
    bucket.emplace_back(m, numerical_radius(m, want));
    return bucket.back().second;
  }

  double norm_of(const ComplexMatrix& m) {
    const std::uint64_t h = numrad::digest(m);
    auto it = norms_.find(h);
    if (it != norms_.end()) return it->second;
    return norms_[h] = operator_norm(m);
  }

  const SvdFactors& svd_of(const std::string& key, const std::function<ComplexMatrix()>& make) {
    auto it = svds_.find(key);
    if (it != svds_.end()) return it->second;
    return svds_.emplace(key, svd(make())).first->second;
  }

  const HermitianSpectrum& spectrum(const std::string& key, const std::function<HermitianSpectrum()>& make) {
    auto it = spectra_.find(key);
    if (it != spectra_.end()) return it->second;
    return spectra_.emplace(key, make()).first->second;
  }

  // |M| and |M*| spectra of a named operand ("A", "B", "X", "A2").
  const HermitianSpectrum& modulus(const std::string& role, bool adjoint_side = false) {
    const std::string key = (adjoint_side ? "|*" : "|") + role;
    return spectrum(key, [&] { return modulus_spectrum(svd_of(role, [&] { return operand(role); }), !adjoint_side); });
  }

  const HermitianSpectrum& positive(const std::string& role) {
    return spectrum("psd" + role, [&] { return psd_spectrum(operand(role)); });
  }

  ComplexMatrix operand(const std::string& role) {
    if (role == "A") return A();
    if (role == "B") return B();
    if (role == "X") return X();
    if (role == "A2") return A() * A();
    throw Error(ErrorKind::InvalidConfig, "unknown operand role " + role);
  }

  const StructureFlags& flags(char role) {
    auto it = flags_.find(role);
    if (it != flags_.end()) return it->second;
    const ComplexMatrix& m = role == 'A' ? A() : role == 'B' ? B() : X();
    return flags_[role] = classify(m);
  }

 private:
  const OperandBundle& ops_;
  double tol_;
  std::string digest_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<ComplexMatrix, RadiusEstimate>>> radii_;
  std::unordered_map<std::uint64_t, double> norms_;
  std::map<std::string, SvdFactors> svds_;
  std::map<std::string, HermitianSpectrum> spectra_;
  std::map<char, StructureFlags> flags_;
};

struct Link {
  double lhs = 0.0;
  double rhs = 0.0;
  double error = 0.0;  // certified error carried by either side
  double scale = 0.0;  // magnitude for identity residuals (lhs = |residual|, rhs = 0)
  std::string notes;
};

using Requirements = std::function<void(const OperandBundle&, const CheckParams&, Context*,
                                        std::vector<std::string>&)>;
using Evaluate = std::function<std::vector<Link>(Context&, const CheckParams&)>;

struct Entry {
  CheckerInfo info;
  Requirements requires_;
  Evaluate evaluate;
};

// ---------------------------------------------------------------------------
// Hypothesis helpers.

void need_matrices(const OperandBundle& o, const char* roles, std::vector<std::string>& why) {
  std::size_t n = 0;
  bool have_n = false;
  for (const char* c = roles; *c; ++c) {
    const auto& m = *c == 'A' ? o.A : *c == 'B' ? o.B : o.X;
    if (!m) {
      why.push_back(std::string(1, *c) + " missing");
      continue;
    }
    if (!have_n) {
      n = m->size();
      have_n = true;
    } else if (m->size() != n) {
      why.push_back("operand dimensions differ");
    }
  }
}

void need_vectors(const OperandBundle& o, const char* roles, std::size_t dim, bool check_dim,
                  std::vector<std::string>& why) {
  for (const char* c = roles; *c; ++c) {
    const auto& v = *c == 'x' ? o.x : *c == 'y' ? o.y : o.e;
    if (!v) {
      why.push_back(std::string(1, *c) + " missing");
    } else if (check_dim && v->size() != dim) {
      why.push_back(std::string(1, *c) + " has the wrong length");
    }
  }
}

void need_unit(const std::optional<Vector>& v, const char* name, std::vector<std::string>& why) {
  if (v && !(std::abs(norm(*v) - 1.0) <= kUnitTol)) why.push_back(std::string(name) + " not a unit vector");
}

void need_r_at_least(const CheckParams& p, double lo, std::vector<std::string>& why) {
  if (!(p.r >= lo)) why.push_back(lo == 0.0 ? "r ≥ 0 violated" : fmt("r ≥ %g violated", lo));
}

void need_alpha(const CheckParams& p, std::vector<std::string>& why) {
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) why.push_back("0 ≤ α ≤ 1 violated");
}

void need_s(const CheckParams& p, std::vector<std::string>& why) {
  if (!(p.s >= 0.0 && p.s <= 1.0)) why.push_back("0 ≤ s ≤ 1 violated");
}

void need_conjugate(const CheckParams& p, std::vector<std::string>& why) {
  if (!(p.p > 1.0)) why.push_back("p > 1 violated");
  if (!(p.q > 1.0)) why.push_back("q > 1 violated");
  if (!(std::abs(1.0 / p.p + 1.0 / p.q - 1.0) <= kConjugateTol)) why.push_back("1/p+1/q ≠ 1");
}

void need_pr_qr(const CheckParams& p, std::vector<std::string>& why) {
  if (!(p.p * p.r >= 2.0)) why.push_back("pr ≥ 2 violated");
  if (!(p.q * p.r >= 2.0)) why.push_back("qr ≥ 2 violated");
}

void need_flag(Context* ctx, const OperandBundle& o, char role, bool StructureFlags::*flag, const char* what,
               std::vector<std::string>& why) {
  const auto& m = role == 'A' ? o.A : role == 'B' ? o.B : o.X;
  if (!m || ctx == nullptr) return;
  if (!(ctx->flags(role).*flag)) why.push_back(std::string(1, role) + " not " + what);
}

void need_invertible_hermitian(Context* ctx, const OperandBundle& o, char role, std::vector<std::string>& why) {
  const auto& m = role == 'A' ? o.A : o.B;
  if (!m || ctx == nullptr) return;
  const StructureFlags& f = ctx->flags(role);
  if (!(f.hermitian && f.invertible)) why.push_back(std::string(1, role) + " not invertible self-adjoint");
}

std::size_t dim_of(const OperandBundle& o) { return o.A ? o.A->size() : o.X ? o.X->size() : 0; }

// ---------------------------------------------------------------------------
// Shared quantities.

double power_of_norm(Context& c, const ComplexMatrix& m, double r) { return std::pow(c.norm_of(m), r); }

ComplexMatrix scaled_sum(double ca, const ComplexMatrix& a, double cb, const ComplexMatrix& b) {
  return ca * a + cb * b;
}

// Spectral function of a cached PSD spectrum.
ComplexMatrix spectral(const HermitianSpectrum& sp, const ScalarMap& f) { return apply_scalar_function_psd(sp, f); }

ComplexMatrix psd_pow(const HermitianSpectrum& sp, double s) { return matrix_power_psd(sp, s); }

Link cmp(double lhs, double rhs, double error = 0.0, std::string notes = {}) {
  return {lhs, rhs, error, 0.0, std::move(notes)};
}

Link identity(double residual, double scale, double error = 0.0, std::string notes = {}) {
  return {std::abs(residual), 0.0, error, scale, std::move(notes)};
}

// ---------------------------------------------------------------------------
// Registry.

std::vector<Entry> build_registry() {
  std::vector<Entry> reg;
  auto add = [&](std::string_view id, std::string_view alias, std::string_view summary, ParamUse uses,
                 std::vector<std::string_view> links, Requirements req, Evaluate ev) {
    reg.push_back({{id, alias, summary, uses, std::move(links)}, std::move(req), std::move(ev)});
  };
  const std::vector<std::string_view> main{"main"};

  add("R01", "sandwich", "||A||/2 <= w(A) <= ||A||", {}, {"lower", "upper"},
      [](auto& o, auto&, auto*, auto& why) { need_matrices(o, "A", why); },
      [](Context& c, const CheckParams&) {
        const auto w = c.radius_pow(c.A(), 1.0);
        const double na = c.norm_of(c.A());
        return std::vector<Link>{cmp(na / 2.0, w.value, w.error), cmp(w.value, na, w.error)};
      });

  add("R02", "power", "w(A^n) <= w(A)^n", {.n_power = true}, main,
      [](auto& o, auto& p, auto*, auto& why) {
        need_matrices(o, "A", why);
        if (p.n_power < 1) why.push_back("n ≥ 1 violated");
      },
      [](Context& c, const CheckParams& p) {
        const auto lhs = c.radius_pow(matrix_power_int(c.A(), static_cast<unsigned>(p.n_power)), 1.0);
        const auto rhs = c.radius_pow(c.A(), p.n_power);
        return std::vector<Link>{cmp(lhs.value, rhs.value, lhs.error + rhs.error)};
      });

  add("R03", "dragomir_square", "w(A)^2 <= (w(A^2) + ||A||^2) / 2", {}, main,
      [](auto& o, auto&, auto*, auto& why) { need_matrices(o, "A", why); },
      [](Context& c, const CheckParams&) {
        const auto lhs = c.radius_pow(c.A(), 2.0);
        const auto w2 = c.radius_pow(c.A() * c.A(), 1.0);
        const double na = c.norm_of(c.A());
        return std::vector<Link>{cmp(lhs.value, 0.5 * (w2.value + na * na), lhs.error + w2.error)};
      });

  add("R04", "dragomir_product", "w^r(B*A) <= ||(A*A)^r + (B*B)^r|| / 2", {.r = true}, main,
      [](auto& o, auto& p, auto*, auto& why) {
        need_matrices(o, "AB", why);
        need_r_at_least(p, 1.0, why);
      },
      [](Context& c, const CheckParams& p) {
        const auto lhs = c.radius_pow(c.B().adjoint() * c.A(), p.r);
        const ComplexMatrix sum = psd_pow(c.modulus("A"), 2.0 * p.r) + psd_pow(c.modulus("B"), 2.0 * p.r);
        return std::vector<Link>{cmp(lhs.value, 0.5 * psd_norm(sum), lhs.error)};
      });

  add("R05", "square_power", "w^{2r}(A) <= (w^r(A^2) + ||A||^{2r}) / 2", {.r = true}, main,
      [](auto& o, auto& p, auto*, auto& why) {
        need_matrices(o, "A", why);
        need_r_at_least(p, 1.0, why);
      },
      [](Context& c, const CheckParams& p) {
        const auto lhs = c.radius_pow(c.A(), 2.0 * p.r);
        const auto w2 = c.radius_pow(c.A() * c.A(), p.r);
        const double rhs = 0.5 * (w2.value + power_of_norm(c, c.A(), 2.0 * p.r));
        return std::vector<Link>{cmp(lhs.value, rhs, lhs.error + w2.error)};
      });

  auto pair_constraints = [](const OperandBundle& o, const CheckParams& p, std::vector<std::string>& why) {
    need_matrices(o, "A", why);
    need_r_at_least(p, 1.0, why);
    need_conjugate(p, why);
    if (!(p.p >= p.q)) why.push_back("p ≥ q violated");
    if (!(p.q * p.r >= 2.0)) why.push_back("qr ≥ 2 violated");
    need_s(p, why);
  };

  add("R06", "function_pair_square",
      "w^{2r}(A) <= (||A||^{2r} + ||f^{pr}(|A^2|)/p + g^{qr}(|(A^2)*|)/q||) / 2", {.r = true, .pq = true, .s = true},
      main, [pair_constraints](auto& o, auto& p, auto*, auto& why) { pair_constraints(o, p, why); },
      [](Context& c, const CheckParams& p) {
        const FunctionPair fg = power_pair(p.s);
        const ComplexMatrix t =
            (1.0 / p.p) * spectral(c.modulus("A2"), [&](double t) { return std::pow(fg.f(t), p.p * p.r); }) +
            (1.0 / p.q) * spectral(c.modulus("A2", true), [&](double t) { return std::pow(fg.g(t), p.q * p.r); });
        const auto lhs = c.radius_pow(c.A(), 2.0 * p.r);
        const double rhs = 0.5 * (power_of_norm(c, c.A(), 2.0 * p.r) + psd_norm(t));
        return std::vector<Link>{cmp(lhs.value, rhs, lhs.error, "f, g = " + fg.description)};
      });

  add("R07", "mixed_power_square",
      "w^{2r}(A) <= (||A||^{2r} + || |A|^{4 alpha r} + |A*|^{4(1-alpha) r} || / 2) / 2", {.r = true, .alpha = true},
      main,
      [](auto& o, auto& p, auto*, auto& why) {
        need_matrices(o, "A", why);
        need_r_at_least(p, 1.0, why);
        need_alpha(p, why);
      },
      [](Context& c, const CheckParams& p) {
        const ComplexMatrix t = psd_pow(c.modulus("A"), 4.0 * p.alpha * p.r) +
                                psd_pow(c.modulus("A", true), 4.0 * (1.0 - p.alpha) * p.r);
        const auto lhs = c.radius_pow(c.A(), 2.0 * p.r);
        const double rhs = 0.5 * (power_of_norm(c, c.A(), 2.0 * p.r) + 0.5 * psd_norm(t));
        return std::vector<Link>{cmp(lhs.value, rhs, lhs.error)};
      });

  add("R08", "paranormal_pair", "paranormal A: w^r(A) <= (||A||^r + ||f^{pr}(|A|)/p + g^{qr}(|A*|)/q||) / 2",
      {.r = true, .pq = true, .s = true}, main,
      [pair_constraints](auto& o, auto& p, auto* ctx, auto& why) {
        pair_constraints(o, p, why);
        need_flag(ctx, o, 'A', &StructureFlags::normal, "certified paranormal (normal)", why);
      },
      [](Context& c, const CheckParams& p) {
        const FunctionPair fg = power_pair(p.s);
        const ComplexMatrix t =
            (1.0 / p.p) * spectral(c.modulus("A"), [&](double t) { return std::pow(fg.f(t), p.p * p.r); }) +
            (1.0 / p.q) * spectral(c.modulus("A", true), [&](double t) { return std::pow(fg.g(t), p.q * p.r); });
        const auto lhs = c.radius_pow(c.A(), p.r);
        const double rhs = 0.5 * (power_of_norm(c, c.A(), p.r) + psd_norm(t));
        return std::vector<Link>{cmp(lhs.value, rhs, lhs.error, "f, g = " + fg.description)};
      });

  add("R09", "young_product",
      "w^r(AXB) <= ||[A f^2(|X*|) A*]^{pr/2}/p + [B* g^2(|X|) B]^{qr/2}/q||", {.r = true, .pq = true, .s = true}, main,
      [](auto& o, auto& p, auto*, auto& why) {
        need_matrices(o, "ABX", why);
        need_conjugate(p, why);
        need_pr_qr(p, why);
        need_s(p, why);
      },
      [](Context& c, const CheckParams& p) {
        const FunctionPair fg = power_pair(p.s);
        const std::string tag = fmt("%.17g", p.s);
        const HermitianSpectrum& left = c.spectrum("R09L" + tag, [&] {
          const ComplexMatrix f2 = spectral(c.modulus("X", true), [&](double t) { return std::pow(fg.f(t), 2.0); });
          return psd_spectrum(hermitian_part(c.A() * f2 * c.A().adjoint()));
        });
        const HermitianSpectrum& right = c.spectrum("R09R" + tag, [&] {
          const ComplexMatrix g2 = spectral(c.modulus("X"), [&](double t) { return std::pow(fg.g(t), 2.0); });
          return psd_spectrum(hermitian_part(c.B().adjoint() * g2 * c.B()));
        });
        const ComplexMatrix t =
            (1.0 / p.p) * psd_pow(left, p.p * p.r / 2.0) + (1.0 / p.q) * psd_pow(right, p.q * p.r / 2.0);
        const auto lhs = c.radius_pow(c.A() * c.X() * c.B(), p.r);
        return std::vector<Link>{cmp(lhs.value, psd_norm(t), lhs.error, "f, g = " + fg.description)};
      });

  add("R10", "young_pair", "w^r(B*A) <= ||(1/p)|A|^{pr} + (1/q)|B|^{qr}||", {.r = true, .pq = true}, main,
      [](auto& o, auto& p, auto*, auto& why) {
        need_matrices(o, "AB", why);
        need_conjugate(p, why);
        need_pr_qr(p, why);
      },
      [](Context& c, const CheckParams& p) {
        const ComplexMatrix t =
            (1.0 / p.p) * psd_pow(c.modulus("A"), p.p * p.r) + (1.0 / p.q) * psd_pow(c.modulus("B"), p.q * p.r);
        const auto lhs = c.radius_pow(c.B().adjoint() * c.A(), p.r);
        return std::vector<Link>{cmp(lhs.value, psd_norm(t), lhs.error)};
      });

  // Right side of the polarization bound and its norm-only relaxation.
  struct Polar {
    double bound;
    double bound_error;
    double relaxed;
  };
  auto polar_sides = [](Context& c, const CheckParams& p) {
    const ComplexMatrix sum = psd_pow(c.modulus("A", true), 2.0 * p.r) + psd_pow(c.modulus("B", true), 2.0 * p.r);
    const double ns = psd_norm(sum);
    const auto w = c.radius_pow(c.A() * c.B().adjoint(), p.r);
    return Polar{0.25 * ns + 0.5 * w.value, 0.5 * w.error, 0.5 * ns};
  };

  add("R11", "polarization_bound", "w^r(B*A) <= ||(AA*)^r + (BB*)^r|| / 4 + w^r(AB*) / 2", {.r = true}, main,
      [](auto& o, auto& p, auto*, auto& why) {
        need_matrices(o, "AB", why);
        need_r_at_least(p, 1.0, why);
      },
      [polar_sides](Context& c, const CheckParams& p) {
        const Polar s = polar_sides(c, p);
        const auto lhs = c.radius_pow(c.B().adjoint() * c.A(), p.r);
        return std::vector<Link>{cmp(lhs.value, s.bound, lhs.error + s.bound_error)};
      });

  add("R12", "polarization_chain",
      "||(AA*)^r + (BB*)^r|| / 4 + w^r(AB*) / 2 <= ||(AA*)^r + (BB*)^r|| / 2", {.r = true}, main,
      [](auto& o, auto& p, auto*, auto& why) {
        need_matrices(o, "AB", why);
        need_r_at_least(p, 1.0, why);
      },
      [polar_sides](Context& c, const CheckParams& p) {
        const Polar s = polar_sides(c, p);
        return std::vector<Link>{cmp(s.bound, s.relaxed, s.bound_error)};
      });

  add("R13", "aluthge_bound",
      "w^r(T) <= || |T|^{2 r alpha} + |T|^{2 r (1-alpha)} || / 4 + w^r(T(alpha)) / 2, T = A",
      {.r = true, .alpha = true}, main,
      [](auto& o, auto& p, auto*, auto& why) {
        need_matrices(o, "A", why);
        need_r_at_least(p, 1.0, why);
        need_alpha(p, why);
      },
      [](Context& c, const CheckParams& p) {
        const HermitianSpectrum& mod = c.modulus("A");
        const ComplexMatrix sum = psd_pow(mod, 2.0 * p.r * p.alpha) + psd_pow(mod, 2.0 * p.r * (1.0 - p.alpha));
        const auto lhs = c.radius_pow(c.A(), p.r);
        const auto wt = c.radius_pow(aluthge_general(c.A(), p.alpha), p.r);
        return std::vector<Link>{cmp(lhs.value, 0.25 * psd_norm(sum) + 0.5 * wt.value, lhs.error + 0.5 * wt.error)};
      });

  auto positive_pair = [](const OperandBundle& o, Context* ctx, std::vector<std::string>& why) {
    need_matrices(o, "ABX", why);
    need_flag(ctx, o, 'A', &StructureFlags::psd, "positive semidefinite", why);
    need_flag(ctx, o, 'B', &StructureFlags::psd, "positive semidefinite", why);
  };

  add("R14", "positive_product_young",
      "w^r(A^alpha X B^alpha) <= ||X||^r ||(1/p)A^{pr} + (1/q)B^{qr}||^alpha, A, B >= 0",
      {.r = true, .pq = true, .alpha = true}, main,
      [positive_pair](auto& o, auto& p, auto* ctx, auto& why) {
        positive_pair(o, ctx, why);
        need_r_at_least(p, 0.0, why);
        need_conjugate(p, why);
        need_pr_qr(p, why);
        need_alpha(p, why);
      },
      [](Context& c, const CheckParams& p) {
        const HermitianSpectrum& a = c.positive("A");
        const HermitianSpectrum& b = c.positive("B");
        const ComplexMatrix m = psd_pow(a, p.alpha) * c.X() * psd_pow(b, p.alpha);
        const ComplexMatrix t = (1.0 / p.p) * psd_pow(a, p.p * p.r) + (1.0 / p.q) * psd_pow(b, p.q * p.r);
        const auto lhs = c.radius_pow(m, p.r);
        const double rhs = power_of_norm(c, c.X(), p.r) * std::pow(psd_norm(t), p.alpha);
        return std::vector<Link>{cmp(lhs.value, rhs, lhs.error)};
      });

  add("R15", "aluthge_norm", "w(T~) <= ||T||, T = A", {}, main,
      [](auto& o, auto&, auto*, auto& why) { need_matrices(o, "A", why); },
      [](Context& c, const CheckParams&) {
        const auto lhs = c.radius_pow(aluthge(c.A()), 1.0);
        return std::vector<Link>{cmp(lhs.value, c.norm_of(c.A()), lhs.error)};
      });

  add("R16", "weighted_positive_product",
      "w^r(A^alpha X B^{1-alpha}) <= ||X||^r ||alpha A^r + (1-alpha) B^r||, A, B >= 0", {.r = true, .alpha = true},
      main,
      [positive_pair](auto& o, auto& p, auto* ctx, auto& why) {
        positive_pair(o, ctx, why);
        need_r_at_least(p, 2.0, why);
        need_alpha(p, why);
      },
      [](Context& c, const CheckParams& p) {
        const HermitianSpectrum& a = c.positive("A");
        const HermitianSpectrum& b = c.positive("B");
        const ComplexMatrix m = psd_pow(a, p.alpha) * c.X() * psd_pow(b, 1.0 - p.alpha);
        const ComplexMatrix t = scaled_sum(p.alpha, psd_pow(a, p.r), 1.0 - p.alpha, psd_pow(b, p.r));
        const auto lhs = c.radius_pow(m, p.r);
        return std::vector<Link>{cmp(lhs.value, power_of_norm(c, c.X(), p.r) * psd_norm(t), lhs.error)};
      });

  add("R17", "heinz_chain",
      "w^r(A^{1/2} X B^{1/2}) <= w^r(H_alpha) <= ||X||^r w((A^r + B^r)/2) <= ||X||^r (||alpha A^r + (1-alpha) "
      "B^r|| + ||(1-alpha) A^r + alpha B^r||) / 2",
      {.r = true, .alpha = true}, {"i", "ii", "iii"},
      [positive_pair](auto& o, auto& p, auto* ctx, auto& why) {
        positive_pair(o, ctx, why);
        need_r_at_least(p, 2.0, why);
        need_alpha(p, why);
      },
      [](Context& c, const CheckParams& p) {
        const HermitianSpectrum& a = c.positive("A");
        const HermitianSpectrum& b = c.positive("B");
        const auto geo = c.radius_pow(psd_pow(a, 0.5) * c.X() * psd_pow(b, 0.5), p.r);
        const auto heinz = c.radius_pow(heinz_mean(c.A(), c.X(), c.B(), p.alpha), p.r);
        const ComplexMatrix ar = psd_pow(a, p.r);
        const ComplexMatrix br = psd_pow(b, p.r);
        const double nxr = power_of_norm(c, c.X(), p.r);
        const auto mean = c.radius_pow(0.5 * (ar + br), 1.0);
        const double split = 0.5 * nxr *
                             (psd_norm(scaled_sum(p.alpha, ar, 1.0 - p.alpha, br)) +
                              psd_norm(scaled_sum(1.0 - p.alpha, ar, p.alpha, br)));
        return std::vector<Link>{cmp(geo.value, heinz.value, geo.error + heinz.error),
                                 cmp(heinz.value, nxr * mean.value, heinz.error + nxr * mean.error),
                                 cmp(nxr * mean.value, split, nxr * mean.error)};
      });

  auto similarity_pair = [](const OperandBundle& o, Context* ctx, std::vector<std::string>& why) {
    need_matrices(o, "ABX", why);
    need_invertible_hermitian(ctx, o, 'A', why);
    need_invertible_hermitian(ctx, o, 'B', why);
  };

  add("R18", "similarity_mean", "w(X) <= w((A X B^-1 + A^-1 X B) / 2), A, B invertible self-adjoint", {}, main,
      [similarity_pair](auto& o, auto&, auto* ctx, auto& why) { similarity_pair(o, ctx, why); },
      [](Context& c, const CheckParams&) {
        const ComplexMatrix ai = inverse(c.A());
        const ComplexMatrix bi = inverse(c.B());
        const auto lhs = c.radius_pow(c.X(), 1.0);
        const auto rhs = c.radius_pow(0.5 * (c.A() * c.X() * bi + ai * c.X() * c.B()), 1.0);
        return std::vector<Link>{cmp(lhs.value, rhs.value, lhs.error + rhs.error)};
      });

  add("R19", "scalar_young",
      "a^alpha b^{1-alpha} <= alpha a + (1-alpha) b <= [alpha a^r + (1-alpha) b^r]^{1/r}; ab <= a^p/p + b^q/q <= "
      "(a^{pr}/p + b^{qr}/q)^{1/r}",
      {.r = true, .pq = true, .alpha = true}, {"a_lo", "a_hi", "b_lo", "b_hi"},
      [](auto& o, auto& p, auto*, auto& why) {
        if (!o.a || !o.b) {
          why.push_back("scalars a, b missing");
        } else if (!(*o.a >= 0.0 && *o.b >= 0.0 && std::isfinite(*o.a) && std::isfinite(*o.b))) {
          why.push_back("a, b ≥ 0 violated");
        }
        need_r_at_least(p, 1.0, why);
        need_alpha(p, why);
        need_conjugate(p, why);
      },
      [](Context& c, const CheckParams& p) {
        const double a = *c.ops().a;
        const double b = *c.ops().b;
        const double al = p.alpha;
        const double mean = al * a + (1.0 - al) * b;
        const double young = std::pow(a, p.p) / p.p + std::pow(b, p.q) / p.q;
        const double printed = std::pow(a, p.p) / p.p + std::pow(a, p.q) / p.q;
        const double top = std::pow(std::pow(a, p.p * p.r) / p.p + std::pow(b, p.q * p.r) / p.q, 1.0 / p.r);
        char note[160];
        std::snprintf(note, sizeof note, "printed middle a^p/p + a^q/q = %.17g: lower %s, upper %s", printed,
                      a * b <= printed ? "holds" : "fails", printed <= top ? "holds" : "fails");
        return std::vector<Link>{
            cmp(spectral_pow(a, al) * spectral_pow(b, 1.0 - al), mean),
            cmp(mean, std::pow(al * std::pow(a, p.r) + (1.0 - al) * std::pow(b, p.r), 1.0 / p.r)),
            cmp(a * b, young, 0.0, note),
            cmp(young, top, 0.0, note),
        };
      });

  add("R20", "mccarty",
      "<Ax,x>^r <= <A^r x,x> (r >= 1) and <A^t x,x> <= <Ax,x>^t (t = 1/r <= 1), A >= 0, x unit", {.r = true},
      {"r_ge_1", "r_le_1"},
      [](auto& o, auto& p, auto* ctx, auto& why) {
        need_matrices(o, "A", why);
        need_vectors(o, "x", dim_of(o), o.A.has_value(), why);
        need_unit(o.x, "x", why);
        need_flag(ctx, o, 'A', &StructureFlags::psd, "positive semidefinite", why);
        if (!(p.r > 0.0)) why.push_back("r > 0 violated");
      },
      [](Context& c, const CheckParams& p) {
        const Vector& x = *c.ops().x;
        const HermitianSpectrum& a = c.positive("A");
        const double big = std::max(p.r, 1.0 / p.r);
        const double ax = std::max(0.0, inner(psd_pow(a, 1.0) * x, x).real());
        const double hi = inner(psd_pow(a, big) * x, x).real();
        const double lo = inner(psd_pow(a, 1.0 / big) * x, x).real();
        return std::vector<Link>{cmp(std::pow(ax, big), hi), cmp(lo, std::pow(ax, 1.0 / big))};
      });

  add("R21", "mixed_schwarz",
      "|<Ax,y>|^2 <= <|A|^{2 alpha} x,x> <|A*|^{2(1-alpha)} y,y>; |<Ax,y>| <= ||f(|A|)x|| ||g(|A*|)y||",
      {.alpha = true, .s = true}, {"a", "b"},
      [](auto& o, auto& p, auto*, auto& why) {
        need_matrices(o, "A", why);
        need_vectors(o, "xy", dim_of(o), o.A.has_value(), why);
        need_alpha(p, why);
        need_s(p, why);
      },
      [](Context& c, const CheckParams& p) {
        const Vector& x = *c.ops().x;
        const Vector& y = *c.ops().y;
        const HermitianSpectrum& mod = c.modulus("A");
        const HermitianSpectrum& comod = c.modulus("A", true);
        const FunctionPair fg = power_pair(p.s);
        const double axy = std::abs(inner(c.A() * x, y));
        const double px = inner(psd_pow(mod, 2.0 * p.alpha) * x, x).real();
        const double py = inner(psd_pow(comod, 2.0 * (1.0 - p.alpha)) * y, y).real();
        const double fx = norm(spectral(mod, fg.f) * x);
        const double gy = norm(spectral(comod, fg.g) * y);
        return std::vector<Link>{cmp(axy * axy, px * py), cmp(axy, fx * gy, 0.0, "f, g = " + fg.description)};
      });

  add("R22", "cs_refinement", "||a|| ||b|| >= |<a,b> - <a,e><e,b>| + |<a,e><e,b>| >= |<a,b>|, a = x, b = y, e unit",
      {}, {"outer", "inner"},
      [](auto& o, auto&, auto*, auto& why) {
        need_vectors(o, "xye", 0, false, why);
        if (o.x && o.y && o.e && (o.x->size() != o.y->size() || o.e->size() != o.x->size()))
          why.push_back("vector lengths differ");
        need_unit(o.e, "e", why);
      },
      [](Context& c, const CheckParams&) {
        const Vector& a = *c.ops().x;
        const Vector& b = *c.ops().y;
        const Vector& e = *c.ops().e;
        const Complex ab = inner(a, b);
        const Complex proj = inner(a, e) * inner(e, b);
        const double middle = std::abs(ab - proj) + std::abs(proj);
        return std::vector<Link>{cmp(middle, norm(a) * norm(b)), cmp(std::abs(ab), middle)};
      });

  add("R23", "polarization", "<x,y> = (1/4) sum_k ||x + i^k y||^2 i^k", {}, main,
      [](auto& o, auto&, auto*, auto& why) {
        need_vectors(o, "xy", 0, false, why);
        if (o.x && o.y && o.x->size() != o.y->size()) why.push_back("vector lengths differ");
      },
      [](Context& c, const CheckParams&) {
        const Vector& x = *c.ops().x;
        const Vector& y = *c.ops().y;
        Complex sum = 0.0;
        Complex ik = 1.0;
        for (int k = 0; k < 4; ++k) {
          const double nk = norm(axpy(ik, y, x));
          sum += nk * nk * ik;
          ik *= Complex(0.0, 1.0);
        }
        const double scale = norm(x) * norm(y);
        return std::vector<Link>{identity(std::abs(inner(x, y) - 0.25 * sum), scale)};
      });

  add("R24", "vector_square_power", "|<Ax,x>|^{2r} <= (||Ax||^r ||A*x||^r + |<A^2 x,x>|^r) / 2, x unit",
      {.r = true}, main,
      [](auto& o, auto& p, auto*, auto& why) {
        need_matrices(o, "A", why);
        need_vectors(o, "x", dim_of(o), o.A.has_value(), why);
        need_unit(o.x, "x", why);
        need_r_at_least(p, 1.0, why);
      },
      [](Context& c, const CheckParams& p) {
        const Vector& x = *c.ops().x;
        const Vector ax = c.A() * x;
        const double lhs = std::pow(std::abs(inner(ax, x)), 2.0 * p.r);
        const double rhs = 0.5 * (std::pow(norm(ax) * norm(c.A().adjoint() * x), p.r) +
                                  std::pow(std::abs(inner(c.A() * ax, x)), p.r));
        return std::vector<Link>{cmp(lhs, rhs)};
      });

  add("R25", "vector_weighted_product",
      "|<A^alpha X B^{1-alpha} x,x>|^r <= ||X||^r <(alpha A^r + (1-alpha) B^r) x,x>, A, B >= 0, x unit",
      {.r = true, .alpha = true}, main,
      [positive_pair](auto& o, auto& p, auto* ctx, auto& why) {
        positive_pair(o, ctx, why);
        need_vectors(o, "x", dim_of(o), o.A.has_value(), why);
        need_unit(o.x, "x", why);
        need_r_at_least(p, 2.0, why);
        need_alpha(p, why);
      },
      [](Context& c, const CheckParams& p) {
        const Vector& x = *c.ops().x;
        const HermitianSpectrum& a = c.positive("A");
        const HermitianSpectrum& b = c.positive("B");
        const ComplexMatrix m = psd_pow(a, p.alpha) * c.X() * psd_pow(b, 1.0 - p.alpha);
        const ComplexMatrix t = scaled_sum(p.alpha, psd_pow(a, p.r), 1.0 - p.alpha, psd_pow(b, p.r));
        const double lhs = std::pow(std::abs(inner(m * x, x)), p.r);
        const double rhs = power_of_norm(c, c.X(), p.r) * inner(t * x, x).real();
        return std::vector<Link>{cmp(lhs, rhs)};
      });

  add("R26", "dilation_identity",
      "w([[0, X], [X*, 0]]) = w(X); w of the blocked similarity mean = w(A X B^-1 + A^-1 X B) / 2",
      {}, {"dilation", "similarity"},
      [similarity_pair](auto& o, auto&, auto* ctx, auto& why) { similarity_pair(o, ctx, why); },
      [](Context& c, const CheckParams&) {
        const std::size_t n = c.X().size();
        const ComplexMatrix zero = ComplexMatrix::zero(n);
        const ComplexMatrix xh = block2x2(zero, c.X(), c.X().adjoint(), zero);
        const ComplexMatrix ah = block2x2(c.A(), zero, zero, c.B());
        const ComplexMatrix ahi = inverse(ah);
        const auto wxh = c.radius_pow(xh, 1.0);
        const auto wx = c.radius_pow(c.X(), 1.0);
        const auto wblock = c.radius_pow(0.5 * (ah * xh * ahi + ahi * xh * ah), 1.0);
        const ComplexMatrix s = c.A() * c.X() * inverse(c.B()) + inverse(c.A()) * c.X() * c.B();
        const auto ws = c.radius_pow(s, 1.0);
        char note[200];
        std::snprintf(note, sizeof note, "w(dilation) = %.17g, ||X|| = %.17g, w(X) = %.17g", wxh.value,
                      c.norm_of(c.X()), wx.value);
        char note2[200];
        std::snprintf(note2, sizeof note2, "w(block mean) = %.17g, ||S||/2 = %.17g, w(S)/2 = %.17g", wblock.value,
                      0.5 * c.norm_of(s), 0.5 * ws.value);
        return std::vector<Link>{
            identity(wxh.value - wx.value, std::max(wxh.value, wx.value), wxh.error + wx.error, note),
            identity(wblock.value - 0.5 * ws.value, std::max(wblock.value, 0.5 * ws.value),
                     wblock.error + 0.5 * ws.error, note2)};
      });

  return reg;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> reg = build_registry();
  return reg;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

const Entry& find_entry(std::string_view id) {
  const std::string key = lower(id);
  for (const Entry& e : entries())
    if (lower(e.info.id) == key || lower(e.info.alias) == key) return e;
  throw Error(ErrorKind::UnknownChecker, "unknown checker '" + std::string(id) + "'");
}

std::vector<std::string> requirements(const Entry& e, const OperandBundle& ops, const CheckParams& params,
                                      Context& ctx) {
  std::vector<std::string> why;
  e.requires_(ops, params, &ctx, why);
  return why;
}

std::vector<CheckResult> run(const Entry& e, Context& ctx, const CheckParams& params) {
  const std::vector<Link> links = e.evaluate(ctx, params);
  std::vector<CheckResult> out;
  out.reserve(links.size());
  for (std::size_t k = 0; k < links.size(); ++k) {
    const Link& l = links[k];
    CheckResult r;
    r.checker_id = std::string(e.info.id);
    r.link = std::string(e.info.links[k]);
    r.params = params;
    r.lhs = l.lhs;
    r.rhs = l.rhs;
    r.slack = l.rhs - l.lhs;
    const double mag = std::max({1.0, std::abs(l.lhs), std::abs(l.rhs), l.scale});
    r.tolerance = ctx.tol() * mag + l.error;
    r.satisfied = std::isfinite(r.slack) && r.slack >= -r.tolerance;
    r.operand_digest = ctx.digest();
    r.notes = l.notes;
    out.push_back(std::move(r));
  }
  return out;
}

void skip_note(std::vector<std::string>* skipped, const Entry& e, const std::vector<std::string>& why) {
  if (skipped == nullptr) return;
  std::string line = std::string(e.info.id) + ": ";
  for (std::size_t i = 0; i < why.size(); ++i) line += (i ? "; " : "") + why[i];
  skipped->push_back(std::move(line));
}

}  // namespace

std::string OperandBundle::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_tag = [&](char tag) { h = (h ^ static_cast<unsigned char>(tag)) * 0x100000001b3ULL; };
  if (A) mix_tag('A'), h = numrad::digest(*A, h);
  if (B) mix_tag('B'), h = numrad::digest(*B, h);
  if (X) mix_tag('X'), h = numrad::digest(*X, h);
  if (x) mix_tag('x'), h = numrad::digest(*x, h);
  if (y) mix_tag('y'), h = numrad::digest(*y, h);
  if (e) mix_tag('e'), h = numrad::digest(*e, h);
  const Vector scalars{a.value_or(0.0), b.value_or(0.0)};
  if (a || b) mix_tag('s'), h = numrad::digest(scalars, h);
  return hex_digest(h);
}

const std::vector<CheckerInfo>& registry() {
  static const std::vector<CheckerInfo> infos = [] {
    std::vector<CheckerInfo> v;
    for (const Entry& e : entries()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

const CheckerInfo& find_checker(std::string_view id_or_alias) { return find_entry(id_or_alias).info; }

std::vector<std::string> applicable(std::string_view id, const OperandBundle& ops, const CheckParams& params) {
  const Entry& e = find_entry(id);
  Context ctx(ops, 1e-8);
  return requirements(e, ops, params, ctx);
}

std::vector<CheckResult> check(std::string_view id, const OperandBundle& ops, const CheckParams& params,
                               double tol) {
  const Entry& e = find_entry(id);
  Context ctx(ops, tol);
  const std::vector<std::string> why = requirements(e, ops, params, ctx);
  if (!why.empty()) {
    std::string msg = std::string(e.info.id) + " preconditions: ";
    for (std::size_t i = 0; i < why.size(); ++i) msg += (i ? "; " : "") + why[i];
    throw Error(ErrorKind::PreconditionViolated, msg);
  }
  return run(e, ctx, params);
}

std::vector<CheckParams> grid_points(const CheckerInfo& info, const ParamGrid& grid) {
  std::vector<CheckParams> pts;
  if (grid.empty()) return pts;
  const CheckParams base;
  const std::vector<double> rs = info.uses.r ? grid.r : std::vector<double>{base.r};
  const auto pqs = info.uses.pq ? grid.pq : std::vector<std::pair<double, double>>{{base.p, base.q}};
  const std::vector<double> alphas = info.uses.alpha ? grid.alpha : std::vector<double>{base.alpha};
  const std::vector<int> ns = info.uses.n_power ? grid.n_power : std::vector<int>{base.n_power};
  const std::vector<double> ss = info.uses.s ? grid.s : std::vector<double>{base.s};
  for (double r : rs)
    for (const auto& [p, q] : pqs)
      for (double al : alphas)
        for (int n : ns)
          for (double s : ss) pts.push_back({r, p, q, al, n, s});
  return pts;
}

std::vector<CheckResult> check_all(const OperandBundle& ops, const ParamGrid& grid, double tol,
                                   std::span<const std::string> filter, std::vector<std::string>* skipped) {
  std::vector<CheckResult> out;
  if (grid.empty()) return out;
  std::vector<const Entry*> selected;
  if (filter.empty()) {
    for (const Entry& e : entries()) selected.push_back(&e);
  } else {
    for (const Entry& e : entries())
      for (const std::string& f : filter)
        if (&find_entry(f) == &e) {
          selected.push_back(&e);
          break;
        }
  }
  Context ctx(ops, tol);
  for (const Entry* e : selected) {
    for (const CheckParams& p : grid_points(e->info, grid)) {
      const std::vector<std::string> why = requirements(*e, ops, p, ctx);
      if (!why.empty()) {
        skip_note(skipped, *e, why);
        continue;
      }
      for (CheckResult& r : run(*e, ctx, p)) out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace numrad
