#include "nfield/charpoly.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "nfield/error.hpp"

namespace nfield {

namespace {

using Poly = std::vector<cplx>;

Poly mul_linear(const Poly& a, cplx root) {
  // a(s) * (s - root), ascending coefficients.
  Poly out(a.size() + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] -= root * a[i];
    out[i + 1] += a[i];
  }
  return out;
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (auto x : v) m = std::max(m, std::abs(x));
  return m;
}

void require_leading(cplx lambda, const ModelParams& p) {
  if (std::abs(lambda + p.alpha()) <= 1e-14 * std::max(1.0, std::abs(lambda)))
    throw NumericalError(ErrorCode::DegenerateLeading, "lambda = -alpha drops the polynomial degree");
}

}  // namespace

std::vector<cplx> shifted_rates(cplx lambda, const ModelParams& p) {
  std::vector<cplx> k;
  k.reserve(p.size());
  for (const auto& t : p.terms()) k.push_back(lambda + t.mu);
  return k;
}

Degeneracy degeneracy_check(cplx lambda, const ModelParams& p, double tol) {
  const auto k = shifted_rates(lambda, p);
  double scale = 1.0;
  for (auto ki : k) scale = std::max(scale, std::norm(ki));
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(k[i] * k[i] - k[j] * k[j]) < tol * scale) return Degeneracy::InS;
  return Degeneracy::NotInS;
}

std::vector<cplx> closed_form_poly(cplx lambda, const ModelParams& p) {
  require_leading(lambda, p);
  const auto k = shifted_rates(lambda, p);
  const auto c = effective_coefficients(p);
  const std::size_t n = k.size();

  Poly full{std::exp(lambda * p.tau0()) * (lambda + p.alpha()) / 2.0};
  for (auto kj : k) full = mul_linear(full, kj * kj);

  for (std::size_t i = 0; i < n; ++i) {
    Poly term{c[i] * k[i]};
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) term = mul_linear(term, k[j] * k[j]);
    for (std::size_t m = 0; m < term.size(); ++m) full[m] += term[m];
  }
  return full;
}

namespace {

// beta = M^T [zeta; 1] with M^T = e^{lambda tau0}(lambda+alpha) I + 2 Xi,
// Xi upper triangular Toeplitz with Xi[a][a+m] = sum_i c_i k_i^{2m-1}.
std::vector<cplx> assemble_beta(cplx lambda, const ModelParams& p, const std::vector<cplx>& z) {
  const auto k = shifted_rates(lambda, p);
  const auto c = effective_coefficients(p);
  const std::size_t n = k.size();
  const cplx e = std::exp(lambda * p.tau0()) * (lambda + p.alpha());

  std::vector<cplx> band(n + 1, 0.0);  // band[m] = sum_i c_i k_i^{2m-1}
  for (std::size_t m = 1; m <= n; ++m)
    for (std::size_t i = 0; i < n; ++i) band[m] += c[i] * std::pow(k[i], static_cast<int>(2 * m - 1));

  std::vector<cplx> beta(n + 1, 0.0);
  for (std::size_t a = 0; a <= n; ++a) {
    beta[a] = e * z[a];
    for (std::size_t b = a + 1; b <= n; ++b) beta[a] += 2.0 * band[b - a] * z[b];
  }
  return beta;
}

}  // namespace

VandermondeCoeffs vandermonde_coeffs(cplx lambda, const ModelParams& p) {
  require_leading(lambda, p);
  if (degeneracy_check(lambda, p) == Degeneracy::InS)
    throw NumericalError(ErrorCode::SingularVandermonde, "k_i^2 = k_j^2 for some i != j");
  const auto k = shifted_rates(lambda, p);
  const Eigen::Index n = static_cast<Eigen::Index>(k.size());

  CMatrix w(n, n);
  CVector rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx s = k[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(i)];
    cplx pw = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      w(i, j) = pw;
      pw *= s;
    }
    rhs[i] = -pw;
  }
  const CVector zeta = w.partialPivLu().solve(rhs);

  VandermondeCoeffs out;
  out.zeta.assign(zeta.data(), zeta.data() + n);
  auto z = out.zeta;
  z.push_back(1.0);
  out.beta = assemble_beta(lambda, p, z);
  return out;
}

VandermondeCoeffs symmetric_function_coeffs(cplx lambda, const ModelParams& p) {
  require_leading(lambda, p);
  if (degeneracy_check(lambda, p) == Degeneracy::InS)
    throw NumericalError(ErrorCode::SingularVandermonde, "k_i^2 = k_j^2 for some i != j");
  const auto k = shifted_rates(lambda, p);
  const auto c = effective_coefficients(p);
  const std::size_t n = k.size();

  // e_j(k_1^2, ..., k_N^2) by the usual recurrence; Z_m = (-1)^{N-m} e_{N-m}.
  std::vector<cplx> esym(n + 1, 0.0);
  esym[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j >= 1; --j) esym[j] += k[i] * k[i] * esym[j - 1];
  std::vector<cplx> z(n + 1);
  for (std::size_t m = 0; m <= n; ++m) z[m] = ((n - m) % 2 ? -1.0 : 1.0) * esym[n - m];

  const cplx e = std::exp(lambda * p.tau0()) * (lambda + p.alpha());
  CMatrix mt = e * CMatrix::Identity(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    CMatrix xi = CMatrix::Zero(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n + 1));
    for (std::size_t a = 0; a <= n; ++a)
      for (std::size_t b = a + 1; b <= n; ++b)
        xi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            std::pow(k[i], static_cast<int>(2 * (b - a - 1)));
    mt += 2.0 * c[i] * k[i] * xi;
  }
  const CVector zv = Eigen::Map<const CVector>(z.data(), static_cast<Eigen::Index>(n + 1));
  const CVector beta = mt * zv;

  VandermondeCoeffs out;
  out.zeta.assign(z.begin(), z.end() - 1);
  out.beta.assign(beta.data(), beta.data() + beta.size());
  return out;
}

cplx poly_eval(const std::vector<cplx>& coeffs_s, cplx s) {
  cplx acc = 0.0;
  for (auto it = coeffs_s.rbegin(); it != coeffs_s.rend(); ++it) acc = acc * s + *it;
  return acc;
}

cplx canonical_rho(cplx rho) {
  const double tie = 1e-14 * std::abs(rho);
  if (rho.real() < -tie || (std::abs(rho.real()) <= tie && rho.imag() < 0.0)) return -rho;
  return rho;
}

std::vector<cplx> rho_roots(const std::vector<cplx>& coeffs_s, double repeat_tol) {
  const std::size_t n = coeffs_s.size() - 1;
  const double scale = max_abs(coeffs_s);
  if (n == 0 || std::abs(coeffs_s[n]) <= 1e-14 * scale)
    throw NumericalError(ErrorCode::DegenerateLeading, "leading coefficient vanishes");

  std::vector<cplx> s;
  if (n == 1) {
    s = {-coeffs_s[0] / coeffs_s[1]};
  } else if (n == 2) {
    const cplx a = coeffs_s[2], b = coeffs_s[1], c = coeffs_s[0];
    const cplx disc = std::sqrt(b * b - 4.0 * a * c);
    const cplx q = -0.5 * (std::abs(b + disc) >= std::abs(b - disc) ? b + disc : b - disc);
    if (q == cplx(0.0)) {
      s = {0.0, 0.0};
    } else {
      s = {q / a, c / q};
    }
  } else {
    const Eigen::Index m = static_cast<Eigen::Index>(n);
    CMatrix comp = CMatrix::Zero(m, m);
    for (Eigen::Index i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) comp(i, m - 1) = -coeffs_s[static_cast<std::size_t>(i)] / coeffs_s[n];
    Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
    const CVector ev = es.eigenvalues();
    s.assign(ev.data(), ev.data() + m);
    // Two Newton polish steps on the polynomial itself.
    std::vector<cplx> d(n);
    for (std::size_t i = 1; i <= n; ++i) d[i - 1] = static_cast<double>(i) * coeffs_s[i];
    for (auto& si : s)
      for (int it = 0; it < 2; ++it) {
        const cplx dp = poly_eval(d, si);
        if (dp != cplx(0.0)) si -= poly_eval(coeffs_s, si) / dp;
      }
  }

  if (repeat_tol > 0.0) {
    double smax = 1.0;
    for (auto v : s) smax = std::max(smax, std::abs(v));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(s[i] - s[j]) <= repeat_tol * smax)
          throw NumericalError(ErrorCode::RepeatedRoots, "repeated roots in s = rho^2");
  }

  std::vector<cplx> rho;
  rho.reserve(n);
  for (auto v : s) rho.push_back(canonical_rho(std::sqrt(v)));
  std::sort(rho.begin(), rho.end(), [](cplx a, cplx b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    return std::arg(a) < std::arg(b);
  });
  return rho;
}

PolyData make_poly(cplx lambda, const ModelParams& p) {
  PolyData d;
  d.lambda = lambda;
  d.k = shifted_rates(lambda, p);
  d.coeffs_s = closed_form_poly(lambda, p);
  d.rho = rho_roots(d.coeffs_s, 0.0);
  return d;
}

void align_rho(PolyData& poly, const std::vector<cplx>& reference) {
  std::vector<cplx> pool = poly.rho;
  std::vector<cplx> out;
  out.reserve(reference.size());
  for (auto ref : reference) {
    std::size_t best = 0;
    double best_d = INFINITY;
    cplx best_v = 0.0;
    for (std::size_t j = 0; j < pool.size(); ++j)
      for (double sgn : {1.0, -1.0}) {
        const double dist = std::abs(sgn * pool[j] - ref);
        if (dist < best_d) {
          best_d = dist;
          best = j;
          best_v = sgn * pool[j];
        }
      }
    out.push_back(best_v);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
  }
  poly.rho = out;
}

const char* to_string(Admissibility a) {
  switch (a) {
    case Admissibility::Accept: return "ACCEPT";
    case Admissibility::InS: return "lambda-in-S";
    case Admissibility::RootCollision: return "rho-collision";
    case Admissibility::RateCollision: return "k-equals-rho";
  }
  return "unknown";
}

Admissibility admissibility(const PolyData& poly, double tol) {
  const auto& k = poly.k;
  const auto& rho = poly.rho;
  double kscale = 1.0, rscale = 1.0;
  for (auto v : k) kscale = std::max(kscale, std::abs(v));
  for (auto v : rho) rscale = std::max(rscale, std::abs(v));

  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(k[i] * k[i] - k[j] * k[j]) < tol * kscale * kscale) return Admissibility::InS;

  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (std::abs(2.0 * rho[i]) <= tol * rscale) return Admissibility::RootCollision;
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(rho[i] - rho[j]) <= tol * rscale || std::abs(rho[i] + rho[j]) <= tol * rscale)
        return Admissibility::RootCollision;
  }

  const double cscale = std::max(kscale, rscale);
  for (auto kj : k)
    for (auto ri : rho)
      if (std::abs(kj - ri) <= tol * cscale || std::abs(kj + ri) <= tol * cscale)
        return Admissibility::RateCollision;
  return Admissibility::Accept;
}

}  // namespace nfield
