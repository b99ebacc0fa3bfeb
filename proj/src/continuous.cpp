#include <moyal/continuous.hpp>

#include <cmath>

#include <moyal/angular.hpp>
#include <moyal/parallel.hpp>

namespace moyal {

EpsilonSigns::EpsilonSigns(SpinJ s) : s_(s), eps_(static_cast<std::size_t>(s.dim()), 1) {}

EpsilonSigns::EpsilonSigns(SpinJ s, std::vector<int> eps) : s_(s), eps_(std::move(eps)) {
  if (eps_.size() != static_cast<std::size_t>(s.dim()))
    throw std::invalid_argument("EpsilonSigns: need 2s+1 signs");
  for (int e : eps_)
    if (e != 1 && e != -1) throw std::invalid_argument("EpsilonSigns: signs must be +1 or -1");
  if (eps_[0] != 1) throw std::invalid_argument("EpsilonSigns: eps_0 must be +1");
}

GammaWeights::GammaWeights(SpinJ s, std::vector<double> gamma) : s_(s), gamma_(std::move(gamma)) {
  if (gamma_.size() != static_cast<std::size_t>(s.dim()))
    throw std::invalid_argument("GammaWeights: need 2s+1 weights");
  for (double g : gamma_)
    if (!(g != 0.0) || !std::isfinite(g)) throw std::invalid_argument("GammaWeights: weights must be finite and nonzero");
  if (gamma_[0] != 1.0) throw std::invalid_argument("GammaWeights: gamma_0 must be +1");
}

GammaWeights GammaWeights::pq(SpinJ s) {
  std::vector<double> g(static_cast<std::size_t>(s.dim()));
  for (int l = 0; l < s.dim(); ++l) g[static_cast<std::size_t>(l)] = cg_diag(s, l, s.two_s());
  g[0] = 1.0;
  return GammaWeights(s, std::move(g));
}

bool KernelCoefficients::self_dual(double tol) const {
  for (std::size_t a = 0; a < lower.size(); ++a)
    if (std::abs(lower[a] - upper[a]) > tol) return false;
  return true;
}

double KernelCoefficients::projection(KernelSide k, int l) const {
  const auto& c = side(k);
  double sum = 0.0;
  for (int a = 0; a < s.dim(); ++a) sum += c[static_cast<std::size_t>(a)] * cg_diag(s, l, s.two_s() - 2 * a);
  return sum;
}

namespace {

// sum_l w_l (2l+1)/(2s+1) C(s l s; m 0 m) for each a = s - m
std::vector<double> coefficients_from_weights(SpinJ s, const std::vector<double>& w) {
  std::vector<double> out(static_cast<std::size_t>(s.dim()), 0.0);
  for (int a = 0; a < s.dim(); ++a) {
    const int two_m = s.two_s() - 2 * a;
    double sum = 0.0;
    for (int l = 0; l < s.dim(); ++l)
      sum += w[static_cast<std::size_t>(l)] * (2.0 * l + 1.0) / s.dim() * cg_diag(s, l, two_m);
    out[static_cast<std::size_t>(a)] = sum;
  }
  return out;
}

}  // namespace

KernelCoefficients selfdual_coeffs(SpinJ s, const EpsilonSigns& eps) {
  if (!(eps.spin() == s)) throw std::invalid_argument("selfdual_coeffs: spin mismatch");
  std::vector<double> w(eps.values().begin(), eps.values().end());
  auto c = coefficients_from_weights(s, w);
  return {s, c, c};
}

KernelCoefficients dual_coeffs(SpinJ s, const GammaWeights& gamma) {
  if (!(gamma.spin() == s)) throw std::invalid_argument("dual_coeffs: spin mismatch");
  std::vector<double> inv(gamma.values().size());
  for (std::size_t l = 0; l < inv.size(); ++l) inv[l] = 1.0 / gamma.values()[l];
  return {s, coefficients_from_weights(s, gamma.values()), coefficients_from_weights(s, inv)};
}

Operator kernel_at(const Direction& n, const KernelCoefficients& coeffs, KernelSide side) {
  const SpinJ s = coeffs.s;
  const auto& c = coeffs.side(side);
  // Third Euler angle fixed to 0; it only rephases |m, n>.
  const Operator u = rotation_operator(s, EulerAngles::to_direction(n));
  const ComplexMatrix& um = u.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(s.dim(), s.dim());
  for (int a = 0; a < s.dim(); ++a) out += c[static_cast<std::size_t>(a)] * um.col(a) * um.col(a).adjoint();
  return Operator(s, std::move(out));
}

cplx selfdual_matrix_element(SpinJ s, const EpsilonSigns& eps, int two_m, int two_mp,
                             const Direction& n) {
  const int q = (two_mp - two_m) / 2;
  cplx sum = 0.0;
  for (int l = std::abs(q); l <= s.two_s(); ++l)
    sum += static_cast<double>(eps[l]) * std::sqrt(2.0 * l + 1.0) *
           clebsch_gordan(s.two_s(), two_m, 2 * l, 2 * q, s.two_s(), two_mp) * spherical_harmonic(l, q, n);
  return std::sqrt(4.0 * M_PI) / s.dim() * sum;
}

double reproducing_kernel(SpinJ s, const Direction& a, const Direction& b) {
  const double x = std::clamp(a.dot(b), -1.0, 1.0);
  double sum = 0.0;
  for (int l = 0; l <= s.two_s(); ++l) sum += (2.0 * l + 1.0) * legendre_p(l, x);
  return sum / (4.0 * M_PI);
}

cplx continuous_symbol(const Operator& a, const Direction& n, const KernelCoefficients& coeffs,
                       KernelSide side) {
  if (!(a.spin() == coeffs.s)) throw std::invalid_argument("continuous_symbol: dimension mismatch");
  return trace_product(a, kernel_at(n, coeffs, side));
}

cplx continuous_star_kernel(const Direction& n, const Direction& m, const Direction& k,
                            const KernelCoefficients& coeffs) {
  if (!coeffs.self_dual())
    throw std::invalid_argument("continuous_star_kernel: kernel coefficients are not self-dual");
  const SpinJ s = coeffs.s;
  const Operator dn = kernel_at(n, coeffs);
  const Operator dm = kernel_at(m, coeffs);
  const Operator dk = kernel_at(k, coeffs);
  const double pref = s.dim() / (4.0 * M_PI);
  return pref * pref * trace_product(dn * dm, dk);
}

std::vector<SymbolSample> symbol_grid(const Operator& a, const KernelCoefficients& coeffs,
                                      KernelSide side, int n_theta, int n_phi, int threads) {
  if (n_theta < 1 || n_phi < 1) throw std::invalid_argument("symbol_grid: grid must be nonempty");
  std::vector<SymbolSample> out(static_cast<std::size_t>(n_theta) * n_phi);
  parallel_for(out.size(), threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n_phi;
    const int j = static_cast<int>(idx) % n_phi;
    const double theta = (i + 0.5) * M_PI / n_theta;
    const double phi = 2.0 * M_PI * j / n_phi;
    out[idx] = {theta, phi, continuous_symbol(a, Direction::from_angles(theta, phi), coeffs, side)};
  });
  return out;
}

}  // namespace moyal
