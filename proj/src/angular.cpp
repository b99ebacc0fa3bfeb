#include <moyal/angular.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace moyal {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_int exact_factorial(int n) {
  cpp_int r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void check_pair(int two_j, int two_m, const char* what) {
  if (two_j < 0) throw std::domain_error(std::string("clebsch_gordan: negative ") + what);
  if (std::abs(two_m) > two_j)
    throw std::domain_error(std::string("clebsch_gordan: |m| > j for ") + what);
  if ((two_j + two_m) % 2 != 0)
    throw std::domain_error(std::string("clebsch_gordan: j and m of ") + what +
                            " are not both integer or both half-integer");
}

void check_spin_projection(SpinJ s, int two_m) {
  if (std::abs(two_m) > s.two_s() || (s.two_s() + two_m) % 2 != 0)
    throw std::domain_error("projection m is not a valid magnetic quantum number for spin s");
}

const std::array<long double, 171>& factorial_table() {
  static const auto table = [] {
    std::array<long double, 171> t{};
    t[0] = 1.0L;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<long double>(i);
    return t;
  }();
  return table;
}

cplx int_power(cplx z, int n) {
  cplx r(1.0, 0.0);
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

}  // namespace

double factorial(int n) {
  if (n < 0 || n > 170) throw std::domain_error("factorial: argument out of range");
  return static_cast<double>(factorial_table()[static_cast<std::size_t>(n)]);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(static_cast<double>(factorial_table()[n] /
                                        (factorial_table()[k] * factorial_table()[n - k])));
}

double clebsch_gordan(int two_j1, int two_m1, int two_j2, int two_m2, int two_J, int two_M) {
  check_pair(two_j1, two_m1, "j1");
  check_pair(two_j2, two_m2, "j2");
  check_pair(two_J, two_M, "J");
  if ((two_j1 + two_j2 + two_J) % 2 != 0)
    throw std::domain_error("clebsch_gordan: j1 + j2 + J is not an integer");
  if (two_J < std::abs(two_j1 - two_j2) || two_J > two_j1 + two_j2)
    throw std::domain_error("clebsch_gordan: triangle inequality violated");
  if (two_M != two_m1 + two_m2) return 0.0;

  // All quantities below are integers.
  const int j1_p_j2_m_J = (two_j1 + two_j2 - two_J) / 2;
  const int j1_m_j2_p_J = (two_j1 - two_j2 + two_J) / 2;
  const int mj1_p_j2_p_J = (-two_j1 + two_j2 + two_J) / 2;
  const int total = (two_j1 + two_j2 + two_J) / 2 + 1;
  const int j1_p_m1 = (two_j1 + two_m1) / 2;
  const int j1_m_m1 = (two_j1 - two_m1) / 2;
  const int j2_p_m2 = (two_j2 + two_m2) / 2;
  const int j2_m_m2 = (two_j2 - two_m2) / 2;
  const int J_p_M = (two_J + two_M) / 2;
  const int J_m_M = (two_J - two_M) / 2;
  const int J_m_j2_p_m1 = (two_J - two_j2 + two_m1) / 2;
  const int J_m_j1_m_m2 = (two_J - two_j1 - two_m2) / 2;

  const int k_min = std::max({0, -J_m_j2_p_m1, -J_m_j1_m_m2});
  const int k_max = std::min({j1_p_j2_m_J, j1_m_m1, j2_p_m2});

  cpp_rational sum = 0;
  for (int k = k_min; k <= k_max; ++k) {
    const cpp_int denom = exact_factorial(k) * exact_factorial(j1_p_j2_m_J - k) *
                          exact_factorial(j1_m_m1 - k) * exact_factorial(j2_p_m2 - k) *
                          exact_factorial(J_m_j2_p_m1 + k) * exact_factorial(J_m_j1_m_m2 + k);
    const cpp_rational term(cpp_int(1), denom);
    if (k % 2 == 0)
      sum += term;
    else
      sum -= term;
  }
  if (sum == 0) return 0.0;

  const cpp_rational prefactor(
      cpp_int(two_J + 1) * exact_factorial(j1_p_j2_m_J) * exact_factorial(j1_m_j2_p_J) *
          exact_factorial(mj1_p_j2_p_J) * exact_factorial(j1_p_m1) * exact_factorial(j1_m_m1) *
          exact_factorial(j2_p_m2) * exact_factorial(j2_m_m2) * exact_factorial(J_p_M) *
          exact_factorial(J_m_M),
      exact_factorial(total));

  const cpp_rational squared = prefactor * sum * sum;
  const double magnitude = std::sqrt(squared.convert_to<double>());
  return sum > 0 ? magnitude : -magnitude;
}

double cg_diag(SpinJ s, int l, int two_m) {
  return clebsch_gordan(s.two_s(), two_m, 2 * l, 0, s.two_s(), two_m);
}

double legendre_p(int l, double x) {
  if (l < 0) throw std::domain_error("legendre_p: negative degree");
  if (std::abs(x) > 1.0 + 1e-12) throw std::domain_error("legendre_p: |x| > 1");
  x = std::clamp(x, -1.0, 1.0);
  if (l == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < l; ++k) {
    const double next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

cplx spherical_harmonic(int l, int m, const Direction& n) {
  if (l < 0 || std::abs(m) > l) throw std::domain_error("spherical_harmonic: need |m| <= l");
  const int am = std::abs(m);
  const double x = std::clamp(n.z(), -1.0, 1.0);
  const double sint = std::hypot(n.x(), n.y());

  // Normalized associated Legendre functions, Condon-Shortley phase included.
  double pmm = 1.0 / std::sqrt(4.0 * M_PI);
  for (int k = 1; k <= am; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sint;
  double plm = pmm;
  if (l > am) {
    double prev = pmm;
    double cur = std::sqrt(2.0 * am + 3.0) * x * pmm;
    for (int k = am + 2; k <= l; ++k) {
      const double a = std::sqrt((4.0 * k * k - 1.0) / (static_cast<double>(k) * k - am * am));
      const double b = std::sqrt(((k - 1.0) * (k - 1.0) - am * am) / (4.0 * (k - 1.0) * (k - 1.0) - 1.0));
      const double next = a * (x * cur - b * prev);
      prev = cur;
      cur = next;
    }
    plm = cur;
  }

  const cplx y = plm * std::polar(1.0, am * n.phi());
  if (m >= 0) return y;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

double wigner_small_d(int two_j, int two_m, int two_mp, double beta) {
  if (two_j < 0 || std::abs(two_m) > two_j || std::abs(two_mp) > two_j ||
      (two_j + two_m) % 2 != 0 || (two_j + two_mp) % 2 != 0)
    throw std::domain_error("wigner_small_d: invalid quantum numbers");
  const auto& f = factorial_table();
  const int j_p_m = (two_j + two_m) / 2;
  const int j_m_m = (two_j - two_m) / 2;
  const int j_p_mp = (two_j + two_mp) / 2;
  const int j_m_mp = (two_j - two_mp) / 2;
  const int m_m_mp = (two_m - two_mp) / 2;

  const long double root = std::sqrt(f[j_p_m] * f[j_m_m] * f[j_p_mp] * f[j_m_mp]);
  const long double c = std::cos(0.5L * beta);
  const long double sn = std::sin(0.5L * beta);

  const int k_min = std::max(0, -m_m_mp);
  const int k_max = std::min(j_p_mp, j_m_m);
  long double sum = 0.0L;
  for (int k = k_min; k <= k_max; ++k) {
    const long double denom = f[j_p_mp - k] * f[k] * f[j_m_m - k] * f[k + m_m_mp];
    const int cos_pow = two_j - 2 * k - m_m_mp;
    const int sin_pow = 2 * k + m_m_mp;
    const long double term = std::pow(c, cos_pow) * std::pow(sn, sin_pow) / denom;
    sum += ((k + m_m_mp) % 2 == 0) ? term : -term;
  }
  return static_cast<double>(root * sum);
}

Eigen::MatrixXd wigner_small_d_matrix(int two_j, double beta) {
  const int d = two_j + 1;
  Eigen::MatrixXd out(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out(a, b) = wigner_small_d(two_j, two_j - 2 * a, two_j - 2 * b, beta);
  return out;
}

cplx coherent_amplitude(SpinJ s, int two_m, const StereoPoint& z) {
  check_spin_projection(s, two_m);
  const int a = (s.two_s() - two_m) / 2;
  if (z.is_infinite()) return a == s.two_s() ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
  const double norm = std::pow(1.0 + std::norm(z.z), -0.5 * s.two_s());
  return std::sqrt(binomial(s.two_s(), a)) * int_power(z.z, a) * norm;
}

cplx coherent_amplitude(SpinJ s, int two_m, const Direction& n) {
  check_spin_projection(s, two_m);
  const int a = (s.two_s() - two_m) / 2;
  const double half = 0.5 * n.theta();
  const double mag = std::sqrt(binomial(s.two_s(), a)) * std::pow(std::cos(half), s.two_s() - a) *
                     std::pow(std::sin(half), a);
  return std::polar(mag, a * n.phi());
}

Eigen::VectorXcd coherent_state(SpinJ s, const Direction& n) {
  Eigen::VectorXcd v(s.dim());
  for (int a = 0; a < s.dim(); ++a) v(a) = coherent_amplitude(s, s.two_s() - 2 * a, n);
  return v;
}

double basis_overlap_sq(SpinJ s, int two_m, int two_mp, double theta) {
  check_spin_projection(s, two_m);
  check_spin_projection(s, two_mp);
  const double x = std::cos(theta);
  double sum = 0.0;
  for (int l = 0; l <= s.two_s(); ++l)
    sum += (2.0 * l + 1.0) / s.dim() * cg_diag(s, l, two_m) * cg_diag(s, l, two_mp) * legendre_p(l, x);
  return sum;
}

}  // namespace moyal
