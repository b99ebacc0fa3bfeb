#include <moyal/discrete.hpp>

#include <cmath>
#include <limits>

#include <moyal/angular.hpp>
#include <moyal/parallel.hpp>

namespace moyal {

const char* to_string(DualMethod m) noexcept {
  switch (m) {
    case DualMethod::gram_solve: return "gram";
    case DualMethod::factorized: return "factorized";
    case DualMethod::vandermonde: return "vandermonde";
  }
  return "unknown";
}

DualMethod parse_dual_method(const std::string& name) {
  if (name == "gram") return DualMethod::gram_solve;
  if (name == "factorized") return DualMethod::factorized;
  if (name == "vandermonde") return DualMethod::vandermonde;
  throw std::invalid_argument("unknown dual method '" + name + "' (expected gram, factorized or vandermonde)");
}

KernelPair::KernelPair(Constellation c, std::vector<Operator> q_ops, std::vector<Operator> dual_ops,
                       RealMatrix gram, RealMatrix gram_inv, double condition, DualMethod method)
    : c_(std::move(c)),
      q_(std::move(q_ops)),
      dual_(std::move(dual_ops)),
      gram_(std::move(gram)),
      gram_inv_(std::move(gram_inv)),
      condition_(condition),
      method_(method),
      id_(c_.fingerprint()) {
  if (q_.size() != c_.size() || dual_.size() != c_.size())
    throw std::invalid_argument("KernelPair: operator count does not match the constellation");
}

std::vector<Operator> q_projectors(const Constellation& c) {
  std::vector<Operator> out;
  out.reserve(c.size());
  for (const auto& p : c.points()) out.push_back(Operator::projector(c.spin(), coherent_state(c.spin(), p)));
  return out;
}

namespace {

using ExtendedMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Entries ((1 + n.n')/2)^(2s) carried in extended precision.
ExtendedMatrix gram_extended(const Constellation& c) {
  const Eigen::Index n = static_cast<Eigen::Index>(c.size());
  const int two_s = c.spin().two_s();
  ExtendedMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 1.0L;
    const Eigen::Vector3d& a = c[static_cast<std::size_t>(i)].vec();
    for (Eigen::Index j = 0; j < i; ++j) {
      const Eigen::Vector3d& b = c[static_cast<std::size_t>(j)].vec();
      long double dot = 0.0L;
      for (int k = 0; k < 3; ++k) dot += static_cast<long double>(a(k)) * static_cast<long double>(b(k));
      const long double base = std::max(0.0L, 0.5L * (1.0L + dot));
      long double p = 1.0L;
      for (int e = 0; e < two_s; ++e) p *= base;
      g(i, j) = g(j, i) = p;
    }
  }
  return g;
}

ExtendedMatrix gram_of(const std::vector<Operator>& q) {
  using xcplx = std::complex<long double>;
  const Eigen::Index n = static_cast<Eigen::Index>(q.size());
  std::vector<Eigen::Matrix<xcplx, Eigen::Dynamic, Eigen::Dynamic>> qe;
  qe.reserve(q.size());
  for (const auto& op : q) qe.push_back(op.matrix().cast<xcplx>());
  ExtendedMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      g(i, j) = g(j, i) =
          (qe[static_cast<std::size_t>(i)].array() * qe[static_cast<std::size_t>(j)].transpose().array()).sum().real();
  return g;
}

}  // namespace

RealMatrix gram(const Constellation& c) { return gram_extended(c).cast<double>(); }

QFactorization q_matrix_factorization(const Constellation& c) {
  const SpinJ s = c.spin();
  const int d = s.dim();
  const Eigen::Index n = static_cast<Eigen::Index>(c.size());
  QFactorization f;
  f.d1.resize(n);
  f.n.resize(n, n);
  f.d2.resize(n);
  for (int a = 0; a < d; ++a)
    for (int ap = 0; ap < d; ++ap)
      f.d2(a * d + ap) = std::sqrt(binomial(s.two_s(), a) * binomial(s.two_s(), ap));
  for (Eigen::Index nu = 0; nu < n; ++nu) {
    const StereoPoint z = StereoPoint::from_direction(c[static_cast<std::size_t>(nu)]);
    if (z.is_infinite())
      throw DegenerateConstellationError("q_matrix_factorization: point " + std::to_string(nu + 1) +
                                         " is at the south pole; rotate the constellation first");
    f.d1(nu) = std::pow(1.0 + std::norm(z.z), -s.two_s());
    std::vector<cplx> zp(static_cast<std::size_t>(d), 1.0);
    for (int a = 1; a < d; ++a) zp[static_cast<std::size_t>(a)] = zp[static_cast<std::size_t>(a - 1)] * z.z;
    for (int a = 0; a < d; ++a)
      for (int ap = 0; ap < d; ++ap)
        f.n(nu, a * d + ap) = zp[static_cast<std::size_t>(a)] * std::conj(zp[static_cast<std::size_t>(ap)]);
  }
  return f;
}

std::vector<cplx> elementary_symmetric(const std::vector<cplx>& values) {
  // Coefficients of prod (1 + x t): e[k] multiplies t^k.
  std::vector<cplx> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += values[i] * e[k - 1];
  return e;
}

ComplexMatrix vandermonde_inverse(const std::vector<cplx>& nodes) {
  const std::size_t n = nodes.size();
  if (n == 0) throw std::domain_error("vandermonde_inverse: no nodes");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double scale = std::max({1.0, std::abs(nodes[i]), std::abs(nodes[j])});
      if (std::abs(nodes[i] - nodes[j]) <= 1e-13 * scale)
        throw std::domain_error("vandermonde_inverse: nodes " + std::to_string(j) + " and " +
                                std::to_string(i) + " coincide");
    }
  // Evaluated in extended precision: the symmetric sums cancel heavily for
  // nodes of mixed magnitude.
  using xcplx = std::complex<long double>;
  ComplexMatrix inv(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<xcplx> e(n);
  for (std::size_t mu = 0; mu < n; ++mu) {
    std::fill(e.begin(), e.end(), xcplx(0.0L));
    e[0] = 1.0L;
    xcplx denom = 1.0L;
    std::size_t count = 0;
    for (std::size_t lam = 0; lam < n; ++lam)
      if (lam != mu) {
        const xcplx x(nodes[lam].real(), nodes[lam].imag());
        ++count;
        for (std::size_t k = count; k >= 1; --k) e[k] += x * e[k - 1];
        denom *= xcplx(nodes[mu].real(), nodes[mu].imag()) - x;
      }
    // Column mu holds the monomial coefficients of the Lagrange polynomial of node mu.
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = n - 1 - j;
      const xcplx v = ((k % 2 == 0) ? 1.0L : -1.0L) * e[k] / denom;
      inv(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(mu)) = cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    }
  }
  return inv;
}

std::optional<cplx> detect_spiral(const Constellation& c, double tol) {
  const StereoPoint first = StereoPoint::from_direction(c[0]);
  if (first.is_infinite() || std::abs(first.z - 1.0) > tol) return std::nullopt;
  const StereoPoint second = StereoPoint::from_direction(c[1]);
  if (second.is_infinite()) return std::nullopt;
  const cplx z0 = second.z;
  cplx expected = 1.0;
  for (std::size_t nu = 0; nu < c.size(); ++nu, expected *= z0) {
    const StereoPoint z = StereoPoint::from_direction(c[nu]);
    if (z.is_infinite() || std::abs(z.z - expected) > tol * std::max(1.0, std::abs(expected)))
      return std::nullopt;
  }
  return z0;
}

std::vector<cplx> spiral_nodes(SpinJ s, cplx z0) {
  const int d = s.dim();
  std::vector<cplx> w(static_cast<std::size_t>(d * d));
  for (int a = 0; a < d; ++a)
    for (int ap = 0; ap < d; ++ap)
      w[static_cast<std::size_t>(a * d + ap)] = std::pow(z0, a) * std::pow(std::conj(z0), ap);
  return w;
}

namespace {

// <a'|Q^mu|a> = (2s+1) (Q^-1)_{(a,a'),mu}, with Q^-1 = D2^-1 N^-1 D1^-1.
std::vector<Operator> duals_from_inverse(SpinJ s, const QFactorization& f, const ComplexMatrix& n_inv) {
  const int d = s.dim();
  const Eigen::Index n = n_inv.rows();
  std::vector<Operator> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index mu = 0; mu < n; ++mu) {
    ComplexMatrix m(d, d);
    for (int a = 0; a < d; ++a)
      for (int ap = 0; ap < d; ++ap) {
        const Eigen::Index k = a * d + ap;
        m(ap, a) = static_cast<double>(d) * n_inv(k, mu) / (f.d2(k) * f.d1(mu));
      }
    out.emplace_back(s, std::move(m));
  }
  return out;
}

std::vector<Operator> duals_by_gram(SpinJ s, const std::vector<Operator>& q, const ExtendedMatrix& g_inv) {
  using ExtendedComplex = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
  const std::size_t n = q.size();
  std::vector<ExtendedComplex> qe;
  qe.reserve(n);
  for (const auto& op : q) qe.push_back(op.matrix().cast<std::complex<long double>>());
  std::vector<Operator> out;
  out.reserve(n);
  for (std::size_t nu = 0; nu < n; ++nu) {
    ExtendedComplex m = ExtendedComplex::Zero(s.dim(), s.dim());
    for (std::size_t mu = 0; mu < n; ++mu)
      m += std::complex<long double>(g_inv(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu))) * qe[mu];
    m *= static_cast<long double>(s.dim());
    out.emplace_back(s, m.cast<cplx>());
  }
  return out;
}

// |z| bound for the stereographic chart; beyond it the constellation is turned first.
constexpr double chart_bound = 3.0;

// Direction farthest from every point, searched over a Fibonacci lattice.
Eigen::Vector3d emptiest_direction(const Constellation& c) {
  constexpr int candidates = 4096;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  Eigen::Vector3d best = -Eigen::Vector3d::UnitZ();
  double best_score = std::numeric_limits<double>::infinity();
  for (int i = 0; i < candidates; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / candidates;
    const double r = std::sqrt(1.0 - z * z);
    const Eigen::Vector3d p(r * std::cos(golden * i), r * std::sin(golden * i), z);
    double nearest = -1.0;
    for (const auto& q : c.points()) nearest = std::max(nearest, p.dot(q.vec()));
    if (nearest < best_score) {
      best_score = nearest;
      best = p;
    }
  }
  return best;
}

std::vector<Operator> duals_by_factorization(const Constellation& c) {
  const SpinJ s = c.spin();
  double max_z = 0.0;
  for (const auto& p : c.points()) {
    const StereoPoint z = StereoPoint::from_direction(p);
    max_z = std::max(max_z, z.is_infinite() ? std::numeric_limits<double>::infinity() : std::abs(z.z));
  }
  if (max_z <= chart_bound) {
    const QFactorization f = q_matrix_factorization(c);
    const ComplexMatrix n_inv = Eigen::PartialPivLU<ComplexMatrix>(f.n).inverse();
    return duals_from_inverse(s, f, n_inv);
  }
  // Send the emptiest direction to the south pole, solve there, rotate back.
  const Eigen::Matrix3d r =
      Eigen::Quaterniond::FromTwoVectors(emptiest_direction(c), -Eigen::Vector3d::UnitZ()).toRotationMatrix();
  const EulerAngles g = EulerAngles::from_matrix(r);
  const Constellation turned = rotate(c, g);
  const QFactorization f = q_matrix_factorization(turned);
  const ComplexMatrix n_inv = Eigen::PartialPivLU<ComplexMatrix>(f.n).inverse();
  std::vector<Operator> duals = duals_from_inverse(s, f, n_inv);
  const ComplexMatrix u = rotation_operator(s, g).matrix();
  for (auto& op : duals) op = Operator(s, u.adjoint() * op.matrix() * u);
  return duals;
}

std::vector<Operator> duals_by_vandermonde(const Constellation& c) {
  const auto z0 = detect_spiral(c);
  if (!z0) throw std::invalid_argument("dual_kernel: the Vandermonde method needs a spiral constellation");
  const SpinJ s = c.spin();
  const QFactorization f = q_matrix_factorization(c);
  // N_{nu,k} = w_k^(nu-1), so N is the transpose of V_{k,nu} = w_k^nu.
  const ComplexMatrix n_inv = vandermonde_inverse(spiral_nodes(s, *z0)).transpose();
  return duals_from_inverse(s, f, n_inv);
}

}  // namespace

KernelPair dual_kernel(const Constellation& c, DualMethod method) {
  const SpinJ s = c.spin();
  const ValidityReport rep = validate(c);
  if (!rep.allowed)
    throw SingularMatrixError("dual_kernel: forbidden constellation (relative det y " + std::to_string(rep.det_y) +
                                  ", Gram condition " + std::to_string(rep.gram_condition) + ")",
                              rep.gram_condition);
  std::vector<Operator> q = q_projectors(c);
  // G is rebuilt as tr(Q_mu Q_nu) from the stored projectors and inverted in
  // extended precision, so the duals pair exactly with the operators kept.
  const ExtendedMatrix ge = gram_of(q);
  RealMatrix g = ge.cast<double>();
  const ExtendedMatrix ge_inv = Eigen::PartialPivLU<ExtendedMatrix>(ge).inverse();
  RealMatrix g_inv = ge_inv.cast<double>();
  std::vector<Operator> duals;
  switch (method) {
    case DualMethod::gram_solve: duals = duals_by_gram(s, q, ge_inv); break;
    case DualMethod::factorized: duals = duals_by_factorization(c); break;
    case DualMethod::vandermonde: duals = duals_by_vandermonde(c); break;
  }
  return KernelPair(c, std::move(q), std::move(duals), std::move(g), std::move(g_inv), rep.gram_condition, method);
}

namespace {

void check_binding(const Symbol& sym, const KernelPair& kp, const char* what) {
  if (!(sym.s == kp.spin())) throw std::invalid_argument(std::string(what) + ": spin of symbol and kernel differ");
  if (static_cast<std::size_t>(sym.values.size()) != kp.size())
    throw std::invalid_argument(std::string(what) + ": symbol length does not match the constellation");
  if (sym.kernel_id != 0 && sym.kernel_id != kp.id())
    throw std::invalid_argument(std::string(what) + ": symbol belongs to a different constellation");
}

}  // namespace

Symbol discrete_symbol(const Operator& a, const KernelPair& kp, SymbolVariant variant) {
  if (!(a.spin() == kp.spin())) throw std::invalid_argument("discrete_symbol: dimension mismatch");
  const auto& ops = variant == SymbolVariant::lower ? kp.q_ops() : kp.dual_ops();
  Symbol out{kp.spin(), Eigen::VectorXcd(static_cast<Eigen::Index>(ops.size())), variant, kp.id()};
  for (std::size_t nu = 0; nu < ops.size(); ++nu) out.values(static_cast<Eigen::Index>(nu)) = trace_product(a, ops[nu]);
  return out;
}

Symbol to_upper(const Symbol& lower, const KernelPair& kp) {
  check_binding(lower, kp, "to_upper");
  if (lower.variant != SymbolVariant::lower) throw std::invalid_argument("to_upper: symbol is not a lower symbol");
  const double d = kp.spin().dim();
  return {kp.spin(), d * (kp.gram_inv().cast<cplx>() * lower.values), SymbolVariant::upper, kp.id()};
}

Symbol to_lower(const Symbol& upper, const KernelPair& kp) {
  check_binding(upper, kp, "to_lower");
  if (upper.variant != SymbolVariant::upper) throw std::invalid_argument("to_lower: symbol is not an upper symbol");
  const double d = kp.spin().dim();
  return {kp.spin(), (kp.gram().cast<cplx>() * upper.values) / d, SymbolVariant::lower, kp.id()};
}

Operator expand(const Symbol& sym, const KernelPair& kp) {
  check_binding(sym, kp, "expand");
  const auto& ops = sym.variant == SymbolVariant::lower ? kp.dual_ops() : kp.q_ops();
  ComplexMatrix m = ComplexMatrix::Zero(kp.spin().dim(), kp.spin().dim());
  for (std::size_t nu = 0; nu < ops.size(); ++nu) m += sym.values(static_cast<Eigen::Index>(nu)) * ops[nu].matrix();
  return Operator(kp.spin(), m / static_cast<double>(kp.spin().dim()));
}

StarKernel::StarKernel(const KernelPair& kp, int threads) : s_(kp.spin()), n_(kp.size()), id_(kp.id()), l_(n_ * n_ * n_) {
  const auto& duals = kp.dual_ops();
  parallel_for(n_, threads, [&](std::size_t lam) {
    // tr[Q^mu Q^nu Q_lambda] = (<lambda| Q^mu)(Q^nu |lambda>)
    const Eigen::VectorXcd psi = coherent_state(s_, kp.constellation()[lam]);
    std::vector<Eigen::RowVectorXcd> left(n_);
    std::vector<Eigen::VectorXcd> right(n_);
    for (std::size_t mu = 0; mu < n_; ++mu) {
      left[mu] = psi.adjoint() * duals[mu].matrix();
      right[mu] = duals[mu].matrix() * psi;
    }
    for (std::size_t mu = 0; mu < n_; ++mu)
      for (std::size_t nu = 0; nu < n_; ++nu) l_[(lam * n_ + mu) * n_ + nu] = (left[mu] * right[nu])(0, 0);
  });
}

cplx StarKernel::operator()(std::size_t mu, std::size_t nu, std::size_t lambda) const {
  if (mu >= n_ || nu >= n_ || lambda >= n_) throw std::out_of_range("StarKernel: index out of range");
  return l_[(lambda * n_ + mu) * n_ + nu];
}

Symbol StarKernel::apply(const Symbol& a, const Symbol& b) const {
  for (const Symbol* sym : {&a, &b}) {
    if (!(sym->s == s_) || static_cast<std::size_t>(sym->values.size()) != n_)
      throw std::invalid_argument("star_product: symbol does not match the kernel");
    if (sym->variant != SymbolVariant::lower) throw std::invalid_argument("star_product: operands must be lower symbols");
    if (sym->kernel_id != 0 && sym->kernel_id != id_)
      throw std::invalid_argument("star_product: symbol belongs to a different constellation");
  }
  const double d = s_.dim();
  Symbol out{s_, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_)), SymbolVariant::lower, id_};
  for (std::size_t lam = 0; lam < n_; ++lam) {
    cplx acc = 0.0;
    for (std::size_t mu = 0; mu < n_; ++mu) {
      cplx inner = 0.0;
      for (std::size_t nu = 0; nu < n_; ++nu) inner += l_[(lam * n_ + mu) * n_ + nu] * b.values(static_cast<Eigen::Index>(nu));
      acc += a.values(static_cast<Eigen::Index>(mu)) * inner;
    }
    out.values(static_cast<Eigen::Index>(lam)) = acc / (d * d);
  }
  return out;
}

Symbol star_product(const Symbol& a, const Symbol& b, const KernelPair& kp, int threads) {
  check_binding(a, kp, "star_product");
  check_binding(b, kp, "star_product");
  return StarKernel(kp, threads).apply(a, b);
}

TripleKernel coherent_triple_kernel(SpinJ s, const Direction& a, const Direction& b, const Direction& c) {
  const Eigen::VectorXcd pa = coherent_state(s, a);
  const Eigen::VectorXcd pb = coherent_state(s, b);
  const Eigen::VectorXcd pc = coherent_state(s, c);
  TripleKernel t;
  t.overlap = pa.dot(pb) * pb.dot(pc) * pc.dot(pa);
  const cplx g(1.0 + a.dot(b) + b.dot(c) + c.dot(a), a.vec().dot(b.vec().cross(c.vec())));
  t.closed_form = 1.0;
  for (int k = 0; k < s.two_s(); ++k) t.closed_form *= 0.25 * g;
  auto g0 = [&](const Direction& u, const Direction& v) {
    return std::pow(std::max(0.0, 0.5 * (1.0 + u.dot(v))), s.value());
  };
  t.modulus = g0(a, b) * g0(b, c) * g0(c, a);
  t.phase_defined = std::abs(g) > 1e-12;
  t.area = t.phase_defined ? 2.0 * std::arg(g) : 0.0;
  return t;
}

TripleKernel coherent_triple_kernel(const Constellation& c, std::size_t mu, std::size_t nu, std::size_t lambda) {
  return coherent_triple_kernel(c.spin(), c[mu], c[nu], c[lambda]);
}

cplx off_constellation_eval(const Symbol& upper, const Constellation& c, const Direction& n0) {
  if (upper.variant != SymbolVariant::upper) throw std::invalid_argument("off_constellation_eval: need an upper symbol");
  if (!(upper.s == c.spin()) || static_cast<std::size_t>(upper.values.size()) != c.size())
    throw std::invalid_argument("off_constellation_eval: symbol does not match the constellation");
  if (upper.kernel_id != 0 && upper.kernel_id != c.fingerprint())
    throw std::invalid_argument("off_constellation_eval: symbol belongs to a different constellation");
  cplx acc = 0.0;
  for (std::size_t nu = 0; nu < c.size(); ++nu)
    acc += upper.values(static_cast<Eigen::Index>(nu)) *
           std::pow(std::max(0.0, 0.5 * (1.0 + n0.dot(c[nu]))), c.spin().two_s());
  return acc / static_cast<double>(c.spin().dim());
}

}  // namespace moyal
