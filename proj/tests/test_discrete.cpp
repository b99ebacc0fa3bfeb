#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include <moyal/continuous.hpp>
#include <moyal/discrete.hpp>
#include <moyal/spinhalf.hpp>

using namespace moyal;
using doctest::Approx;

namespace {

double max_dual_diff(const KernelPair& a, const KernelPair& b) {
  double out = 0.0;
  for (std::size_t nu = 0; nu < a.size(); ++nu) out = std::max(out, a.dual_ops()[nu].max_abs_diff(b.dual_ops()[nu]));
  return out;
}

// Signed spherical excess from the vertex angles.
double spherical_excess(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  auto angle_at = [](const Eigen::Vector3d& p, const Eigen::Vector3d& q, const Eigen::Vector3d& r) {
    const Eigen::Vector3d t1 = (q - p.dot(q) * p).normalized();
    const Eigen::Vector3d t2 = (r - p.dot(r) * p).normalized();
    return std::acos(std::clamp(t1.dot(t2), -1.0, 1.0));
  };
  const double excess = angle_at(a, b, c) + angle_at(b, c, a) + angle_at(c, a, b) - M_PI;
  return a.dot(b.cross(c)) >= 0.0 ? excess : -excess;
}

}  // namespace

TEST_CASE("coherent projectors") {
  std::uint64_t seed = 1;
  for (int two_s = 1; two_s <= 4; ++two_s) {
    const Constellation c = test::random_allowed(SpinJ(two_s), seed);
    const auto q = q_projectors(c);
    for (std::size_t nu = 0; nu < q.size(); ++nu) {
      CHECK(std::abs(q[nu].trace() - 1.0) < 1e-12);
      CHECK((q[nu] * q[nu]).max_abs_diff(q[nu]) < 1e-12);
      for (int a = 0; a < two_s + 1; ++a)
        for (int b = 0; b < two_s + 1; ++b)
          CHECK(std::abs(q[nu](a, b) - coherent_amplitude(c.spin(), two_s - 2 * a, c[nu]) *
                                           std::conj(coherent_amplitude(c.spin(), two_s - 2 * b, c[nu]))) < 1e-14);
    }
  }
  const Constellation t = test::regular_tetrahedron();
  const auto q = q_projectors(t);
  for (std::size_t nu = 0; nu < 4; ++nu)
    CHECK(q[nu].max_abs_diff(0.5 * (Operator::identity(SpinJ(1)) + spinhalf::sigma_dot(t[nu].vec()))) < 1e-14);
}

TEST_CASE("Gram matrix") {
  const RealMatrix g = gram(test::regular_tetrahedron());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(g(i, j) == Approx(i == j ? 1.0 : 1.0 / 3.0));
  const Constellation anti(SpinJ(1), {Direction(0, 0, 1), Direction(0, 0, -1), Direction(1, 0, 0), Direction(0, 1, 0)});
  CHECK(gram(anti)(0, 1) == 0.0);
  std::uint64_t seed = 5;
  const Constellation c = test::random_allowed(SpinJ(3), seed);
  const RealMatrix gc = gram(c);
  CHECK((gc - gc.transpose()).norm() == 0.0);
  const auto q = q_projectors(c);
  CHECK(gc(2, 7) == Approx(trace_product(q[2], q[7]).real()).epsilon(1e-13));
}

TEST_CASE("dual kernel of the regular tetrahedron") {
  const Constellation t = test::regular_tetrahedron();
  const KernelPair kp = dual_kernel(t);
  const RealMatrix expected = 1.5 * RealMatrix::Identity(4, 4) - 0.25 * RealMatrix::Ones(4, 4);
  CHECK((kp.gram_inv() - expected).cwiseAbs().maxCoeff() < 1e-12);
  for (std::size_t nu = 0; nu < 4; ++nu) {
    const Operator ref = 0.5 * (Operator::identity(SpinJ(1)) + spinhalf::sigma_dot(3.0 * t[nu].vec()));
    CHECK(kp.dual_ops()[nu].max_abs_diff(ref) < 1e-12);
  }
  CHECK(kp.method() == DualMethod::gram_solve);
  CHECK(kp.id() == t.fingerprint());
}

TEST_CASE("dual kernel invariants for random constellations") {
  std::mt19937_64 rng(30);
  std::uint64_t seed = 40;
  for (int two_s = 1; two_s <= 4; ++two_s) {
    const SpinJ s(two_s);
    for (int trial = 0; trial < 4; ++trial) {
      const Constellation c = test::random_allowed(s, seed);
      const KernelPair kp = dual_kernel(c);
      const double tol = 1e-9 * std::max(1.0, kp.condition());
      const std::size_t n = kp.size();
      ComplexMatrix sum = ComplexMatrix::Zero(s.dim(), s.dim());
      for (std::size_t nu = 0; nu < n; ++nu) {
        sum += kp.dual_ops()[nu].matrix();
        CHECK(kp.q_ops()[nu].is_hermitian(1e-12));
        CHECK(kp.dual_ops()[nu].is_hermitian(1e-12 * std::max(1.0, kp.condition())));
        for (std::size_t mu = 0; mu < n; ++mu) {
          const cplx pair = trace_product(kp.q_ops()[nu], kp.dual_ops()[mu]) / static_cast<double>(s.dim());
          CHECK(std::abs(pair - (nu == mu ? 1.0 : 0.0)) < tol);
          const cplx metric = trace_product(kp.dual_ops()[nu], kp.dual_ops()[mu]) / static_cast<double>(s.n_points());
          CHECK(std::abs(metric - kp.gram_inv()(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(mu))) <
                tol * std::max(1.0, std::abs(metric)));
        }
      }
      CHECK(test::max_abs(sum / static_cast<double>(s.dim()) - ComplexMatrix::Identity(s.dim(), s.dim())) < 1e-9);

      // covariance at the constellation level
      const EulerAngles g = test::random_rotation(rng);
      const KernelPair turned = dual_kernel(rotate(c, g));
      const ComplexMatrix u = rotation_operator(s, g).matrix();
      for (std::size_t nu = 0; nu < n; ++nu)
        CHECK(test::max_abs(turned.dual_ops()[nu].matrix() - u * kp.dual_ops()[nu].matrix() * u.adjoint()) < tol);
    }
  }
}

TEST_CASE("forbidden constellations are rejected with a condition report") {
  const Constellation equator(SpinJ(1), {Direction(1, 0, 0), Direction(0, 1, 0), Direction(-1, 0, 0), Direction(0, -1, 0)});
  try {
    dual_kernel(equator);
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& e) {
    CHECK(e.condition() > singular_condition_threshold());
  }
  CHECK_THROWS_AS(dual_kernel(test::regular_tetrahedron(), DualMethod::vandermonde), std::invalid_argument);
  CHECK(parse_dual_method("factorized") == DualMethod::factorized);
  CHECK_THROWS_AS(parse_dual_method("lu"), std::invalid_argument);
}

TEST_CASE("Q matrix factorization") {
  std::uint64_t seed = 60;
  for (int two_s = 1; two_s <= 3; ++two_s) {
    const SpinJ s(two_s);
    const int d = s.dim();
    const Constellation c = test::random_allowed(s, seed);
    const QFactorization f = q_matrix_factorization(c);
    const ComplexMatrix q = f.d1.cast<cplx>().asDiagonal() * f.n * f.d2.cast<cplx>().asDiagonal();
    const auto ops = q_projectors(c);
    for (std::size_t nu = 0; nu < c.size(); ++nu)
      for (int a = 0; a < d; ++a)
        for (int ap = 0; ap < d; ++ap)
          CHECK(std::abs(q(static_cast<Eigen::Index>(nu), a * d + ap) - ops[nu](a, ap)) < 1e-12);
  }
  const QFactorization half = q_matrix_factorization(test::regular_tetrahedron());
  CHECK(half.d2(0) == 1.0);
  CHECK(half.d2(1) == 1.0);
  CHECK(half.d2(2) == 1.0);
  CHECK(half.d2(3) == 1.0);
  const QFactorization s1 = q_matrix_factorization(random_constellation(SpinJ(2), 3));
  CHECK(s1.d2(1) == Approx(std::sqrt(2.0)));
  CHECK(s1.d2(4) == Approx(2.0));
  const Constellation eq = spiral(SpinJ(2), std::polar(0.7, 0.4));
  CHECK(q_matrix_factorization(eq).d1(0) == Approx(0.25));
  const Constellation south(SpinJ(1), {Direction(0, 0, -1), Direction(1, 0, 0), Direction(0, 1, 0), Direction(0, 0, 1)});
  CHECK_THROWS_AS(q_matrix_factorization(south), DegenerateConstellationError);
}

TEST_CASE("factorized dual agrees with the Gram solve") {
  std::uint64_t seed = 70;
  for (int two_s = 1; two_s <= 3; ++two_s) {
    const SpinJ s(two_s);
    for (int trial = 0; trial < 5; ++trial) {
      const Constellation c = test::random_allowed(s, seed);
      const KernelPair a = dual_kernel(c), b = dual_kernel(c, DualMethod::factorized);
      CHECK(max_dual_diff(a, b) < 1e-9 * std::max(1.0, a.condition()));
      CHECK(b.method() == DualMethod::factorized);
      for (std::size_t nu = 0; nu < c.size(); ++nu)
        for (std::size_t mu = 0; mu < c.size(); ++mu)
          CHECK(std::abs(trace_product(b.q_ops()[nu], b.dual_ops()[mu]) - (nu == mu ? double(s.dim()) : 0.0)) <
                1e-9 * std::max(1.0, a.condition()));
    }
  }
  // a point exactly at the south pole forces the rotated chart
  const Constellation south(SpinJ(1), {Direction(0, 0, -1), Direction(1, 0, 0), Direction(0, 1, 0),
                                       Direction::from_angles(0.4, 2.0)});
  CHECK(max_dual_diff(dual_kernel(south), dual_kernel(south, DualMethod::factorized)) < 1e-10);
}

TEST_CASE("Vandermonde inverse") {
  const ComplexMatrix inv = vandermonde_inverse({1.0, 2.0});
  CHECK(std::abs(inv(0, 0) - 2.0) < 1e-15);
  CHECK(std::abs(inv(0, 1) + 1.0) < 1e-15);
  CHECK(std::abs(inv(1, 0) + 1.0) < 1e-15);
  CHECK(std::abs(inv(1, 1) - 1.0) < 1e-15);

  const cplx x1(0.3, 1.0), x2(-2.0, 0.5), x3(1.5, -0.7);
  const auto e = elementary_symmetric({x1, x2, x3});
  CHECK(std::abs(e[2] - (x1 * x2 + x1 * x3 + x2 * x3)) < 1e-14);
  CHECK(std::abs(e[3] - x1 * x2 * x3) < 1e-14);
  CHECK(std::abs(e[1] - (x1 + x2 + x3)) < 1e-14);

  std::mt19937_64 rng(80);
  std::normal_distribution<double> g;
  std::vector<cplx> nodes;
  for (int i = 0; i < 6; ++i) nodes.emplace_back(g(rng), g(rng));
  ComplexMatrix v(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) v(i, j) = std::pow(nodes[static_cast<std::size_t>(i)], j);
  const ComplexMatrix vi = vandermonde_inverse(nodes);
  CHECK(test::max_abs(v * vi - ComplexMatrix::Identity(6, 6)) < 1e-10);
  CHECK(test::max_abs(vi - Eigen::PartialPivLU<ComplexMatrix>(v).inverse()) < 1e-10 * test::max_abs(vi));
  CHECK_THROWS_AS(vandermonde_inverse({1.0, 2.0, 1.0}), std::domain_error);
}

TEST_CASE("spiral constellations: Vandermonde structure and closed-form dual") {
  for (int two_s = 1; two_s <= 3; ++two_s) {
    const SpinJ s(two_s);
    for (double r : {0.5, 0.8, 1.25}) {
      const cplx z0 = std::polar(r, 2 * M_PI / 7);
      const Constellation c = spiral(s, z0);
      const auto detected = detect_spiral(c);
      REQUIRE(detected.has_value());
      CHECK(std::abs(*detected - z0) < 1e-12);
      const auto w = spiral_nodes(s, z0);
      const QFactorization f = q_matrix_factorization(c);
      for (Eigen::Index nu = 0; nu < f.n.rows(); ++nu)
        for (Eigen::Index k = 0; k < f.n.cols(); ++k)
          CHECK(std::abs(f.n(nu, k) - std::pow(w[static_cast<std::size_t>(k)], static_cast<int>(nu))) <
                1e-9 * std::max(1.0, std::abs(f.n(nu, k))));
      // the cross-path comparison needs a numerically invertible Gram matrix
      if (!validate(c).allowed) continue;
      const KernelPair a = dual_kernel(c), b = dual_kernel(c, DualMethod::vandermonde);
      CAPTURE(two_s);
      CAPTURE(r);
      CHECK(max_dual_diff(a, b) < 1e-8);
    }
  }
  std::uint64_t seed = 0;
  CHECK_FALSE(detect_spiral(test::random_allowed(SpinJ(2), seed)).has_value());
}

TEST_CASE("discrete symbols and expansions") {
  const Constellation t = test::regular_tetrahedron();
  const KernelPair kt = dual_kernel(t);
  const SpinJ half(1);
  const Symbol id_low = discrete_symbol(Operator::identity(half), kt, SymbolVariant::lower);
  const Symbol id_up = discrete_symbol(Operator::identity(half), kt, SymbolVariant::upper);
  for (int nu = 0; nu < 4; ++nu) {
    CHECK(std::abs(id_low.values(nu) - 1.0) < 1e-14);
    CHECK(std::abs(id_up.values(nu) - 1.0) < 1e-12);
  }
  const Operator sx = spin_x(half), sy = spin_y(half), sz = spin_z(half);
  const Symbol lx = discrete_symbol(sx, kt, SymbolVariant::lower), lz = discrete_symbol(sz, kt, SymbolVariant::lower);
  for (std::size_t nu = 0; nu < 4; ++nu) {
    CHECK(std::abs(lx.values(static_cast<Eigen::Index>(nu)) - 0.5 * t[nu].x()) < 1e-14);
    CHECK(std::abs(lz.values(static_cast<Eigen::Index>(nu)) - 0.5 * t[nu].z()) < 1e-14);
  }
  (void)sy;

  std::mt19937_64 rng(90);
  std::uint64_t seed = 90;
  for (int two_s = 1; two_s <= 4; ++two_s) {
    const SpinJ s(two_s);
    const KernelPair kp = dual_kernel(test::random_allowed(s, seed));
    const double tol = 1e-9 * std::max(1.0, kp.condition());
    for (int trial = 0; trial < 5; ++trial) {
      const Operator a = test::random_hermitian(s, rng), b = test::random_hermitian(s, rng);
      const Symbol lo = discrete_symbol(a, kp, SymbolVariant::lower);
      const Symbol up = discrete_symbol(a, kp, SymbolVariant::upper);
      for (Eigen::Index nu = 0; nu < lo.values.size(); ++nu)
        CHECK(std::abs(lo.values(nu).imag()) < 1e-13);
      CHECK((to_upper(lo, kp).values - up.values).cwiseAbs().maxCoeff() < tol * std::max(1.0, up.values.cwiseAbs().maxCoeff()));
      CHECK((to_lower(up, kp).values - lo.values).cwiseAbs().maxCoeff() < tol);
      CHECK(expand(lo, kp).max_abs_diff(a) < tol);
      CHECK(expand(up, kp).max_abs_diff(a) < tol);
      const Symbol lb = discrete_symbol(b, kp, SymbolVariant::lower);
      CHECK(std::abs(up.values.cwiseProduct(lb.values).sum() / double(s.dim()) - trace_product(a, b)) < tol * 10.0);
    }
    CHECK(expand(discrete_symbol(Operator::identity(s), kp, SymbolVariant::lower), kp).max_abs_diff(Operator::identity(s)) < 1e-10);
  }
  CHECK_THROWS_AS(discrete_symbol(Operator::identity(SpinJ(2)), kt, SymbolVariant::lower), std::invalid_argument);
  Symbol foreign = id_low;
  foreign.kernel_id = 12345;
  CHECK_THROWS_AS(expand(foreign, kt), std::invalid_argument);
  CHECK_THROWS_AS(to_lower(id_low, kt), std::invalid_argument);
}

TEST_CASE("discrete star product") {
  std::mt19937_64 rng(100);
  std::uint64_t seed = 100;
  for (int two_s = 1; two_s <= 3; ++two_s) {
    const SpinJ s(two_s);
    const KernelPair kp = dual_kernel(test::random_allowed(s, seed));
    const StarKernel star(kp, 1), star4(kp, 4);
    for (std::size_t i = 0; i < kp.size(); ++i) CHECK(star(i, (i + 1) % kp.size(), 0) == star4(i, (i + 1) % kp.size(), 0));
    const double tol = 1e-8 * std::max(1.0, kp.condition());
    for (int trial = 0; trial < 3; ++trial) {
      const Operator a = test::random_hermitian(s, rng), b = test::random_hermitian(s, rng), c = test::random_hermitian(s, rng);
      const Symbol sa = discrete_symbol(a, kp, SymbolVariant::lower);
      const Symbol sb = discrete_symbol(b, kp, SymbolVariant::lower);
      const Symbol sc = discrete_symbol(c, kp, SymbolVariant::lower);
      const Symbol ab = star.apply(sa, sb);
      CHECK((ab.values - discrete_symbol(a * b, kp, SymbolVariant::lower).values).cwiseAbs().maxCoeff() < tol);
      const Symbol left = star.apply(ab, sc), right = star.apply(sa, star.apply(sb, sc));
      CHECK((left.values - right.values).cwiseAbs().maxCoeff() < tol);
      const Symbol unit = discrete_symbol(Operator::identity(s), kp, SymbolVariant::lower);
      CHECK((star.apply(unit, sa).values - sa.values).cwiseAbs().maxCoeff() < tol);
      CHECK((star_product(sa, unit, kp).values - sa.values).cwiseAbs().maxCoeff() < tol);
    }
    CHECK_THROWS_AS(star(kp.size(), 0, 0), std::out_of_range);
    const Symbol up = discrete_symbol(Operator::identity(s), kp, SymbolVariant::upper);
    CHECK_THROWS_AS(star.apply(up, up), std::invalid_argument);
  }
}

TEST_CASE("coherent triple kernel") {
  std::mt19937_64 rng(110);
  for (int two_s = 1; two_s <= 5; ++two_s) {
    const SpinJ s(two_s);
    const Direction n = test::random_direction(rng);
    const TripleKernel same = coherent_triple_kernel(s, n, n, n);
    CHECK(std::abs(same.overlap - 1.0) < 1e-12);
    CHECK(std::abs(same.closed_form - 1.0) < 1e-12);
    const Direction anti = Direction::from_vector(-n.vec());
    const TripleKernel zero = coherent_triple_kernel(s, n, anti, test::random_direction(rng));
    CHECK(std::abs(zero.overlap) < 1e-12);
    CHECK(std::abs(zero.closed_form) < 1e-12);
    CHECK_FALSE(zero.phase_defined);
    for (int trial = 0; trial < 20; ++trial) {
      const Direction a = test::random_direction(rng), b = test::random_direction(rng), c = test::random_direction(rng);
      const TripleKernel t = coherent_triple_kernel(s, a, b, c);
      CHECK(std::abs(t.overlap - t.closed_form) < 1e-12);
      CHECK(std::abs(t.overlap) == Approx(t.modulus).epsilon(1e-10));
      REQUIRE(t.phase_defined);
      CHECK(t.area == Approx(spherical_excess(a.vec(), b.vec(), c.vec())).epsilon(1e-9));
      CHECK(std::abs(t.overlap - std::polar(t.modulus, s.value() * t.area)) < 1e-10);
    }
  }
  const Constellation t = test::regular_tetrahedron();
  CHECK(std::abs(coherent_triple_kernel(t, 0, 1, 2).overlap - trace_product(q_projectors(t)[0] * q_projectors(t)[1], q_projectors(t)[2])) < 1e-14);
}

TEST_CASE("off-constellation evaluation") {
  std::mt19937_64 rng(120);
  std::uint64_t seed = 120;
  for (int two_s = 1; two_s <= 3; ++two_s) {
    const SpinJ s(two_s);
    const KernelPair kp = dual_kernel(test::random_allowed(s, seed));
    const Operator a = test::random_hermitian(s, rng);
    const Symbol up = discrete_symbol(a, kp, SymbolVariant::upper);
    const Symbol lo = discrete_symbol(a, kp, SymbolVariant::lower);
    const double tol = 1e-9 * std::max(1.0, kp.condition());
    for (std::size_t mu = 0; mu < kp.size(); mu += 3)
      CHECK(std::abs(off_constellation_eval(up, kp.constellation(), kp.constellation()[mu]) - lo.values(static_cast<Eigen::Index>(mu))) < tol);
    const auto pq = pq_coeffs(s);
    const Symbol idu = discrete_symbol(Operator::identity(s), kp, SymbolVariant::upper);
    for (int trial = 0; trial < 5; ++trial) {
      const Direction n0 = test::random_direction(rng);
      CHECK(std::abs(off_constellation_eval(up, kp.constellation(), n0) - continuous_symbol(a, n0, pq)) < tol);
      CHECK(std::abs(off_constellation_eval(idu, kp.constellation(), n0) - 1.0) < tol);
    }
    CHECK_THROWS_AS(off_constellation_eval(lo, kp.constellation(), Direction()), std::invalid_argument);
  }
}
