#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "sns/field.hpp"
#include "sns/grid.hpp"
#include "sns/rng.hpp"
#include "sns/transform.hpp"

using namespace sns;

namespace {

// Reference normalized Legendre via the unnormalized three-term recurrence and
// lgamma-based normalization; independent of the production algorithm.
double plm_reference(int l, int m, double mu) {
  // r_l = P_l^m / [(-1)^m (2m-1)!! (1-mu^2)^{m/2}]
  double rm = 1.0, rm1 = 0.0;
  for (int k = m; k < l; ++k) {
    const double r = ((2.0 * k + 1.0) * mu * rm - (k + m) * rm1) / (k - m + 1.0);
    rm1 = rm;
    rm  = r;
  }
  double logbase = 0.0;
  for (int k = 1; k <= m; ++k) logbase += std::log(2.0 * k - 1.0);
  logbase += 0.5 * m * std::log(1.0 - mu * mu);
  const double lognorm = 0.5 * (std::log(2.0 * l + 1.0) - std::log(4.0 * kPi) +
                                std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0));
  const double sign = (m % 2 ? -1.0 : 1.0) * (rm < 0 ? -1.0 : 1.0);
  return sign * std::exp(std::log(std::abs(rm) + 1e-300) + logbase + lognorm);
}

}  // namespace

TEST_CASE("gauss-legendre nodes and weights") {
  auto g1 = gauss_legendre(1);
  CHECK(g1.mu_nodes[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g1.weights[0] == doctest::Approx(2.0).epsilon(1e-14));

  auto g2 = gauss_legendre(2);
  CHECK(g2.mu_nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(g2.mu_nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(g2.weights[0] == doctest::Approx(1.0).epsilon(1e-14));

  // degree-8 monomial integrates exactly with n = 5
  auto   g5 = gauss_legendre(5);
  double s  = 0.0;
  for (int i = 0; i < 5; ++i) s += g5.weights[i] * std::pow(g5.mu_nodes[i], 8);
  CHECK(s == doctest::Approx(2.0 / 9.0).epsilon(1e-14));

  // exactness on Legendre products up to degree 2n-1
  const int n = 24;
  auto      g = gauss_legendre(n);
  CHECK(g.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(g.weights.minCoeff() > 0.0);
  for (int i = 1; i < n; ++i) CHECK(g.mu_nodes[i] > g.mu_nodes[i - 1]);
  for (int j = 0; j <= 6; ++j)
    for (int k = 0; k <= 6; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        double pj, dpj, pk, dpk;
        // evaluate P_j, P_k by recurrence
        pj = 1.0;
        double prev = 0.0;
        for (int q = 1; q <= j; ++q) {
          const double nxt = ((2.0 * q - 1.0) * g.mu_nodes[i] * pj - (q - 1.0) * prev) / q;
          prev = pj;
          pj   = nxt;
        }
        pk   = 1.0;
        prev = 0.0;
        for (int q = 1; q <= k; ++q) {
          const double nxt = ((2.0 * q - 1.0) * g.mu_nodes[i] * pk - (q - 1.0) * prev) / q;
          prev = pk;
          pk   = nxt;
        }
        (void)dpj;
        (void)dpk;
        acc += g.weights[i] * pj * pk;
      }
      const double expect = (j == k) ? 2.0 / (2.0 * j + 1.0) : 0.0;
      CHECK(acc == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("normalized legendre values") {
  CHECK(normalized_plm(0, 0, 0.37) == doctest::Approx(0.2820947917738781).epsilon(1e-12));
  CHECK(normalized_plm(1, 0, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(normalized_plm(2, 0, 1.0) ==
        doctest::Approx(std::sqrt(5.0 / (4.0 * kPi))).epsilon(1e-12));

  // against the independent reference over a spread of (l, m, mu)
  for (int l : {1, 3, 7, 20, 31})
    for (int m = 0; m <= l; m += std::max(1, l / 3))
      for (double mu : {-0.9, -0.3, 0.11, 0.77}) {
        CHECK(normalized_plm(l, m, mu) ==
              doctest::Approx(plm_reference(l, m, mu)).epsilon(1e-10));
      }

  CHECK_THROWS(legendre_table(600, VectorXd::Zero(1)));
}

TEST_CASE("scalar transform: pinned coefficients and symmetry") {
  TruncationSpec         spec(8);
  const SphereTransform& tr = transform_for(spec);

  // zero field
  VectorXcd zero = tr.analyze(ArrayXXd::Zero(tr.n_theta(), tr.n_phi()));
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(tr.analyze(ArrayXXd::Zero(tr.n_theta() + 1, tr.n_phi())));

  // field = Re Y_{3,2}
  ArrayXXd f(tr.n_theta(), tr.n_phi());
  for (int i = 0; i < tr.n_theta(); ++i)
    for (int j = 0; j < tr.n_phi(); ++j) {
      const double th = std::acos(tr.mu()[i]);
      f(i, j)         = scalar_harmonic(3, 2, th, tr.phi()[j]).real();
    }
  VectorXcd c = tr.analyze(f);
  for (int l = 0; l <= 8; ++l)
    for (int m = -l; m <= l; ++m) {
      const Complex expect = (l == 3 && std::abs(m) == 2) ? Complex(0.5, 0.0) : Complex(0.0);
      CHECK(std::abs(c[mode_index(l, m)] - expect) < 1e-12);
    }
}

TEST_CASE("quadrature orthonormality of Y up to L") {
  const int              L = 8;
  TruncationSpec         spec(L);
  const SphereTransform& tr = transform_for(spec);
  // analyze(Y_{l,m}) must give the unit coefficient vector
  for (int l = 0; l <= L; ++l)
    for (int m = 0; m <= l; ++m) {
      ArrayXXcd y(tr.n_theta(), tr.n_phi());
      VectorXcd cy = VectorXcd::Zero(coeff_count(L));
      cy[mode_index(l, m)] = 1.0;
      if (m > 0) cy[mode_index(l, -m)] = (m % 2 ? -1.0 : 1.0);  // makes 2 Re Y
      ArrayXXd  field = tr.synthesize(cy);
      VectorXcd back  = tr.analyze(field);
      CHECK((back - cy).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("round trip on random band-limited fields, L = 31") {
  const int              L = 31;
  TruncationSpec         spec(L);
  const SphereTransform& tr = transform_for(spec);
  SpectralField          f  = random_field(spec, 1234u, 1.0, 1.0);
  ArrayXXd               g  = tr.synthesize(f.psi_hat);
  VectorXcd              c  = tr.analyze(g);
  CHECK((c - f.psi_hat).cwiseAbs().maxCoeff() < 1e-10);

  // slow oracle: independent Legendre + doubled n_theta quadrature
  const int nt2 = 2 * tr.n_theta();
  auto      q   = gauss_legendre(nt2, tr.n_phi());
  // synthesize on the doubled grid by direct summation with reference plm
  ArrayXXd g2 = ArrayXXd::Zero(nt2, tr.n_phi());
  for (int l = 1; l <= L; ++l)
    for (int m = 0; m <= l; ++m) {
      const Complex cc = f.psi_hat[mode_index(l, m)];
      if (std::abs(cc) == 0.0) continue;
      for (int i = 0; i < nt2; ++i) {
        const double p = plm_reference(l, m, q.mu_nodes[i]);
        for (int j = 0; j < tr.n_phi(); ++j) {
          const Complex y = p * std::polar(1.0, m * q.phi_nodes[j]);
          g2(i, j) += (m == 0) ? (cc * y).real() : 2.0 * (cc * y).real();
        }
      }
    }
  // naive quadrature analysis of a sample of modes
  const double dphi = 2.0 * kPi / tr.n_phi();
  for (int l : {1, 2, 5, 13, 24, 31}) {
    for (int m : {0, 1, l / 2, l}) {
      Complex acc = 0.0;
      for (int i = 0; i < nt2; ++i) {
        const double p = plm_reference(l, m, q.mu_nodes[i]);
        for (int j = 0; j < tr.n_phi(); ++j)
          acc += q.weights[i] * dphi * g2(i, j) * p * std::polar(1.0, -m * q.phi_nodes[j]);
      }
      CHECK(std::abs(acc - f.psi_hat[mode_index(l, m)]) < 1e-10);
    }
  }
}

TEST_CASE("vector basis: normalization, orthogonality, addition theorem") {
  CHECK_THROWS(vector_basis_eval(0, 0, 1.0, 0.0));

  const int              L = 6;
  TruncationSpec         spec(L);
  const SphereTransform& tr   = transform_for(spec);
  const double           dphi = 2.0 * kPi / tr.n_phi();

  auto dot_quad = [&](int l1, int m1, int l2, int m2) {
    Complex acc = 0.0;
    for (int i = 0; i < tr.n_theta(); ++i) {
      const double th = std::acos(tr.mu()[i]);
      for (int j = 0; j < tr.n_phi(); ++j) {
        auto a = vector_basis_eval(l1, m1, th, tr.phi()[j]);
        auto b = vector_basis_eval(l2, m2, th, tr.phi()[j]);
        acc += tr.weights()[i] * dphi *
               (a.first * std::conj(b.first) + a.second * std::conj(b.second));
      }
    }
    return acc;
  };

  CHECK(std::abs(dot_quad(1, 0, 1, 0) - 1.0) < 1e-10);
  CHECK(std::abs(dot_quad(1, 0, 2, 1)) < 1e-10);
  CHECK(std::abs(dot_quad(3, 2, 3, 2) - 1.0) < 1e-10);
  CHECK(std::abs(dot_quad(3, 2, 3, 1)) < 1e-10);

  // addition theorem at random points: sum_m |Z_{l,m}|^2 = (2l+1)/(4pi)
  for (int l = 1; l <= 10; ++l) {
    for (int k = 0; k < 20; ++k) {
      const double mu = 2.0 * uniform01(counter_hash(99, 7, k, l)) - 1.0;
      const double ph = 2.0 * kPi * uniform01(counter_hash(99, 8, k, l));
      const double th = std::acos(mu);
      double       s  = 0.0;
      for (int m = -l; m <= l; ++m) {
        auto z = vector_basis_eval(l, m, th, ph);
        s += std::norm(z.first) + std::norm(z.second);
      }
      CHECK(s == doctest::Approx((2.0 * l + 1.0) / (4.0 * kPi)).epsilon(1e-10));
    }
  }
  // pointwise at every grid node for every l <= L
  for (int l = 1; l <= L; ++l)
    for (int i = 0; i < tr.n_theta(); ++i) {
      const double th = std::acos(tr.mu()[i]);
      double       s  = 0.0;
      for (int m = -l; m <= l; ++m) {
        auto z = vector_basis_eval(l, m, th, tr.phi()[3]);
        s += std::norm(z.first) + std::norm(z.second);
      }
      CHECK(std::abs(s - (2.0 * l + 1.0) / (4.0 * kPi)) < 1e-10);
    }

  // l = 2 pinned value 5/(4 pi)
  auto   z  = vector_basis_eval(2, 0, 1.1, 0.3);
  double s2 = std::norm(z.first) + std::norm(z.second);
  for (int m = -2; m <= 2; ++m) {
    if (m == 0) continue;
    auto zz = vector_basis_eval(2, m, 1.1, 0.3);
    s2 += std::norm(zz.first) + std::norm(zz.second);
  }
  CHECK(s2 == doctest::Approx(0.3978873577297384).epsilon(1e-12));
}

TEST_CASE("truncation spec invariants") {
  CHECK_THROWS(TruncationSpec(0));
  CHECK_THROWS(TruncationSpec(513));
  TruncationSpec s(10);
  CHECK(s.n_theta >= 16);
  CHECK(s.n_phi >= 31);
  CHECK_THROWS(TruncationSpec(10, 8, 0));
  // total surface weight is 4 pi
  const SphereTransform& tr = transform_for(s);
  CHECK(tr.integrate(ArrayXXd::Ones(tr.n_theta(), tr.n_phi())) ==
        doctest::Approx(4.0 * kPi).epsilon(1e-14));
}
