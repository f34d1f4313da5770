#include "sns/grid.hpp"

#include <cmath>

namespace sns {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre_poly(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p  = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p  = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

// Recurrence in long double when requested; below L = 128 plain double
// round-trips to 1e-12 already.
template <typename S>
void fill_tables(int L, const VectorXd& mu, std::vector<MatrixXd>& val,
                 std::vector<MatrixXd>& dth) {
  const Index n = mu.size();
  val.assign(L + 1, MatrixXd());
  dth.assign(L + 1, MatrixXd());
  for (int m = 0; m <= L; ++m) {
    val[m].setZero(L + 1 - m, n);
    dth[m].setZero(L + 1 - m, n);
  }
  std::vector<S> pmm(n), pm1(n), pm2(n);
  std::vector<S> s(n), x(n);
  for (Index i = 0; i < n; ++i) {
    x[i] = static_cast<S>(mu[i]);
    s[i] = std::sqrt(S(1) - x[i] * x[i]);
  }
  const S inv_sqrt4pi = S(1) / std::sqrt(S(4) * static_cast<S>(kPi));
  for (Index i = 0; i < n; ++i) pmm[i] = inv_sqrt4pi;

  for (int m = 0; m <= L; ++m) {
    // diagonal value Pbar_{m,m}
    for (Index i = 0; i < n; ++i) val[m](0, i) = static_cast<double>(pmm[i]);
    if (m + 1 <= L) {
      const S a = std::sqrt(S(2 * m + 3));
      for (Index i = 0; i < n; ++i) {
        pm2[i] = pmm[i];
        pm1[i] = a * x[i] * pmm[i];
        val[m](1, i) = static_cast<double>(pm1[i]);
      }
      for (int l = m + 2; l <= L; ++l) {
        const S alpha = std::sqrt(S(4.0 * l * l - 1.0) / S(double(l) * l - double(m) * m));
        const S beta  = std::sqrt(S((2.0 * l + 1.0) * (double(l - 1) * (l - 1) - double(m) * m)) /
                                 S((2.0 * l - 3.0) * (double(l) * l - double(m) * m)));
        for (Index i = 0; i < n; ++i) {
          const S p = alpha * x[i] * pm1[i] - beta * pm2[i];
          pm2[i]    = pm1[i];
          pm1[i]    = p;
          val[m](l - m, i) = static_cast<double>(p);
        }
      }
    }
    // next diagonal
    if (m < L) {
      const S c = -std::sqrt(S(2 * m + 3) / S(2 * m + 2));
      for (Index i = 0; i < n; ++i) pmm[i] = c * s[i] * pmm[i];
    }
  }

  // d/dtheta Pbar_{l,m} = (l mu Pbar_{l,m} - e_{l,m} Pbar_{l-1,m}) / sin(theta)
  for (int m = 0; m <= L; ++m) {
    for (int l = m; l <= L; ++l) {
      const double e = (l > m) ? std::sqrt((double(l) * l - double(m) * m) * (2.0 * l + 1.0) /
                                           (2.0 * l - 1.0))
                               : 0.0;
      for (Index i = 0; i < n; ++i) {
        const double si   = std::sqrt(1.0 - mu[i] * mu[i]);
        const double prev = (l > m) ? val[m](l - 1 - m, i) : 0.0;
        dth[m](l - m, i)  = (l * mu[i] * val[m](l - m, i) - e * prev) / si;
      }
    }
  }
}

}  // namespace

QuadratureGrid gauss_legendre(int n_theta, int n_phi) {
  if (n_theta < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  QuadratureGrid g;
  g.mu_nodes.resize(n_theta);
  g.weights.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    // Tricomi-type initial guess, then Newton.
    double x = std::cos(kPi * (i + 0.75) / (n_theta + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre_poly(n_theta, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_poly(n_theta, x, p, dp);
    x -= p / dp;  // one polishing step
    legendre_poly(n_theta, x, p, dp);
    g.mu_nodes[n_theta - 1 - i] = x;  // increasing in mu
    g.weights[n_theta - 1 - i]  = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n_phi > 0) {
    g.phi_nodes.resize(n_phi);
    for (int j = 0; j < n_phi; ++j) g.phi_nodes[j] = 2.0 * kPi * j / n_phi;
  }
  return g;
}

LegendreTable legendre_table(int L, const VectorXd& mu_nodes) {
  if (L < 0 || L > kMaxDegree)
    throw std::invalid_argument("legendre_table: degree overflow (L > " +
                                std::to_string(kMaxDegree) + ")");
  LegendreTable t;
  t.L = L;
  if (L > 128)
    fill_tables<long double>(L, mu_nodes, t.val, t.dth);
  else
    fill_tables<double>(L, mu_nodes, t.val, t.dth);
  return t;
}

double normalized_plm(int l, int m, double mu) {
  VectorXd one(1);
  one[0] = mu;
  // small l/m only in point evaluation paths; reuse the table builder
  const LegendreTable t = legendre_table(l, one);
  return t.val[m](l - m, 0);
}

double normalized_plm_dtheta(int l, int m, double mu) {
  VectorXd one(1);
  one[0] = mu;
  const LegendreTable t = legendre_table(l, one);
  return t.dth[m](l - m, 0);
}

Complex scalar_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw std::invalid_argument("scalar_harmonic: bad (l,m)");
  const int    ma = std::abs(m);
  const double p  = normalized_plm(l, ma, std::cos(theta));
  Complex      y  = p * std::polar(1.0, ma * phi);
  if (m < 0) {
    y = std::conj(y);
    if (ma % 2 == 1) y = -y;
  }
  return y;
}

std::pair<Complex, Complex> vector_basis_eval(int l, int m, double theta, double phi) {
  if (l < 1) throw std::invalid_argument("vector_basis_eval: l >= 1 required");
  if (std::abs(m) > l) throw std::invalid_argument("vector_basis_eval: |m| <= l required");
  const int    ma  = std::abs(m);
  const double mu  = std::cos(theta);
  const double st  = std::sin(theta);
  const double p   = normalized_plm(l, ma, mu);
  const double dp  = normalized_plm_dtheta(l, ma, mu);
  Complex      y   = p * std::polar(1.0, ma * phi);
  Complex      dy  = dp * std::polar(1.0, ma * phi);
  if (m < 0) {
    y  = std::conj(y);
    dy = std::conj(dy);
    if (ma % 2 == 1) {
      y  = -y;
      dy = -dy;
    }
  }
  // Curl Y = ((im/sin) Y, -dY/dtheta), normalized by lambda^{-1/2}.
  const double  c  = 1.0 / std::sqrt(laplace_eig(l));
  const Complex im = Complex(0.0, double(m));
  return {c * im * y / st, -c * dy};
}

}  // namespace sns
