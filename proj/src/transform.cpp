#include "sns/transform.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace sns {

SphereTransform::SphereTransform(const TruncationSpec& spec)
    : L_(spec.L), n_theta_(spec.n_theta), n_phi_(spec.n_phi) {
  build();
}

SphereTransform::SphereTransform(int L, int n_theta, int n_phi)
    : L_(L), n_theta_(n_theta), n_phi_(n_phi) {
  build();
}

void SphereTransform::build() {
  grid_ = gauss_legendre(n_theta_, n_phi_);
  sin_theta_.resize(n_theta_);
  for (int i = 0; i < n_theta_; ++i)
    sin_theta_[i] = std::sqrt(1.0 - grid_.mu_nodes[i] * grid_.mu_nodes[i]);
  leg_ = legendre_table(L_, grid_.mu_nodes);
  cos_mphi_.resize(n_phi_, L_ + 1);
  sin_mphi_.resize(n_phi_, L_ + 1);
  for (int j = 0; j < n_phi_; ++j)
    for (int m = 0; m <= L_; ++m) {
      cos_mphi_(j, m) = std::cos(m * grid_.phi_nodes[j]);
      sin_mphi_(j, m) = std::sin(m * grid_.phi_nodes[j]);
    }
}

double SphereTransform::integrate(const ArrayXXd& f) const {
  const double dphi = 2.0 * kPi / n_phi_;
  return dphi * (f.matrix().rowwise().sum().dot(grid_.weights));
}

namespace {

int coeff_degree(const VectorXcd& c) {
  const int L = int(std::lround(std::sqrt(double(c.size())))) - 1;
  if (coeff_count(L) != c.size())
    throw std::invalid_argument("coefficient vector has non-triangular size");
  return L;
}

}  // namespace

// f = sum_m fac_m [QR_m cos(m phi) - QI_m sin(m phi)], fac_0 = 1, fac_m = 2.
static ArrayXXd combine_modes(const MatrixXd& QR, const MatrixXd& QI,
                              const MatrixXd& cos_mphi, const MatrixXd& sin_mphi) {
  const Index nm = QR.cols();
  MatrixXd    fr = QR;
  MatrixXd    fi = QI;
  fr.rightCols(nm - 1) *= 2.0;
  fi.rightCols(nm - 1) *= 2.0;
  MatrixXd out = fr * cos_mphi.leftCols(nm).transpose();
  out.noalias() -= fi * sin_mphi.leftCols(nm).transpose();
  return out.array();
}

ArrayXXd SphereTransform::synthesize(const VectorXcd& coeffs) const {
  const int Lc = coeff_degree(coeffs);
  if (Lc > L_) throw std::invalid_argument("synthesize: coefficients exceed table degree");
  MatrixXd QR = MatrixXd::Zero(n_theta_, Lc + 1);
  MatrixXd QI = MatrixXd::Zero(n_theta_, Lc + 1);
  for (int m = 0; m <= Lc; ++m) {
    VectorXd cr(Lc + 1 - m), ci(Lc + 1 - m);
    for (int l = m; l <= Lc; ++l) {
      cr[l - m] = coeffs[mode_index(l, m)].real();
      ci[l - m] = coeffs[mode_index(l, m)].imag();
    }
    const auto P = leg_.val[m].topRows(Lc + 1 - m);
    QR.col(m)    = P.transpose() * cr;
    QI.col(m)    = P.transpose() * ci;
  }
  return combine_modes(QR, QI, cos_mphi_, sin_mphi_);
}

VectorXcd SphereTransform::analyze(const ArrayXXd& f, int Lout) const {
  if (Lout < 0) Lout = L_;
  if (f.rows() != n_theta_ || f.cols() != n_phi_)
    throw std::invalid_argument("analyze: grid dimension mismatch");
  const double dphi = 2.0 * kPi / n_phi_;
  MatrixXd     HR   = f.matrix() * cos_mphi_.leftCols(Lout + 1) * dphi;
  MatrixXd     HI   = -(f.matrix() * sin_mphi_.leftCols(Lout + 1)) * dphi;
  VectorXcd    c    = VectorXcd::Zero(coeff_count(Lout));
  for (int m = 0; m <= Lout; ++m) {
    const VectorXd tr = grid_.weights.cwiseProduct(HR.col(m));
    const VectorXd ti = grid_.weights.cwiseProduct(HI.col(m));
    const auto     P  = leg_.val[m].topRows(Lout + 1 - m);
    const VectorXd ar = P * tr;
    const VectorXd ai = P * ti;
    for (int l = m; l <= Lout; ++l) {
      const Complex v(ar[l - m], ai[l - m]);
      c[mode_index(l, m)] = v;
      if (m > 0) c[mode_index(l, -m)] = (m % 2 ? -std::conj(v) : std::conj(v));
    }
  }
  return c;
}

void SphereTransform::synth_grad(const VectorXcd& coeffs, ArrayXXd& A, ArrayXXd& B) const {
  const int Lc = coeff_degree(coeffs);
  if (Lc > L_) throw std::invalid_argument("synth_grad: coefficients exceed table degree");
  MatrixXd AR = MatrixXd::Zero(n_theta_, Lc + 1);
  MatrixXd AI = MatrixXd::Zero(n_theta_, Lc + 1);
  MatrixXd BR = MatrixXd::Zero(n_theta_, Lc + 1);
  MatrixXd BI = MatrixXd::Zero(n_theta_, Lc + 1);
  for (int m = 0; m <= Lc; ++m) {
    VectorXd cr(Lc + 1 - m), ci(Lc + 1 - m);
    for (int l = m; l <= Lc; ++l) {
      cr[l - m] = coeffs[mode_index(l, m)].real();
      ci[l - m] = coeffs[mode_index(l, m)].imag();
    }
    const auto P  = leg_.val[m].topRows(Lc + 1 - m);
    const auto dP = leg_.dth[m].topRows(Lc + 1 - m);
    AR.col(m)     = dP.transpose() * cr;
    AI.col(m)     = dP.transpose() * ci;
    // (1/sin) d/dphi contributes i m g_m / sin
    const VectorXd gr = P.transpose() * cr;
    const VectorXd gi = P.transpose() * ci;
    BR.col(m)         = (-double(m)) * gi.cwiseQuotient(sin_theta_);
    BI.col(m)         = (double(m)) * gr.cwiseQuotient(sin_theta_);
  }
  A = combine_modes(AR, AI, cos_mphi_, sin_mphi_);
  B = combine_modes(BR, BI, cos_mphi_, sin_mphi_);
}

VectorXcd SphereTransform::project_tangent(const ArrayXXd& F_theta, const ArrayXXd& F_phi,
                                           int Lout) const {
  if (Lout < 0) Lout = L_;
  const double dphi = 2.0 * kPi / n_phi_;
  MatrixXd     TR   = F_theta.matrix() * cos_mphi_.leftCols(Lout + 1) * dphi;
  MatrixXd     TI   = -(F_theta.matrix() * sin_mphi_.leftCols(Lout + 1)) * dphi;
  MatrixXd     PR   = F_phi.matrix() * cos_mphi_.leftCols(Lout + 1) * dphi;
  MatrixXd     PI   = -(F_phi.matrix() * sin_mphi_.leftCols(Lout + 1)) * dphi;
  const VectorXd wsin = grid_.weights.cwiseQuotient(sin_theta_);
  VectorXcd    c    = VectorXcd::Zero(coeff_count(Lout));
  for (int m = 0; m <= Lout; ++m) {
    const auto P  = leg_.val[m].topRows(Lout + 1 - m);
    const auto dP = leg_.dth[m].topRows(Lout + 1 - m);
    // -i m (F_theta, Y/sin) part
    const VectorXd ur = P * wsin.cwiseProduct(TR.col(m));
    const VectorXd ui = P * wsin.cwiseProduct(TI.col(m));
    // -(F_phi, dY/dtheta) part
    const VectorXd vr = dP * grid_.weights.cwiseProduct(PR.col(m));
    const VectorXd vi = dP * grid_.weights.cwiseProduct(PI.col(m));
    for (int l = std::max(1, m); l <= Lout; ++l) {
      const Complex t(ur[l - m], ui[l - m]);
      const Complex p(vr[l - m], vi[l - m]);
      const Complex v = (Complex(0.0, -double(m)) * t - p) / laplace_eig(l);
      c[mode_index(l, m)] = v;
      if (m > 0) c[mode_index(l, -m)] = (m % 2 ? -std::conj(v) : std::conj(v));
    }
  }
  return c;
}

VectorXcd SphereTransform::analyze_divergence(const ArrayXXd& F_theta, const ArrayXXd& F_phi,
                                              int Lout) const {
  if (Lout < 0) Lout = L_;
  const double dphi = 2.0 * kPi / n_phi_;
  MatrixXd     TR   = F_theta.matrix() * cos_mphi_.leftCols(Lout + 1) * dphi;
  MatrixXd     TI   = -(F_theta.matrix() * sin_mphi_.leftCols(Lout + 1)) * dphi;
  MatrixXd     PR   = F_phi.matrix() * cos_mphi_.leftCols(Lout + 1) * dphi;
  MatrixXd     PI   = -(F_phi.matrix() * sin_mphi_.leftCols(Lout + 1)) * dphi;
  const VectorXd wsin = grid_.weights.cwiseQuotient(sin_theta_);
  VectorXcd    c    = VectorXcd::Zero(coeff_count(Lout));
  for (int m = 0; m <= Lout; ++m) {
    const auto P  = leg_.val[m].topRows(Lout + 1 - m);
    const auto dP = leg_.dth[m].topRows(Lout + 1 - m);
    const VectorXd ur = dP * grid_.weights.cwiseProduct(TR.col(m));
    const VectorXd ui = dP * grid_.weights.cwiseProduct(TI.col(m));
    const VectorXd vr = P * wsin.cwiseProduct(PR.col(m));
    const VectorXd vi = P * wsin.cwiseProduct(PI.col(m));
    for (int l = m; l <= Lout; ++l) {
      // div F = -(F, grad Y): grad Y = (dY/dth, im Y/sin)
      const Complex t(ur[l - m], ui[l - m]);
      const Complex p(vr[l - m], vi[l - m]);
      const Complex v = -(t + Complex(0.0, -double(m)) * p);
      c[mode_index(l, m)] = v;
      if (m > 0) c[mode_index(l, -m)] = (m % 2 ? -std::conj(v) : std::conj(v));
    }
  }
  return c;
}

// ---- complex-field variants (used for dense operator assembly) -----------

ArrayXXcd SphereTransform::synthesize_c(const VectorXcd& coeffs) const {
  const int Lc = coeff_degree(coeffs);
  if (Lc > L_) throw std::invalid_argument("synthesize_c: coefficients exceed table degree");
  ArrayXXcd f = ArrayXXcd::Zero(n_theta_, n_phi_);
  for (int m = -Lc; m <= Lc; ++m) {
    const int ma   = std::abs(m);
    const int sign = (m < 0 && ma % 2 == 1) ? -1 : 1;
    VectorXcd gm   = VectorXcd::Zero(n_theta_);
    for (int l = ma; l <= Lc; ++l)
      gm += coeffs[mode_index(l, m)] * leg_.val[ma].row(l - ma).transpose();
    for (int j = 0; j < n_phi_; ++j) {
      const Complex e = double(sign) * Complex(cos_mphi_(j, ma), (m < 0 ? -1.0 : 1.0) * sin_mphi_(j, ma));
      f.col(j) += gm.array() * e;
    }
  }
  return f;
}

void SphereTransform::synth_grad_c(const VectorXcd& coeffs, ArrayXXcd& A, ArrayXXcd& B) const {
  const int Lc = coeff_degree(coeffs);
  if (Lc > L_) throw std::invalid_argument("synth_grad_c: coefficients exceed table degree");
  A = ArrayXXcd::Zero(n_theta_, n_phi_);
  B = ArrayXXcd::Zero(n_theta_, n_phi_);
  for (int m = -Lc; m <= Lc; ++m) {
    const int ma   = std::abs(m);
    const int sign = (m < 0 && ma % 2 == 1) ? -1 : 1;
    VectorXcd gm   = VectorXcd::Zero(n_theta_);
    VectorXcd dm   = VectorXcd::Zero(n_theta_);
    for (int l = ma; l <= Lc; ++l) {
      gm += coeffs[mode_index(l, m)] * leg_.val[ma].row(l - ma).transpose();
      dm += coeffs[mode_index(l, m)] * leg_.dth[ma].row(l - ma).transpose();
    }
    const VectorXcd bm =
        (Complex(0.0, double(m)) * gm.array() / sin_theta_.array().cast<Complex>()).matrix();
    for (int j = 0; j < n_phi_; ++j) {
      const Complex e = double(sign) * Complex(cos_mphi_(j, ma), (m < 0 ? -1.0 : 1.0) * sin_mphi_(j, ma));
      A.col(j) += dm.array() * e;
      B.col(j) += bm.array() * e;
    }
  }
}

VectorXcd SphereTransform::project_tangent_c(const ArrayXXcd& F_theta, const ArrayXXcd& F_phi,
                                             int Lout) const {
  if (Lout < 0) Lout = L_;
  const double dphi = 2.0 * kPi / n_phi_;
  VectorXcd    c    = VectorXcd::Zero(coeff_count(Lout));
  const VectorXd wsin = grid_.weights.cwiseQuotient(sin_theta_);
  for (int m = -Lout; m <= Lout; ++m) {
    const int ma   = std::abs(m);
    const int sign = (m < 0 && ma % 2 == 1) ? -1 : 1;
    VectorXcd ht   = VectorXcd::Zero(n_theta_);
    VectorXcd hp   = VectorXcd::Zero(n_theta_);
    for (int j = 0; j < n_phi_; ++j) {
      // conj of the basis phase
      const Complex e = double(sign) * Complex(cos_mphi_(j, ma), (m < 0 ? 1.0 : -1.0) * sin_mphi_(j, ma)) * dphi;
      ht += (F_theta.col(j) * e).matrix();
      hp += (F_phi.col(j) * e).matrix();
    }
    for (int l = std::max(1, ma); l <= Lout; ++l) {
      Complex t = 0.0, p = 0.0;
      for (int i = 0; i < n_theta_; ++i) {
        t += wsin[i] * leg_.val[ma](l - ma, i) * ht[i];
        p += grid_.weights[i] * leg_.dth[ma](l - ma, i) * hp[i];
      }
      c[mode_index(l, m)] = (Complex(0.0, -double(m)) * t - p) / laplace_eig(l);
    }
  }
  return c;
}

const SphereTransform& transform_for(const TruncationSpec& spec) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<SphereTransform>> cache;
  const auto key = std::make_tuple(spec.L, spec.n_theta, spec.n_phi);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<SphereTransform>(spec)).first;
  return *it->second;
}

}  // namespace sns
