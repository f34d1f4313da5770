#include "sns/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sns/rng.hpp"

namespace sns {

SpectralField::SpectralField(const TruncationSpec& s, VectorXcd coeffs)
    : spec(s), psi_hat(std::move(coeffs)) {
  if (psi_hat.size() != coeff_count(spec.L))
    throw std::invalid_argument("SpectralField: coefficient size mismatch");
  psi_hat[0] = 0.0;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (!(spec == o.spec)) throw std::invalid_argument("SpectralField: spec mismatch");
  psi_hat += o.psi_hat;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (!(spec == o.spec)) throw std::invalid_argument("SpectralField: spec mismatch");
  psi_hat -= o.psi_hat;
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  psi_hat *= a;
  return *this;
}

void SpectralField::enforce_symmetry() {
  psi_hat[0] = 0.0;
  for (int l = 1; l <= spec.L; ++l) {
    psi_hat[mode_index(l, 0)] = Complex(psi_hat[mode_index(l, 0)].real(), 0.0);
    for (int m = 1; m <= l; ++m) {
      const Complex v          = psi_hat[mode_index(l, m)];
      psi_hat[mode_index(l, -m)] = (m % 2 ? -std::conj(v) : std::conj(v));
    }
  }
}

GridTangentField velocity(const SpectralField& f) {
  const SphereTransform& tr = transform_for(f.spec);
  ArrayXXd               A, B;
  tr.synth_grad(f.psi_hat, A, B);
  return GridTangentField{B, -A};
}

VectorXcd vorticity(const SpectralField& f) {
  VectorXcd w = f.psi_hat;
  for (int l = 1; l <= f.spec.L; ++l)
    for (int m = -l; m <= l; ++m) w[mode_index(l, m)] *= laplace_eig(l);
  return w;
}

double h_norm_sq(const SpectralField& f) {
  double s = 0.0;
  for (int l = 1; l <= f.spec.L; ++l)
    for (int m = -l; m <= l; ++m) s += laplace_eig(l) * std::norm(f.psi_hat[mode_index(l, m)]);
  return s;
}

double h_norm(const SpectralField& f) { return std::sqrt(h_norm_sq(f)); }

Complex inner_h(const SpectralField& f, const SpectralField& g) {
  Complex s = 0.0;
  for (int l = 1; l <= f.spec.L; ++l)
    for (int m = -l; m <= l; ++m)
      s += laplace_eig(l) * f.psi_hat[mode_index(l, m)] * std::conj(g.psi_hat[mode_index(l, m)]);
  return s;
}

double v_norm_sq(const SpectralField& f) { return h_norm_sq(f) + v_seminorm_sq(f); }

double v_seminorm_sq(const SpectralField& f) {
  double s = 0.0;
  for (int l = 1; l <= f.spec.L; ++l) {
    const double lam = laplace_eig(l);
    for (int m = -l; m <= l; ++m) s += lam * lam * std::norm(f.psi_hat[mode_index(l, m)]);
  }
  return s;
}

double dual_v_seminorm_sq(const VectorXcd& z_coeffs) {
  const int L = int(std::lround(std::sqrt(double(z_coeffs.size())))) - 1;
  double    s = 0.0;
  for (int l = 1; l <= L; ++l)
    for (int m = -l; m <= l; ++m) s += std::norm(z_coeffs[mode_index(l, m)]) / laplace_eig(l);
  return s;
}

double l4_norm(const SpectralField& f) {
  const SphereTransform& tr = transform_for(f.spec);
  GridTangentField       u  = velocity(f);
  const ArrayXXd         q  = (u.u_theta.square() + u.u_phi.square()).square();
  return std::pow(tr.integrate(q), 0.25);
}

NormRecord norms(const SpectralField& f, double nu, double lambda1) {
  NormRecord r;
  const double h2 = h_norm_sq(f);
  const double s2 = v_seminorm_sq(f);
  r.H             = std::sqrt(h2);
  r.V             = std::sqrt(h2 + s2);
  r.L4            = l4_norm(f);
  r.bracket       = std::sqrt(std::max(0.0, nu * s2 - nu * 0.5 * lambda1 * h2));
  return r;
}

VectorXcd to_z_basis(const SpectralField& f) {
  VectorXcd v = f.psi_hat;
  for (int l = 1; l <= f.spec.L; ++l) {
    const double c = std::sqrt(laplace_eig(l));
    for (int m = -l; m <= l; ++m) v[mode_index(l, m)] *= c;
  }
  return v;
}

SpectralField from_z_basis(const TruncationSpec& spec, const VectorXcd& z_coeffs) {
  SpectralField f(spec);
  for (int l = 1; l <= spec.L; ++l) {
    const double c = 1.0 / std::sqrt(laplace_eig(l));
    for (int m = -l; m <= l; ++m) f.psi_hat[mode_index(l, m)] = c * z_coeffs[mode_index(l, m)];
  }
  return f;
}

VectorXcd resize_coeffs(const VectorXcd& c, int L_to) {
  const int L_from = int(std::lround(std::sqrt(double(c.size())))) - 1;
  VectorXcd out    = VectorXcd::Zero(coeff_count(L_to));
  const int L      = std::min(L_from, L_to);
  for (int l = 0; l <= L; ++l)
    for (int m = -l; m <= l; ++m) out[mode_index(l, m)] = c[mode_index(l, m)];
  return out;
}

SpectralField random_field(const TruncationSpec& spec, uint64_t seed, double amplitude,
                           double decay_p, int l_max) {
  constexpr uint64_t kStream = 0x52464C44ull;  // test-field stream tag
  SpectralField      f(spec);
  if (l_max < 0 || l_max > spec.L) l_max = spec.L;
  for (int l = 1; l <= l_max; ++l) {
    const double s = amplitude * std::pow(laplace_eig(l), -0.5 * decay_p);
    for (int m = 0; m <= l; ++m) {
      Complex g = gaussian_pair(seed, kStream, l, mode_key(l, m));
      if (m == 0) g = Complex(g.real(), 0.0);
      f.psi_hat[mode_index(l, m)] = s * (m == 0 ? g : g / std::sqrt(2.0));
    }
  }
  f.enforce_symmetry();
  return f;
}

namespace {
std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace

void write_coeffs(std::ostream& os, const SpectralField& f) {
  os << "# sphere-sns streamfunction v1, L=" << f.spec.L << "\n";
  os << "l,m,re,im\n";
  for (int l = 1; l <= f.spec.L; ++l)
    for (int m = -l; m <= l; ++m) {
      const Complex v = f.psi_hat[mode_index(l, m)];
      os << l << ',' << m << ',' << fmt17(v.real()) << ',' << fmt17(v.imag()) << "\n";
    }
}

void write_coeffs_file(const std::string& path, const SpectralField& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_coeffs(os, f);
}

SpectralField read_coeffs(std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("coefficient table: empty input");
  const std::string magic = "# sphere-sns streamfunction v1, L=";
  if (line.rfind(magic, 0) != 0)
    throw std::runtime_error("coefficient table: bad header line");
  const int L = std::stoi(line.substr(magic.size()));
  if (!std::getline(is, line) || line != "l,m,re,im")
    throw std::runtime_error("coefficient table: missing column line");
  SpectralField f((TruncationSpec(L)));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    int                l, m;
    double             re, im;
    char               c;
    ss >> l >> c >> m >> c >> re >> c >> im;
    if (!ss) throw std::runtime_error("coefficient table: bad row: " + line);
    if (l < 1 || l > L || std::abs(m) > l)
      throw std::runtime_error("coefficient table: mode out of range: " + line);
    f.psi_hat[mode_index(l, m)] = Complex(re, im);
  }
  return f;
}

SpectralField read_coeffs_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return read_coeffs(is);
}

}  // namespace sns
