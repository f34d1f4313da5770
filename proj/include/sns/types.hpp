#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sns {

using Real    = double;
using Complex = std::complex<double>;
using Index   = Eigen::Index;

using Eigen::ArrayXd;
using Eigen::ArrayXXcd;
using Eigen::ArrayXXd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr int    kMaxDegree = 512;
inline constexpr double kPi        = 3.14159265358979323846;

// Triangular packing of (l,m) with 0 <= l <= L, -l <= m <= l.
inline Index mode_index(int l, int m) { return static_cast<Index>(l) * l + l + m; }
inline Index coeff_count(int L) { return static_cast<Index>(L + 1) * (L + 1); }

// Laplace eigenvalue l(l+1); the streamfunction relation is omega = lambda * psi.
inline double laplace_eig(int l) { return double(l) * (l + 1); }

struct NonInvertibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateDriftError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BlowUpError : std::runtime_error {
  int64_t last_good_step;
  double  t;
  BlowUpError(int64_t step, double time)
      : std::runtime_error("solution norm exceeded blow-up threshold"),
        last_good_step(step),
        t(time) {}
};

struct ConfigError : std::runtime_error {
  std::string pointer;  // JSON-pointer-ish location of the offending entry
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(what + " (at " + where + ")"), pointer(std::move(where)) {}
};

// Quadrature-capable grid sizes for a truncation degree L.  The defaults are
// the smallest sizes that keep quadratic products alias-free: Gauss-Legendre
// exactness needs n_theta >= ceil((3L+2)/2) and the Fourier direction needs
// n_phi >= 3L+1.
struct TruncationSpec {
  int L;
  int n_theta;
  int n_phi;

  explicit TruncationSpec(int L_, int n_theta_ = 0, int n_phi_ = 0) : L(L_) {
    if (L < 1) throw std::invalid_argument("TruncationSpec: L must be >= 1");
    if (L > kMaxDegree)
      throw std::invalid_argument("TruncationSpec: degree overflow, L > " +
                                  std::to_string(kMaxDegree));
    const int nt_min = (3 * L + 3) / 2;  // == ceil((3L+2)/2)
    const int np_min = 3 * L + 1;
    n_theta = (n_theta_ == 0) ? nt_min : n_theta_;
    n_phi   = (n_phi_ == 0) ? np_min : n_phi_;
    if (n_theta < nt_min)
      throw std::invalid_argument("TruncationSpec: n_theta below dealiasing minimum");
    if (n_phi < np_min)
      throw std::invalid_argument("TruncationSpec: n_phi below dealiasing minimum");
  }

  bool operator==(const TruncationSpec&) const = default;
};

}  // namespace sns
