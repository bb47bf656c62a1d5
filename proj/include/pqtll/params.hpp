#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace pqtll {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;
using RowVec4 = Eigen::RowVector4cd;
using MatX = Eigen::MatrixXcd;
using VecX = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Couplings of the periodically quenched two-leg ladder, in units hbar = T = 1.
///
/// `j_y` and `j_d` are complex; their imaginary parts encode nonreciprocal
/// vertical and diagonal hopping. `parallel_onsite` is an optional
/// k-independent 4x4 term added to the first-half Hamiltonian. It is zero for
/// the physical model and exists for symmetry-breaking probes.
struct ModelParams {
  double j_x = 0.0;
  cplx j_y{0.0, 0.0};
  cplx j_d{0.0, 0.0};
  double v = 0.0;
  Mat4 parallel_onsite = Mat4::Zero();

  bool is_hermitian() const { return j_y.imag() == 0.0 && j_d.imag() == 0.0; }
  bool has_parallel_onsite() const { return !parallel_onsite.isZero(0.0); }
  bool is_finite() const;
  /// Throws Error(NonFinite) on NaN/inf components.
  void validate() const;
};

ModelParams make_params(double j_x, cplx j_y, cplx j_d, double v);

/// Drive origin. Lab: U = e^{-i h_perp} e^{-i h_par}; First and Second are the
/// two symmetric time frames.
enum class Frame { Lab = 0, First = 1, Second = 2 };

Frame frame_from_int(int f);

/// Which half-period Hamiltonian.
enum class Term { Parallel, Perp };

/// Scalar parameter that a sweep axis may vary.
enum class Axis { JX, JYR, JYI, JDR, JDI, V };

std::string_view axis_name(Axis a);
std::optional<Axis> parse_axis(std::string_view name);
double axis_value(const ModelParams& p, Axis a);
ModelParams with_axis(ModelParams p, Axis a, double value);

}  // namespace pqtll
