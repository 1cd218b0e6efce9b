#pragma once

#include <functional>
#include <string_view>

#include <Eigen/Core>

#include "opo/model.hpp"
#include "opo/phase_point.hpp"

namespace opo {

/// Scalars of the two-mode diffusion matrix D = B B^T (in units of 2 gamma).
struct DiffusionScalars {
  double a;  ///< 1 + (g^2/2)(x2^2 + y2^2)
  double b;  ///< 1 + (g^2/2)(x1^2 + y1^2)
  double c;  ///< (g^2/2)(x1 x2 + y1 y2)
  double d;  ///< (g^2/2)(x1 y2 - y1 x2)

  /// a b - c^2 - d^2, which equals 1 + (g^2/2)(r1^2 + r2^2).
  [[nodiscard]] double det_factor() const { return a * b - c * c - d * d; }
};

DiffusionScalars abcd(const PhasePoint& x, const OpoParams& params);

/// D = 2 gamma [[a,0,c,d],[0,a,-d,c],[c,-d,b,0],[d,c,0,b]].
Eigen::Matrix4d diffusion(const PhasePoint& x, const OpoParams& params);

/// Closed-form inverse: adj / (2 gamma (a b - c^2 - d^2)).
Eigen::Matrix4d diffusion_inverse(const PhasePoint& x, const OpoParams& params);

/// Which intensity multiplies the cubic term of the exact potential field.
/// OwnMode is the printed form (x1 (x1^2 + y1^2) in Z1); CrossMode uses the
/// opposite mode as the drift does.
enum class ExactZVariant { OwnMode, CrossMode };

/// Z = D^-1 (2A - div D) with the printed simplifications; not curl-free.
Eigen::Vector4d z_exact(const PhasePoint& x, const OpoParams& params,
                        ExactZVariant variant = ExactZVariant::OwnMode);

/// Field obtained after replacing D by its symmetry-constrained mean
/// 2 gamma s(mu) I: Z = A / (gamma s(mu)). Curl-free; equals grad log W.
Eigen::Vector4d z_approx(const PhasePoint& x, const OpoParams& params);

enum class FieldTag { Exact, Approx, Other };
std::string_view to_string(FieldTag tag);

struct VectorField4 {
  std::function<Eigen::Vector4d(const PhasePoint&)> eval;
  FieldTag tag = FieldTag::Other;
};

VectorField4 exact_field(const OpoParams& params, ExactZVariant variant = ExactZVariant::OwnMode);
VectorField4 approx_field(const OpoParams& params);

inline constexpr double kCurlStep = 1e-5;

/// Central-difference estimate of d_i Z_j - d_j Z_i (antisymmetric).
Eigen::Matrix4d curl_matrix(const VectorField4& field, const PhasePoint& x, double h = kCurlStep);

/// Largest |entry| of curl_matrix.
double max_curl(const VectorField4& field, const PhasePoint& x, double h = kCurlStep);

enum class LinePath {
  Straight,      ///< segment origin -> x
  AxisParallel,  ///< x1, then y1, then x2, then y2
};

struct PotentialOptions {
  LinePath path = LinePath::Straight;
  bool require_curl_free = true;  ///< throw PotentialConditionError if the field has curl along the path
  double curl_tolerance = 1e-6;
};

/// Phi(x) = -integral_0^x Z . dX (64-point Gauss-Legendre per leg), so that
/// W is proportional to exp(-Phi). For the mean-diffusion field this equals
/// -log_w_unnorm under the AppendixB convention.
double potential_from_z(const VectorField4& field, const PhasePoint& x, const PotentialOptions& options = {});

/// Mean-diffusion replacement: a and b averaged over classical intensities.
/// Returns 1 + (g^2/2) I_classical, which is s(mu).
double mean_diffusion_scale(const OpoParams& params);

}  // namespace opo
