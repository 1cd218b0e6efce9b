#include "opo/potential.hpp"

#include <array>
#include <cmath>
#include <string>

#include "opo/error.hpp"
#include "opo/quadrature.hpp"

namespace opo {

DiffusionScalars abcd(const PhasePoint& x, const OpoParams& p) {
  const double h = 0.5 * p.g2;
  return {1.0 + h * x.r2_sq(), 1.0 + h * x.r1_sq(), h * (x.x1 * x.x2 + x.y1 * x.y2), h * (x.x1 * x.y2 - x.y1 * x.x2)};
}

Eigen::Matrix4d diffusion(const PhasePoint& x, const OpoParams& p) {
  const DiffusionScalars s = abcd(x, p);
  Eigen::Matrix4d m;
  m << s.a, 0.0, s.c, s.d,
       0.0, s.a, -s.d, s.c,
       s.c, -s.d, s.b, 0.0,
       s.d, s.c, 0.0, s.b;
  return 2.0 * p.gamma * m;
}

Eigen::Matrix4d diffusion_inverse(const PhasePoint& x, const OpoParams& p) {
  const DiffusionScalars s = abcd(x, p);
  Eigen::Matrix4d adj;
  adj << s.b, 0.0, -s.c, -s.d,
         0.0, s.b, s.d, -s.c,
         -s.c, s.d, s.a, 0.0,
         -s.d, -s.c, 0.0, s.a;
  return adj / (2.0 * p.gamma * s.det_factor());
}

Eigen::Vector4d z_exact(const PhasePoint& x, const OpoParams& p, ExactZVariant variant) {
  const double h = 0.5 * p.g2;
  const double pre = 1.0 / (1.0 + h * (x.r1_sq() + x.r2_sq()));
  const bool own = variant == ExactZVariant::OwnMode;
  const double i_for_1 = own ? x.r1_sq() : x.r2_sq();
  const double i_for_2 = own ? x.r2_sq() : x.r1_sq();
  const double lin = 1.0 + p.g2;
  return pre * Eigen::Vector4d{-lin * x.x1 + p.mu * x.x2 - h * x.x1 * i_for_1,
                               -lin * x.y1 - p.mu * x.y2 - h * x.y1 * i_for_1,
                               -lin * x.x2 + p.mu * x.x1 - h * x.x2 * i_for_2,
                               -lin * x.y2 - p.mu * x.y1 - h * x.y2 * i_for_2};
}

Eigen::Vector4d z_approx(const PhasePoint& x, const OpoParams& p) {
  const double h = 0.5 * p.g2;
  const double inv_s = 1.0 / s_factor(p.mu);
  const double r1 = x.r1_sq();
  const double r2 = x.r2_sq();
  return inv_s * Eigen::Vector4d{-x.x1 + p.mu * x.x2 - h * x.x1 * r2,
                                 -x.y1 - p.mu * x.y2 - h * x.y1 * r2,
                                 -x.x2 + p.mu * x.x1 - h * x.x2 * r1,
                                 -x.y2 - p.mu * x.y1 - h * x.y2 * r1};
}

std::string_view to_string(FieldTag tag) {
  switch (tag) {
    case FieldTag::Exact: return "exact";
    case FieldTag::Approx: return "approx";
    case FieldTag::Other: return "other";
  }
  return "other";
}

VectorField4 exact_field(const OpoParams& params, ExactZVariant variant) {
  return {[params, variant](const PhasePoint& x) { return z_exact(x, params, variant); }, FieldTag::Exact};
}

VectorField4 approx_field(const OpoParams& params) {
  return {[params](const PhasePoint& x) { return z_approx(x, params); }, FieldTag::Approx};
}

Eigen::Matrix4d curl_matrix(const VectorField4& field, const PhasePoint& x, double h) {
  if (!(h > 0.0)) throw ParameterError("curl_matrix: step must be > 0");
  Eigen::Matrix4d jac;  // jac(j, i) = d Z_j / d X_i
  const Eigen::Vector4d base = x.vec();
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d up = base;
    Eigen::Vector4d down = base;
    up[i] += h;
    down[i] -= h;
    jac.col(i) = (field.eval(PhasePoint::from(up)) - field.eval(PhasePoint::from(down))) / (2.0 * h);
  }
  return jac.transpose() - jac;  // (i, j) -> d_i Z_j - d_j Z_i
}

double max_curl(const VectorField4& field, const PhasePoint& x, double h) {
  return curl_matrix(field, x, h).cwiseAbs().maxCoeff();
}

namespace {

double segment_work(const VectorField4& field, const Eigen::Vector4d& from, const Eigen::Vector4d& to,
                    const quad::Rule& rule) {
  const Eigen::Vector4d delta = to - from;
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double t = 0.5 * (rule.nodes[k] + 1.0);
    sum += rule.weights[k] * field.eval(PhasePoint::from(from + t * delta)).dot(delta);
  }
  return 0.5 * sum;
}

}  // namespace

double potential_from_z(const VectorField4& field, const PhasePoint& x, const PotentialOptions& options) {
  static const quad::Rule rule = quad::gauss_legendre(64);
  const Eigen::Vector4d target = x.vec();

  std::vector<Eigen::Vector4d> corners{Eigen::Vector4d::Zero()};
  if (options.path == LinePath::Straight) {
    corners.push_back(target);
  } else {
    Eigen::Vector4d c = Eigen::Vector4d::Zero();
    for (int i = 0; i < 4; ++i) {
      c[i] = target[i];
      corners.push_back(c);
    }
  }

  if (options.require_curl_free) {
    for (std::size_t k = 0; k + 1 < corners.size(); ++k) {
      for (double t : {0.25, 0.5, 0.75}) {
        const PhasePoint probe = PhasePoint::from(corners[k] + t * (corners[k + 1] - corners[k]));
        const double curl = max_curl(field, probe);
        if (curl > options.curl_tolerance) {
          throw PotentialConditionError("potential_from_z: field is not curl-free (max curl " + std::to_string(curl) +
                                        ")");
        }
      }
    }
  }

  double work = 0.0;
  for (std::size_t k = 0; k + 1 < corners.size(); ++k) work += segment_work(field, corners[k], corners[k + 1], rule);
  return -work;
}

double mean_diffusion_scale(const OpoParams& params) {
  const FixedPoints fp = classical_fixed_points(params);
  const double intensity = fp.ring_intensity.value_or(0.0);
  return 1.0 + 0.5 * params.g2 * intensity;
}

}  // namespace opo
