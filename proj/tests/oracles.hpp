#pragma once

// Independent reference computations used only by the tests. They avoid the
// library's own code paths (no Cholesky, no block reductions, no DH helper).

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "ecmlfd/gmm.hpp"
#include "ecmlfd/rng.hpp"
#include "ecmlfd/se3.hpp"

namespace oracle {

using ecmlfd::Mat4;
using ecmlfd::Matrix;
using ecmlfd::Vector;

inline Mat4 rot_x(double a) {
  Mat4 m = Mat4::Identity();
  m(1, 1) = std::cos(a);
  m(1, 2) = -std::sin(a);
  m(2, 1) = std::sin(a);
  m(2, 2) = std::cos(a);
  return m;
}

inline Mat4 rot_z(double a) {
  Mat4 m = Mat4::Identity();
  m(0, 0) = std::cos(a);
  m(0, 1) = -std::sin(a);
  m(1, 0) = std::sin(a);
  m(1, 1) = std::cos(a);
  return m;
}

inline Mat4 trans(double x, double y, double z) {
  Mat4 m = Mat4::Identity();
  m(0, 3) = x;
  m(1, 3) = y;
  m(2, 3) = z;
  return m;
}

// Modified DH: Rx(alpha) Tx(a) Rz(theta) Tz(d).
inline Mat4 modified_dh(double d, double theta, double a, double alpha) {
  return rot_x(alpha) * trans(a, 0, 0) * rot_z(theta) * trans(0, 0, d);
}

// Camera arm with the default table written out by hand.
inline Mat4 ecm_chain(double q1, double q2, double q3, double q4) {
  const double h = std::numbers::pi / 2;
  return modified_dh(0, h + q1, 0, h) * modified_dh(0, -h + q2, 0, -h) *
         modified_dh(-0.3822 + q3, 0, 0, h) * modified_dh(0.3829, q4, 0, 0);
}

// Gaussian density through an explicit inverse and determinant.
inline double gaussian_pdf(const Vector& x, const Vector& mu, const Matrix& cov) {
  const Eigen::FullPivLU<Matrix> lu(cov);
  const Vector d = x - mu;
  const double quad = d.dot(lu.inverse() * d);
  const double norm = std::pow(2.0 * std::numbers::pi, static_cast<double>(x.size()) / 2.0) *
                      std::sqrt(lu.determinant());
  return std::exp(-0.5 * quad) / norm;
}

inline double mixture_log_likelihood(const ecmlfd::GaussianMixture& m, const Matrix& data) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    double p = 0.0;
    for (const auto& c : m.components) p += c.prior * gaussian_pdf(data.row(i).transpose(), c.mean, c.covariance);
    ll += std::log(p);
  }
  return ll;
}

inline Matrix random_spd(int d, ecmlfd::Rng& rng, double scale = 1.0) {
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
  return scale * (a * a.transpose() / d + 0.5 * Matrix::Identity(d, d));
}

inline Matrix sample_gaussian(int n, const Vector& mu, const Matrix& cov, ecmlfd::Rng& rng) {
  const Eigen::LLT<Matrix> llt(cov);
  const Matrix L = llt.matrixL();
  Matrix out(n, mu.size());
  for (int i = 0; i < n; ++i) {
    Vector z(mu.size());
    for (Eigen::Index j = 0; j < mu.size(); ++j) z(j) = rng.normal();
    out.row(i) = (mu + L * z).transpose();
  }
  return out;
}

inline ecmlfd::GaussianMixture random_mixture(int k, int d, ecmlfd::Rng& rng, double spread = 4.0) {
  ecmlfd::GaussianMixture m;
  double total = 0.0;
  for (int c = 0; c < k; ++c) {
    ecmlfd::GaussianComponent g;
    g.prior = 0.5 + rng.uniform();
    total += g.prior;
    g.mean = Vector(d);
    for (int j = 0; j < d; ++j) g.mean(j) = spread * rng.normal();
    g.covariance = random_spd(d, rng);
    m.components.push_back(g);
  }
  for (auto& c : m.components) c.prior /= total;
  return m;
}

inline Matrix sample_mixture(const ecmlfd::GaussianMixture& m, int n, ecmlfd::Rng& rng) {
  Matrix out(n, m.dim());
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    std::size_t c = 0;
    while (c + 1 < m.components.size() && u >= m.components[c].prior) u -= m.components[c++].prior;
    const auto& g = m.components[c];
    out.row(i) = sample_gaussian(1, g.mean, g.covariance, rng).row(0);
  }
  return out;
}

// Least-squares regression y = B x + c by the normal equations on the
// population moments of a single Gaussian: B = Σyx Σxx⁻¹.
inline Vector linear_gaussian_mean(const Vector& mu, const Matrix& cov, const std::vector<int>& in,
                                   const std::vector<int>& out, const Vector& x) {
  Matrix sxx(in.size(), in.size()), syx(out.size(), in.size());
  for (std::size_t i = 0; i < in.size(); ++i)
    for (std::size_t j = 0; j < in.size(); ++j) sxx(i, j) = cov(in[i], in[j]);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < in.size(); ++j) syx(i, j) = cov(out[i], in[j]);
  Vector mx(in.size()), my(out.size());
  for (std::size_t i = 0; i < in.size(); ++i) mx(i) = mu(in[i]);
  for (std::size_t i = 0; i < out.size(); ++i) my(i) = mu(out[i]);
  const Matrix b = syx * sxx.fullPivLu().inverse();
  return my + b * (x - mx);
}

}  // namespace oracle
