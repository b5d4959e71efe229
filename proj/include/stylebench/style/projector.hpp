#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "stylebench/nn/serialize.hpp"
#include "stylebench/nn/tensor.hpp"
#include "stylebench/util/errors.hpp"

namespace stylebench::style {

namespace detail {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. a is d x d
// row-major and is destroyed; eigvecs column k holds the k-th eigenvector.
inline void jacobi_eigen(std::vector<double>& a, size_t d, std::vector<double>& eigvals,
                         std::vector<double>& eigvecs) {
  eigvecs.assign(d * d, 0.0);
  for (size_t i = 0; i < d; ++i) eigvecs[i * d + i] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < d; ++p)
      for (size_t q = p + 1; q < d; ++q) off += a[p * d + q] * a[p * d + q];
    if (off < 1e-26) break;
    for (size_t p = 0; p < d; ++p) {
      for (size_t q = p + 1; q < d; ++q) {
        const double apq = a[p * d + q];
        if (std::abs(apq) < 1e-300) continue;
        const double app = a[p * d + p], aqq = a[q * d + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (size_t k = 0; k < d; ++k) {
          const double akp = a[k * d + p], akq = a[k * d + q];
          a[k * d + p] = c * akp - s * akq;
          a[k * d + q] = s * akp + c * akq;
        }
        for (size_t k = 0; k < d; ++k) {
          const double apk = a[p * d + k], aqk = a[q * d + k];
          a[p * d + k] = c * apk - s * aqk;
          a[q * d + k] = s * apk + c * aqk;
        }
        for (size_t k = 0; k < d; ++k) {
          const double vkp = eigvecs[k * d + p], vkq = eigvecs[k * d + q];
          eigvecs[k * d + p] = c * vkp - s * vkq;
          eigvecs[k * d + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  eigvals.resize(d);
  for (size_t i = 0; i < d; ++i) eigvals[i] = a[i * d + i];
}

inline void fix_sign(std::vector<double>& v) {
  for (double x : v) {
    if (std::abs(x) > 1e-12) {
      if (x < 0.0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

}  // namespace detail

// Affine 2D projection of latents. PCA is the deterministic default; other
// methods may register behind the same interface (method tag "external").
struct Projector {
  std::string method = "pca";
  std::vector<double> mean;
  std::vector<double> c1;  // first principal direction, unit norm
  std::vector<double> c2;  // second, orthonormal to c1

  size_t dim() const { return mean.size(); }
};

// Top-2 principal directions of the centered latents via eigendecomposition
// of the covariance. Sign convention: first nonzero entry of each component
// is positive. Throws on fewer than 3 points or zero-variance data.
inline Projector fit_projector(const nn::Matrix& latents) {
  const size_t n = latents.rows, d = latents.cols;
  if (n < 3) throw DataError("fit_projector: need at least 3 latent points");

  Projector proj;
  proj.mean.assign(d, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double* row = latents.row(i);
    for (size_t j = 0; j < d; ++j) proj.mean[j] += row[j];
  }
  for (double& m : proj.mean) m /= double(n);

  std::vector<double> cov(d * d, 0.0);
  std::vector<double> centered(d);
  for (size_t i = 0; i < n; ++i) {
    const double* row = latents.row(i);
    for (size_t j = 0; j < d; ++j) centered[j] = row[j] - proj.mean[j];
    for (size_t p = 0; p < d; ++p) {
      const double cp = centered[p];
      if (cp == 0.0) continue;
      for (size_t q = p; q < d; ++q) cov[p * d + q] += cp * centered[q];
    }
  }
  for (size_t p = 0; p < d; ++p)
    for (size_t q = p; q < d; ++q) {
      cov[p * d + q] /= double(n);
      cov[q * d + p] = cov[p * d + q];
    }

  std::vector<double> eigvals, eigvecs;
  detail::jacobi_eigen(cov, d, eigvals, eigvecs);

  size_t first = 0, second = 1;
  if (eigvals[second] > eigvals[first]) std::swap(first, second);
  for (size_t k = 2; k < d; ++k) {
    if (eigvals[k] > eigvals[first]) {
      second = first;
      first = k;
    } else if (eigvals[k] > eigvals[second]) {
      second = k;
    }
  }
  if (eigvals[first] <= 1e-18)
    throw DataError("fit_projector: zero-variance data (first principal direction degenerate)");

  proj.c1.resize(d);
  proj.c2.resize(d);
  for (size_t k = 0; k < d; ++k) {
    proj.c1[k] = eigvecs[k * d + first];
    proj.c2[k] = eigvecs[k * d + second];
  }
  detail::fix_sign(proj.c1);
  detail::fix_sign(proj.c2);
  return proj;
}

inline std::pair<double, double> project_2d(const Projector& proj,
                                            std::span<const double> latent) {
  if (latent.size() != proj.dim()) throw DataError("project_2d: dimension mismatch");
  double x = 0.0, y = 0.0;
  for (size_t j = 0; j < latent.size(); ++j) {
    const double c = latent[j] - proj.mean[j];
    x += c * proj.c1[j];
    y += c * proj.c2[j];
  }
  return {x, y};
}

inline void save_projector(const std::string& path, const Projector& proj) {
  std::vector<nn::NamedTensor> tensors;
  tensors.push_back({"projector/mean", {uint32_t(proj.dim())}, proj.mean});
  tensors.push_back({"projector/c1", {uint32_t(proj.dim())}, proj.c1});
  tensors.push_back({"projector/c2", {uint32_t(proj.dim())}, proj.c2});
  nn::save_weights(path, tensors);
}

inline Projector load_projector(const std::string& path) {
  const auto tensors = nn::load_weights(path);
  Projector proj;
  for (auto [name, field] : {std::make_pair("projector/mean", &proj.mean),
                             std::make_pair("projector/c1", &proj.c1),
                             std::make_pair("projector/c2", &proj.c2)}) {
    const auto* t = nn::find_tensor(tensors, name);
    if (!t) throw DataError(std::string("projector file missing ") + name + ": " + path);
    *field = t->values;
  }
  return proj;
}

}  // namespace stylebench::style
