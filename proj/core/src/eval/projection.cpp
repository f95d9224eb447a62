#include "fgim/eval/projection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>

#include "fgim/errors.hpp"

namespace fgim::eval {

void symmetric_eigen(std::vector<double> a, std::size_t n, std::vector<double>& eigenvalues,
                     std::vector<double>& eigenvectors) {
  if (a.size() != n * n) throw DimensionError("symmetric_eigen: matrix is not n x n");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto at = [n](std::vector<double>& m, std::size_t r, std::size_t c) -> double& { return m[r * n + c]; };

  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  for (int sweep = 0; sweep < 100 && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += at(a, p, q) * at(a, p, q);
    if (std::sqrt(off) <= 1e-15 * scale) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(a, p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(a, k, p), akq = at(a, k, q);
          at(a, k, p) = c * akp - s * akq;
          at(a, k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(a, p, k), aqk = at(a, q, k);
          at(a, p, k) = c * apk - s * aqk;
          at(a, q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = at(v, k, p), vkq = at(v, k, q);
          at(v, k, p) = c * vkp - s * vkq;
          at(v, k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return at(a, i, i) > at(a, j, j); });
  eigenvalues.assign(n, 0.0);
  eigenvectors.assign(n * n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    eigenvalues[c] = at(a, order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) eigenvectors[r * n + c] = at(v, r, order[c]);
  }
}

Projection project_latents(const std::vector<std::vector<double>>& points) {
  if (points.size() < 3) throw ContractError("project_latents: need at least 3 points, got " + std::to_string(points.size()));
  const auto n = points.size();
  const auto d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d) throw DimensionError("project_latents: points differ in dimension");
  }
  std::vector<double> mean(d, 0.0);
  for (const auto& p : points)
    for (std::size_t j = 0; j < d; ++j) mean[j] += p[j];
  for (auto& m : mean) m /= static_cast<double>(n);

  std::vector<double> cov(d * d, 0.0);
  for (const auto& p : points) {
    for (std::size_t i = 0; i < d; ++i) {
      const double di = p[i] - mean[i];
      for (std::size_t j = i; j < d; ++j) cov[i * d + j] += di * (p[j] - mean[j]);
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i * d + j] /= static_cast<double>(n);
      cov[j * d + i] = cov[i * d + j];
    }
  }

  Projection out;
  for (std::size_t i = 0; i < d; ++i) out.total_variance += cov[i * d + i];
  std::vector<double> values, vectors;
  symmetric_eigen(cov, d, values, vectors);
  const std::size_t axes = std::min<std::size_t>(2, d);
  for (std::size_t a = 0; a < axes; ++a) out.eigenvalues[a] = std::max(values[a], 0.0);
  out.captured_share =
      out.total_variance > 0.0 ? (out.eigenvalues[0] + out.eigenvalues[1]) / out.total_variance : 0.0;
  out.coords.reserve(n);
  for (const auto& p : points) {
    std::array<double, 2> xy{0.0, 0.0};
    for (std::size_t a = 0; a < axes; ++a)
      for (std::size_t j = 0; j < d; ++j) xy[a] += (p[j] - mean[j]) * vectors[j * d + a];
    out.coords.push_back(xy);
  }
  return out;
}

void write_projection_csv(const std::filesystem::path& path, const Projection& projection,
                          const std::vector<LatentPoint>& points) {
  if (projection.coords.size() != points.size()) throw DimensionError("projection and point counts differ");
  std::ofstream out(path);
  if (!out) throw IngestionError(path.string() + ":0: cannot open for writing");
  out << "x,y,label,weight\n" << std::setprecision(9);
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << projection.coords[i][0] << ',' << projection.coords[i][1] << ',' << points[i].label << ','
        << points[i].weight << '\n';
  }
}

void write_raw_latents(const std::filesystem::path& path, const std::vector<LatentPoint>& points) {
  std::ofstream out(path);
  if (!out) throw IngestionError(path.string() + ":0: cannot open for writing");
  out << std::setprecision(9);
  for (const auto& p : points) {
    out << p.label << ' ' << p.weight;
    for (double v : p.values) out << ' ' << v;
    out << '\n';
  }
}

}  // namespace fgim::eval
