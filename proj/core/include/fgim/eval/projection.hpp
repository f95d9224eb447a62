#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace fgim::eval {

struct Projection {
  std::vector<std::array<double, 2>> coords;  // one (x, y) per input point
  std::array<double, 2> eigenvalues{};        // variance along the two axes
  double total_variance = 0.0;                // trace of the covariance
  double captured_share = 0.0;                // (l1 + l2) / trace, 0 when trace is 0
};

// Mean-centres the points and projects them on the top two principal axes
// of their covariance (Jacobi eigendecomposition). Needs at least 3 points.
Projection project_latents(const std::vector<std::vector<double>>& points);

// Symmetric eigendecomposition by cyclic Jacobi rotations. Eigenvalues are
// returned in descending order with eigenvectors as columns (row-major n x n).
void symmetric_eigen(std::vector<double> matrix, std::size_t n, std::vector<double>& eigenvalues,
                     std::vector<double>& eigenvectors);

struct LatentPoint {
  std::string label;
  double weight = 0.0;  // FGIM weight that produced it, 0 for unedited latents
  std::vector<double> values;
};

// `x,y,label,weight` with a header row.
void write_projection_csv(const std::filesystem::path& path, const Projection& projection,
                          const std::vector<LatentPoint>& points);
// One line per latent: label weight v1 ... vd (space-separated).
void write_raw_latents(const std::filesystem::path& path, const std::vector<LatentPoint>& points);

}  // namespace fgim::eval
