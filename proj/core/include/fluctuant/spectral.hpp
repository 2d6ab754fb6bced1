#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace fluctuant {

// Distinct eigenvalues (ascending) with their spectral projectors. Levels closer
// than degeneracy_tol are grouped into one projector.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<int> ranks;
  std::vector<Eigen::MatrixXcd> projectors;
  double degeneracy_tol = 1e-9;

  int levels() const { return static_cast<int>(eigenvalues.size()); }
  int dimension() const {
    return projectors.empty() ? 0 : static_cast<int>(projectors.front().rows());
  }
};

// Throws std::domain_error if h is not Hermitian within 1e-12 entrywise.
SpectralDecomposition spectral_decompose(const Eigen::MatrixXcd& h, double degeneracy_tol = 1e-9);

// tr exp(-beta H), summed over the full spectrum (multiplicities included).
double partition_function(const Eigen::MatrixXcd& h, double beta);
double partition_function(const SpectralDecomposition& d, double beta);

// exp(-beta H) / Z, computed through the shifted spectrum for stability.
Eigen::MatrixXcd gibbs_state(const Eigen::MatrixXcd& h, double beta);

// f applied to a Hermitian matrix through its eigendecomposition.
Eigen::MatrixXcd hermitian_function(const Eigen::MatrixXcd& h,
                                    const std::function<std::complex<double>(double)>& f);

// Largest singular value.
double spectral_norm(const Eigen::MatrixXcd& a);

}  // namespace fluctuant
