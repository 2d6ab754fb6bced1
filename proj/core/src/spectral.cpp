#include "fluctuant/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace fluctuant {

namespace {

void require_hermitian(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw std::domain_error("matrix must be square");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::domain_error("matrix must be Hermitian within 1e-12");
}

}  // namespace

SpectralDecomposition spectral_decompose(const Eigen::MatrixXcd& h, double degeneracy_tol) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const auto& vals = es.eigenvalues();   // ascending
  const auto& vecs = es.eigenvectors();

  SpectralDecomposition d;
  d.degeneracy_tol = degeneracy_tol;
  const int n = static_cast<int>(vals.size());
  int start = 0;
  while (start < n) {
    int stop = start + 1;
    while (stop < n && vals[stop] - vals[stop - 1] <= degeneracy_tol) ++stop;
    const int rank = stop - start;
    const auto block = vecs.middleCols(start, rank);
    d.eigenvalues.push_back(vals.segment(start, rank).mean());
    d.ranks.push_back(rank);
    d.projectors.emplace_back(block * block.adjoint());
    start = stop;
  }
  return d;
}

double partition_function(const SpectralDecomposition& d, double beta) {
  double z = 0.0;
  for (int m = 0; m < d.levels(); ++m)
    z += static_cast<double>(d.ranks[m]) * std::exp(-beta * d.eigenvalues[m]);
  return z;
}

double partition_function(const Eigen::MatrixXcd& h, double beta) {
  return partition_function(spectral_decompose(h), beta);
}

Eigen::MatrixXcd gibbs_state(const Eigen::MatrixXcd& h, double beta) {
  const auto d = spectral_decompose(h);
  const double e0 = d.eigenvalues.front();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(h.rows(), h.cols());
  double z = 0.0;
  for (int m = 0; m < d.levels(); ++m) {
    const double w = std::exp(-beta * (d.eigenvalues[m] - e0));
    rho += w * d.projectors[m];
    z += w * static_cast<double>(d.ranks[m]);
  }
  return rho / z;
}

Eigen::MatrixXcd hermitian_function(const Eigen::MatrixXcd& h,
                                    const std::function<std::complex<double>(double)>& f) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Eigen::VectorXcd fe(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < fe.size(); ++i) fe[i] = f(es.eigenvalues()[i]);
  return es.eigenvectors() * fe.asDiagonal() * es.eigenvectors().adjoint();
}

double spectral_norm(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

}  // namespace fluctuant
