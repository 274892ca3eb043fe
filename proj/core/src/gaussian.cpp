#include "surro/gaussian.hpp"

#include <string>

#include "surro/errors.hpp"

namespace surro {

void symmetrize(Eigen::MatrixXd& m) {
  m = ((m + m.transpose()) * 0.5).eval();
}

void add_jitter(Eigen::MatrixXd& m, double rel) {
  const double dim = static_cast<double>(m.rows());
  double ridge = rel * m.trace() / dim;
  if (!(ridge > 0)) ridge = rel;
  m.diagonal().array() += ridge;
}

Eigen::MatrixXd jittered_solve(const Eigen::MatrixXd& m, const Eigen::MatrixXd& b,
                               const char* what) {
  Eigen::MatrixXd a = m;
  symmetrize(a);
  add_jitter(a);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success)
    throw NumericError(std::string(what) + ": factorization failed");
  return ldlt.solve(b);
}

Eigen::MatrixXd jittered_inverse(const Eigen::MatrixXd& m, const char* what) {
  return jittered_solve(m, Eigen::MatrixXd::Identity(m.rows(), m.cols()), what);
}

GaussianBelief gaussian_precision_product(const std::vector<GaussianBelief>& beliefs) {
  if (beliefs.empty()) throw ConfigError("precision product: empty input");
  const int d = beliefs.front().dim();
  const int t = beliefs.front().time;
  for (const auto& b : beliefs) {
    if (b.dim() != d || b.cov.rows() != d || b.cov.cols() != d)
      throw ConfigError("precision product: incompatible dimensions");
    if (b.time != t) throw ConfigError("precision product: mixed time indices");
  }
  Eigen::MatrixXd precision = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd info = Eigen::VectorXd::Zero(d);
  for (const auto& b : beliefs) {
    Eigen::MatrixXd p = jittered_inverse(b.cov, "precision product");
    precision += p;
    info += p * b.mean;
  }
  GaussianBelief out;
  out.time = t;
  out.cov = jittered_inverse(precision, "precision product combine");
  symmetrize(out.cov);
  out.mean = out.cov * info;
  return out;
}

}  // namespace surro
