#include "kacward/linalg.hpp"

#include <cmath>
#include <limits>

namespace kw {

cplx log_det(const EdgeMatrix& a) {
  if (a.rows() == 0) return {0.0, 0.0};
  Eigen::PartialPivLU<EdgeMatrix> lu(a);
  const auto& m = lu.matrixLU();
  cplx total{0.0, 0.0};
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const cplx p = m(i, i);
    if (p == cplx{0.0, 0.0}) return {-std::numeric_limits<double>::infinity(), 0.0};
    total += std::log(p);
  }
  if (lu.permutationP().determinant() < 0) total += cplx{0.0, 3.14159265358979323846};
  return total;
}

cplx det(const EdgeMatrix& a) {
  if (a.rows() == 0) return {1.0, 0.0};
  return Eigen::PartialPivLU<EdgeMatrix>(a).determinant();
}

double max_abs(const EdgeMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double inf_norm(const EdgeMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
}

double one_norm(const EdgeMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace kw
