#pragma once

#include <complex>

#include <Eigen/Dense>

namespace kw {

using cplx = std::complex<double>;
using EdgeMatrix = Eigen::MatrixXcd;

// Complex logarithm of det(A): sum of logs of the LU pivots plus i*pi per row swap.
// Imaginary part is not reduced mod 2pi. Returns -inf real part for singular A.
cplx log_det(const EdgeMatrix& a);
cplx det(const EdgeMatrix& a);
double max_abs(const EdgeMatrix& a);
double inf_norm(const EdgeMatrix& a);
double one_norm(const EdgeMatrix& a);

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace kw
