#pragma once

#include <vector>

namespace qzs {

/// Butcher coefficients of an s-stage implicit Runge-Kutta method.
/// A is stored row-major; c_i is the row sum of A.
struct RkTableau {
  int stages = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  double A(int i, int j) const { return a[static_cast<std::size_t>(i * stages + j)]; }
};

/// Gauss collocation method with s in {1, 2, 3} (orders 2, 4, 6).
RkTableau gauss_tableau(int stages);

/// Builds a tableau from user coefficients; c is taken as the row sums of A.
RkTableau make_tableau(int stages, std::vector<double> a, std::vector<double> b);

/// max_{i,j} |b_i a_ij + b_j a_ji - b_i b_j|. Zero for symplectic methods.
double check_symplectic(const RkTableau& tableau);

/// max_i |c_i - sum_j a_ij|.
double row_sum_defect(const RkTableau& tableau);

}  // namespace qzs
