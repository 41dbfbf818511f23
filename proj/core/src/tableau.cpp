#include "qzs/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qzs/errors.hpp"

namespace qzs {

RkTableau gauss_tableau(int stages) {
  // Radicals in long double, rounded once to double.
  const long double r3 = std::sqrt(3.0L);
  const long double r15 = std::sqrt(15.0L);
  auto d = [](long double v) { return static_cast<double>(v); };

  RkTableau t;
  t.stages = stages;
  switch (stages) {
    case 1:
      t.a = {0.5};
      t.b = {1.0};
      t.c = {0.5};
      break;
    case 2:
      t.a = {0.25, d(0.25L - r3 / 6.0L),  //
             d(0.25L + r3 / 6.0L), 0.25};
      t.b = {0.5, 0.5};
      t.c = {d(0.5L - r3 / 6.0L), d(0.5L + r3 / 6.0L)};
      break;
    case 3:
      t.a = {d(5.0L / 36.0L), d(2.0L / 9.0L - r15 / 15.0L), d(5.0L / 36.0L - r15 / 30.0L),
             d(5.0L / 36.0L + r15 / 24.0L), d(2.0L / 9.0L), d(5.0L / 36.0L - r15 / 24.0L),
             d(5.0L / 36.0L + r15 / 30.0L), d(2.0L / 9.0L + r15 / 15.0L), d(5.0L / 36.0L)};
      t.b = {d(5.0L / 18.0L), d(4.0L / 9.0L), d(5.0L / 18.0L)};
      t.c = {d(0.5L - r15 / 10.0L), 0.5, d(0.5L + r15 / 10.0L)};
      break;
    default:
      throw InvalidArgumentError("gauss_tableau: unsupported stage count " + std::to_string(stages) +
                                 "; supported stages are 1, 2, 3");
  }
  return t;
}

RkTableau make_tableau(int stages, std::vector<double> a, std::vector<double> b) {
  if (stages < 1) throw InvalidArgumentError("make_tableau: stage count must be positive");
  const auto s = static_cast<std::size_t>(stages);
  if (a.size() != s * s || b.size() != s) {
    throw InvalidArgumentError("make_tableau: A must be s*s and b must have s entries");
  }
  RkTableau t;
  t.stages = stages;
  t.a = std::move(a);
  t.b = std::move(b);
  t.c.assign(s, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) t.c[i] += t.a[i * s + j];
  }
  return t;
}

double check_symplectic(const RkTableau& t) {
  double worst = 0.0;
  for (int i = 0; i < t.stages; ++i) {
    for (int j = 0; j < t.stages; ++j) {
      const double bi = t.b[static_cast<std::size_t>(i)];
      const double bj = t.b[static_cast<std::size_t>(j)];
      worst = std::max(worst, std::abs(bi * t.A(i, j) + bj * t.A(j, i) - bi * bj));
    }
  }
  return worst;
}

double row_sum_defect(const RkTableau& t) {
  double worst = 0.0;
  for (int i = 0; i < t.stages; ++i) {
    double sum = 0.0;
    for (int j = 0; j < t.stages; ++j) sum += t.A(i, j);
    worst = std::max(worst, std::abs(sum - t.c[static_cast<std::size_t>(i)]));
  }
  return worst;
}

}  // namespace qzs
