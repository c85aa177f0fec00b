#include "darboux/fd_weights.hpp"

#include <stdexcept>

namespace darboux {

std::vector<std::vector<double>> fd_weights(double z, std::span<const double> x, int max_order) {
  const int n = static_cast<int>(x.size());
  if (n == 0) throw std::invalid_argument("fd_weights: empty node set");
  if (max_order >= n) throw std::invalid_argument("fd_weights: order requires more nodes");

  std::vector<std::vector<double>> w(max_order + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  w[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) w[k][i] = c1 * (k * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
        w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) w[k][j] = (c4 * w[k][j] - k * w[k - 1][j]) / c3;
      w[0][j] = c4 * w[0][j] / c3;
    }
    c1 = c2;
  }
  return w;
}

}  // namespace darboux
