#include "otgsa/dist/sobol.hpp"

#include <bit>
#include <stdexcept>
#include <vector>

#include "otgsa/dist/sobol_directions.hpp"

namespace otgsa::dist {

Eigen::MatrixXd sobol_points(int n, int dim) {
  if (n < 0) throw std::invalid_argument("sobol_points: negative count");
  if (dim < 1 || dim > detail::kSobolMaxDim)
    throw std::invalid_argument("sobol_points: unsupported dimension");

  constexpr int kBits = 32;
  // Direction numbers v[d][k], scaled so bit 31 is the leading bit.
  std::vector<std::array<std::uint32_t, kBits>> v(dim);
  for (int d = 0; d < dim; ++d) {
    if (d == 0) {
      for (int k = 0; k < kBits; ++k) v[d][k] = 1u << (31 - k);
      continue;
    }
    const std::uint32_t poly = detail::kSobolPoly[d];
    const int degree = 31 - std::countl_zero(poly);
    std::array<std::uint32_t, kBits> m{};
    for (int k = 0; k < degree; ++k) m[k] = detail::kSobolVinit[d][k];
    for (int k = degree; k < kBits; ++k) {
      std::uint32_t value = m[k - degree] ^ (m[k - degree] << degree);
      for (int bit = 1; bit < degree; ++bit)
        if ((poly >> (degree - bit)) & 1u) value ^= m[k - bit] << bit;
      m[k] = value;
    }
    for (int k = 0; k < kBits; ++k) v[d][k] = m[k] << (31 - k);
  }

  Eigen::MatrixXd points(n, dim);
  std::vector<std::uint32_t> state(dim, 0);
  for (int i = 0; i < n; ++i) {
    // Gray-code step for sequence index i+1 (index 0, the origin, is skipped).
    const int c = std::countr_zero(~static_cast<std::uint32_t>(i));
    for (int d = 0; d < dim; ++d) {
      state[d] ^= v[d][c];
      points(i, d) = static_cast<double>(state[d]) * 0x1.0p-32;
    }
  }
  return points;
}

}  // namespace otgsa::dist
