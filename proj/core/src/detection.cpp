#include "rabi/detection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rabi/lattice.hpp"
#include "rabi/params.hpp"

namespace rabi {

double fwhm_to_sigma(double fwhm) {
  if (fwhm < 0.0) throw ParameterError("PSF width must be non-negative");
  return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

std::vector<double> psf_convolve(std::span<const double> x, std::span<const double> density,
                                 double fwhm) {
  if (x.size() != density.size()) throw ParameterError("density and grid sizes differ");
  const double sigma = fwhm_to_sigma(fwhm);
  std::vector<double> out(density.begin(), density.end());
  if (sigma == 0.0 || x.size() < 2) return out;

  const std::size_t n = x.size();
  const double dx = (x.back() - x.front()) / static_cast<double>(n - 1);
  if (!(dx > 0.0)) throw ParameterError("PSF grid must be increasing");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(x[i] - x[i - 1] - dx) > 1e-6 * dx) {
      throw ParameterError("PSF grid must be uniform");
    }
  }
  const double span = x.back() - x.front();
  if (fwhm > span) {
    throw DomainError("PSF FWHM " + std::to_string(fwhm) + " m exceeds the grid span " +
                      std::to_string(span) + " m");
  }

  // Kernel depends only on the index offset; the column sums do not because
  // of the edges.
  std::vector<double> kernel(n);
  for (std::size_t d = 0; d < n; ++d) {
    const double u = static_cast<double>(d) * dx / sigma;
    kernel[d] = std::exp(-0.5 * u * u);
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (density[j] == 0.0) continue;
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += kernel[i > j ? i - j : j - i];
    const double w = density[j] / col;
    for (std::size_t i = 0; i < n; ++i) out[i] += w * kernel[i > j ? i - j : j - i];
  }
  return out;
}

std::vector<int> local_maxima(std::span<const double> density, double threshold) {
  std::vector<int> peaks;
  if (density.size() < 3) return peaks;
  const double top = *std::max_element(density.begin(), density.end());
  for (std::size_t i = 1; i + 1 < density.size(); ++i) {
    if (density[i] > density[i - 1] && density[i] >= density[i + 1] &&
        density[i] > threshold * top) {
      peaks.push_back(static_cast<int>(i));
    }
  }
  return peaks;
}

double merging_separation(double peak_sigma, double fwhm) {
  const double s = fwhm_to_sigma(fwhm);
  return 2.0 * std::sqrt(peak_sigma * peak_sigma + s * s);
}

}  // namespace rabi
