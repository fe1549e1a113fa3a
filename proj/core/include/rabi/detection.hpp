#pragma once

// Imaging model: blur of real-space densities by the point spread function of
// the imaging system, taken as a Gaussian with the quoted FWHM.

#include <span>
#include <vector>

namespace rabi {

inline constexpr double kDefaultPsfFwhm = 6.5e-6;  // m

double fwhm_to_sigma(double fwhm);

/// Convolves a density sampled on a uniform grid with a Gaussian of the given
/// FWHM. Each source point is spread with weights normalised over the grid,
/// so sum(out) == sum(density) to rounding. fwhm == 0 is the identity.
/// Throws DomainError if the FWHM exceeds the grid span and ParameterError
/// for a non-uniform or mismatched grid.
std::vector<double> psf_convolve(std::span<const double> x, std::span<const double> density,
                                 double fwhm = kDefaultPsfFwhm);

/// Indices of strict local maxima above `threshold` times the global maximum.
std::vector<int> local_maxima(std::span<const double> density, double threshold = 1e-3);

/// Largest separation at which two equal Gaussian peaks of standard deviation
/// `peak_sigma` still merge into one maximum after blurring: 2 sqrt(s^2 + s_psf^2).
double merging_separation(double peak_sigma, double fwhm = kDefaultPsfFwhm);

}  // namespace rabi
