#pragma once

#include <vector>

namespace rabi {

/// One time sample of every reported expectation value. SI units; x and q
/// are expressed in the Rabi frame shared by all three engines.
struct ObservableRecord {
  double t = 0;        // s
  double N = 0;        // <a^dagger a>
  double x = 0;        // m
  double q = 0;        // kg m / s
  double sigma_x = 0;  // band occupation difference
  double sigma_z = 0;  // qubit population difference
  double parity = 0;   // <sigma_z (-1)^N>
  double norm = 0;
  double energy = 0;   // J, expectation of the engine's own Hamiltonian
};

using Trajectory = std::vector<ObservableRecord>;

}  // namespace rabi
