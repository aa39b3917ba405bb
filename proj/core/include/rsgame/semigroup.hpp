#pragma once

#include <vector>

#include "rsgame/lattice.hpp"
#include "rsgame/lsmc.hpp"
#include "rsgame/rbsde_tree.hpp"
#include "rsgame/sde.hpp"

namespace rsg {

/// The operator G^{t,x;u,v}_{s1,s2}[eta]: solve the RBSDE with driver f_j and
/// obstacle h_j over the sub-interval [s1, s2] with terminal data eta, and
/// return the value at s1. These are the exact-lattice and Monte Carlo
/// realizations of the same map.

/// Lattice realization; eta is per node at level i2, result is per node at
/// level i1. Throws if eta dips below the obstacle at i2.
std::vector<double> semigroup_lattice(const GameSpec& spec, const LatticeModel& lattice, int j,
                                      const ControlPath& u, const ControlPath& v,
                                      std::size_t i1, std::size_t i2,
                                      const std::vector<double>& eta);

/// LSMC realization on an existing bundle; eta is per path at grid point i2,
/// result is per path at grid point i1.
std::vector<double> semigroup_paths(const GameSpec& spec, const PathBundle& bundle, int j,
                                    const ControlPath& u, const ControlPath& v,
                                    std::size_t i1, std::size_t i2,
                                    const std::vector<double>& eta, const BasisSpec& basis = {});

/// Full-horizon cost functional J_j(t,x;u,v) on the lattice:
/// G_{t,T}[Phi_j(X_T)] evaluated at the root.
double cost_functional_lattice(const GameSpec& spec, const LatticeModel& lattice, int j,
                               const ControlPath& u, const ControlPath& v);

/// Monte Carlo cost functional on a bundle (root value of the LSMC solve).
double cost_functional_paths(const GameSpec& spec, const PathBundle& bundle, int j,
                             const ControlPath& u, const ControlPath& v, double* stderr_out = nullptr);

}  // namespace rsg
