#pragma once

// zedge: Z_N clock chains with anomalous edge symmetry
//
//   clock        Z_N clock pair and the Weyl algebra
//   hilbert      ring geometry, packed basis, kernels, operator application
//   symmetry     domain-wall dressed symmetry, twisted translation
//   hamiltonian  edge Hamiltonian and its twisted counterpart
//   solver       lowest eigenpairs, dense or thick-restart Lanczos
//   spectra      quantum-number resolution, normalization, CFT matching
//   cft          compact-boson reference spectra
//   cocycle      discrete three-cocycle, class distinctness, MPS phases
//   verify       the named invariant suite
//   cli          report building and subcommand entry points

#include "cli.hpp"

namespace zedge {}
