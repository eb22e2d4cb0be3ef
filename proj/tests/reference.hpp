#pragma once

// Brute-force oracles for the test suites.  These deliberately avoid the
// library's algorithmic paths: joint direct maximization instead of the
// axis-by-axis conjugate, dense congruence products instead of the block
// formula, Cholesky instead of the eigensolver.

#include "fstar/blockprod.hpp"
#include "fstar/gridfn.hpp"
#include "fstar/symmat.hpp"

#include <vector>

namespace fstar::reference {

// f*(u) by one joint maximization over every grid node.
double conjugate_at(const GridFn &f, const std::vector<double> &u);

// (I;Gamma)^T A (I;Gamma) assembled densely.
SymMat congruence_product(const BlockSym &A, const Mat &gamma);

// sup_z' ( psi(z') - |z - z'|^2 / (2 eps) ) over the grid nodes.
double sup_convolution_at(const GridFn &psi, double eps, const std::vector<double> &z);

// True iff A is positive definite, by a self-contained Cholesky attempt.
bool positive_definite(const SymMat &A);

// Membership of A in the product cone by slope sampling alone: deterministic
// unit rays at growing scales plus seeded random slopes, trace/eigen margins
// evaluated through the dense congruence product.
bool graph_sampling_member_trace(const BlockSym &A, int n_samples, double scale_max, std::uint64_t seed,
                                 double margin);

} // namespace fstar::reference
