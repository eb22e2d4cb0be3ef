#pragma once

#include "fstar/domain.hpp"
#include "fstar/exec.hpp"
#include "fstar/gridfn.hpp"

#include <vector>

namespace fstar {

// Probability weights on the boundary nodes of a domain, for a fixed interior
// point: exact endpoint weights on an interval, renormalized Poisson-kernel
// quadrature on a disk, indicator Dirichlet solves on a masked grid.
struct HarmonicMeasureWeights {
    std::vector<double> w;
    void validate() const; // nonnegative, sum 1 within 1e-9
};

HarmonicMeasureWeights harmonic_measure(const Domain &domain, const std::vector<double> &x);

struct SolveOptions {
    int grid_count = 129;   // nodes per axis for interval/disk rasterization
    double omega = 0.0;     // SOR relaxation; 0 picks 2/(1+sin(pi/n))
    double tol = 1e-10;     // relative residual target
    int max_iter = 200000;
    Exec policy = default_exec();
};

// Laplace solve with the given boundary data: linear interpolation on an
// interval; red-black SOR on a five-point stencil otherwise, with
// Shortley-Weller cut arms where the disk boundary crosses the grid.
// Non-interior nodes of the returned grid hold +inf.
GridFn solve_dirichlet(const Domain &domain, const std::vector<double> &boundary_values,
                       const SolveOptions &opts = {});

// integral of g d(omega_x): measure quadrature on interval/disk, point
// evaluation of the Dirichlet solution on masked grids.
double integrate_boundary(const Domain &domain, const std::vector<double> &x,
                          const std::vector<double> &boundary_values, const SolveOptions &opts = {});

// |f(x) - circle average| by bilinear sampling, a harmonicity diagnostic.
double mean_value_check(const GridFn &f, const std::vector<double> &x, double r, int angle_samples = 256);

} // namespace fstar
