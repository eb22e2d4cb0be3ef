#pragma once

#include "fstar/exec.hpp"
#include "fstar/gridfn.hpp"
#include "fstar/symmat.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fstar {

// phi = -log integral e^{-psi(x,.)} dy per x-node, trapezoid quadrature with
// per-fiber max subtraction.  phi = +inf exactly where the integral vanishes.
struct MarginalResult {
    GridFn phi;
    std::vector<double> integral;
    std::string scheme = "trapezoid";
    std::int64_t tail_warnings = 0; // fibers whose edge values sit within 5 of the fiber minimum
};

MarginalResult marginal(const GridFn &psi, const GridFn *log_weight = nullptr, Exec policy = default_exec());

// Quadratic of section 8: psi(x1,x2,y) = (x,y)^T Q (x,y) with
// Q = (lambda tau a; tau mu b; a b 1), K = {psi <= kappa}.
struct QuadraticSection {
    double lambda = 1.0, tau = 0.0, mu = 1.0, a = 0.0, b = 0.0, kappa = 1.0;

    double w(double x1, double x2) const; // discriminant (a x1 + b x2)^2 - (lambda x1^2 + mu x2^2 + 2 tau x1 x2 - kappa)
    double psi(double x1, double x2, double y) const;
    SymMat hessian() const; // 2Q
    double laplacian_bk(double x1, double x2) const; // closed-form Laplacian of -log section length
};

// B_K(x) = -log length of the section {y : psi(x,y) <= kappa}, by the exact
// quadratic root formula; +inf where the section is empty.
GridFn section_volume_quadratic(const QuadraticSection &q, const std::vector<Axis> &x_axes,
                                Exec policy = default_exec());

// Grid mode: 1-D fibers of rho, endpoints of {rho <= kappa} by linear
// interpolation between nodes.  Rejects fibers that fail a convexity scan.
GridFn section_volume(const GridFn &rho, double kappa, Exec policy = default_exec());

// Quantile coupling between the fiber densities at x0 and x:
// F_x(T(y)) = F_x0(y), so T(x0, .) is the identity.
std::vector<double> transport_map(const GridFn &psi, const std::vector<int> &x0, const std::vector<int> &x);

// The transport velocity at x0: an m=1 row vector over the y-grid per
// x-direction, with the marginal first derivative from the quotient rule.
struct TransportVelocity {
    Axis y_axis;
    std::vector<double> dphi;               // n entries
    std::vector<std::vector<double>> gamma; // gamma[k][iy], k < n
    bool one_sided_dx = false;              // x0 touches the x-grid edge
};

TransportVelocity transport_velocity(const GridFn &psi, const std::vector<int> &x0);

// Residual of the marginal Hessian decomposition
//   Hess(phi) = (1/I) [ int e^{-psi} (d_y Gamma)^T (d_y Gamma)
//                     + int e^{-psi} i_Gamma^* Hess(psi) ] dy
// at one x-node: entrywise max |LHS - RHS| plus both sides.
struct HessianDecomposition {
    SymMat lhs;
    SymMat rhs;
    double residual = 0.0;
    bool growth_warning = false; // fiber edge slopes too shallow for the tail argument
};

HessianDecomposition hessian_decomposition_residual(const GridFn &psi, const std::vector<int> &x0);

// x -> inf_y psi(x, y), plus the L^p diagnostic family
// phi_p = (1/p) M( p psi + |y|^2 ) whose sup-deviation from the infimum
// decreases in p.
struct MinPrincipleResult {
    GridFn inf_y;
    std::vector<double> p_values;
    std::vector<double> sup_deviation;
};

MinPrincipleResult min_principle(const GridFn &psi, std::vector<double> p_values = {1.0, 4.0, 16.0, 64.0},
                                 Exec policy = default_exec());

} // namespace fstar
