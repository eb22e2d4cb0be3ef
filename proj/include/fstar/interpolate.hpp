#pragma once

#include "fstar/convex.hpp"
#include "fstar/cones.hpp"
#include "fstar/domain.hpp"
#include "fstar/exec.hpp"
#include "fstar/gridfn.hpp"
#include "fstar/harmonic.hpp"
#include "fstar/verify.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fstar {

// Convex boundary data phi_tau on a shared y-grid, one GridFn per boundary
// node of the domain.
struct BoundaryFunctionFamily {
    Domain domain;
    std::vector<GridFn> phi;

    // Fiber convexity of every node plus an adjacent-node continuity modulus.
    void validate(double continuity_modulus = kInf) const;
    const std::vector<Axis> &y_axes() const { return phi.front().axes(); }
};

struct BoundaryBodyFamily {
    Domain domain;
    std::vector<ConvexBody> bodies;

    void validate(double continuity_modulus = kInf) const;
};

BoundaryFunctionFamily indicator_family(const BoundaryBodyFamily &bodies, const std::vector<Axis> &y_axes);

struct ComparabilityReport {
    bool pass = false;
    double worst_constant = 0.0;  // largest finite spread over tau pairs at one dual node
    std::int64_t finite_nodes = 0;
    std::int64_t infinite_nodes = 0;
    std::vector<int> witness; // dual node of a mixed finite/infinite hit or the worst spread
    std::string note;
};

// Grid reading of local comparability: at each dual node all transforms are
// finite with bounded spread, or all are flagged divergent; the finite region
// has no isolated nodes.
ComparabilityReport locally_comparable_check(const BoundaryFunctionFamily &family, const std::vector<Axis> &dual_axes);

struct InterpolationOptions {
    int x_count = 33;              // interval nodes or disk bounding-grid nodes per axis
    std::vector<Axis> dual_axes;   // empty: suggested from the family data
    Exec policy = default_exec();
};

// The dual-route interpolation: Phi*(x,u) = integral of phi_tau*(u) against
// harmonic measure, conjugated back in u.  Returns Phi on (x; y) with split
// set; disk grids hold +inf outside the domain.
GridFn interpolate_functions(const BoundaryFunctionFamily &family, const InterpolationOptions &opts = {});

// A_x = body integral of the boundary bodies with harmonic-measure weights.
std::vector<ConvexBody> interpolate_bodies(const BoundaryBodyFamily &family,
                                           const std::vector<std::vector<double>> &points);

struct EnvelopeReport {
    double boundary_sup = 0.0;        // collar-extrapolated |Phi - phi| at boundary nodes
    CheckReport product;              // is_product_subharmonic margins
    double duality_margin = 0.0;      // worst normalized F-margin of -Phi*(., u)
    double duality_residual = 0.0;    // boundary equality residual of -Phi*(., u) vs -phi_tau*(u)
    bool pass = false;
};

struct EnvelopeCheckOptions {
    double boundary_tol = 1e-2;
    double margin_tol = 1e-4;
    double duality_tol = 1e-3;
    int dual_probe_stride = 4; // every k-th dual node for the duality route
    std::vector<Axis> dual_axes;
    GammaSamples samples;
    Exec policy = default_exec();
};

EnvelopeReport envelope_property_check(const GridFn &Phi, const BoundaryFunctionFamily &family, const DirichletSet &F,
                                       const EnvelopeCheckOptions &opts = {});

struct HullOptions {
    int x_count = 33;
    int max_iter = 200;
    double tol = 1e-10;
    Exec policy = default_exec();
};

// Discrete convex envelope of the boundary graphs extended by +inf inward:
// iterated per-line convexification over a lattice direction set covering the
// boundary-to-boundary slopes.  Equals the F = P Perron envelope on the grid
// up to the direction-set modulus.
GridFn convex_hull_interpolation(const BoundaryFunctionFamily &family, const HullOptions &opts = {});

} // namespace fstar
