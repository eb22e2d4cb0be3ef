#pragma once

#include "fstar/blockprod.hpp"
#include "fstar/cones.hpp"
#include "fstar/exec.hpp"
#include "fstar/gridfn.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fstar {

struct CheckItem {
    std::string name;
    double margin = 0.0; // raw worst margin of this part
    double scale = 1.0;  // its normalization
    std::vector<int> witness;
    std::int64_t checked = 0;
    std::int64_t skipped = 0;
};

// pass iff worst_margin >= -tolerance, where worst_margin is normalized by the
// per-part scale (matrix margins additionally carry the 1/spacing^2 of the
// second differences through scale).
struct CheckReport {
    bool pass = false;
    double worst_margin = 0.0;
    double tolerance = 0.0;
    std::vector<int> witness;
    std::vector<CheckItem> breakdown;

    std::string summary() const;
};

// Central second differences; mixed terms by the 4-point cross stencil.
// Exact on quadratics.  The node must have a full interior stencil.
SymMat fd_hessian(const GridFn &f, const std::vector<int> &node);

// Classify the finite-difference Hessian under F at every full-stencil node.
// scale = max(1, ||f||_inf / min_spacing^2); nodes adjacent to +inf values are
// skipped and counted.  An optional pre-mollification width approximates the
// viscosity reading for merely continuous data.
CheckReport is_F_subharmonic(const GridFn &f, const DirichletSet &F, double tolerance, double smoothing_eps = 0.0,
                             Exec policy = default_exec());

// Directional second differences (axes and diagonals) >= -tolerance * scale;
// +inf regions are constrained through midpoint convexity of the finite part.
CheckReport is_convex(const GridFn &f, double tolerance = 1e-9);

struct GammaSamples {
    int random = 8;
    std::uint64_t seed = 20240901;
    int max_anchor_nodes = 512; // y-grid anchors per slope
    std::vector<Mat> extra;
};

// Product-cone subharmonicity on a split grid: (a) every fiber convex,
// (b) F-subharmonic along sampled affine graphs y = y0 + Gamma x, and
// (c) the full finite-difference Hessian against the Schur characterization.
CheckReport is_product_subharmonic(const GridFn &psi, const DirichletSet &F, const GammaSamples &samples,
                                   double tolerance, Exec policy = default_exec());

} // namespace fstar
