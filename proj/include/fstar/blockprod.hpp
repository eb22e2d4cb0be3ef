#pragma once

#include "fstar/cones.hpp"
#include "fstar/symmat.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fstar {

// Minimal dense rectangular matrix, row-major.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
    double &operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    Mat transpose() const;
    double max_abs() const;
};

Mat matmul(const Mat &a, const Mat &b);

// Symmetric matrix on R^{n+m} in block form (B C; C^T D) with B the n x n
// base block, D the m x m fiber block and C the n x m coupling block.
class BlockSym {
  public:
    BlockSym(int n, int m, SymMat a);

    int n() const { return n_; }
    int m() const { return m_; }
    const SymMat &full() const { return a_; }
    SymMat base_block() const;  // B
    SymMat fiber_block() const; // D
    Mat coupling() const;       // C (n x m)

  private:
    int n_, m_;
    SymMat a_;
};

// Graph restriction i_Gamma^* A = (I;Gamma)^T A (I;Gamma)
//                               = B + C Gamma + (C Gamma)^T + Gamma^T D Gamma
// for a slope Gamma in M_{m x n}.
SymMat restrict_graph(const BlockSym &A, const Mat &gamma);

// pi(A) = D.
SymMat project_fiber(const BlockSym &A);

// Moore-Penrose inverse of a symmetric matrix: eigenvalues with
// |lambda| <= tol * max|lambda| are treated as zero.
SymMat pseudo_inverse(const SymMat &D, double tol = 1e-10);

// Basis of nul(F) in M_{n x m}: couplings annihilated by every supporting
// hyperplane normal of F.  Builtin cones use the exact answer {0}; for
// half-space lists only the listed generators are used (flagged, since the
// definition quantifies over all supporting hyperplanes).
struct NullSpace {
    std::vector<Mat> basis;           // each n x m
    bool generator_based = false;     // true when computed from a finite generator list
    std::vector<double> kernel_dirs;  // column-major n x k basis of the common kernel in R^n
    int kernel_dim = 0;
};

NullSpace null_space(const DirichletSet &F, int m);

struct ProductReport {
    Region region = Region::Exterior;
    double fiber_margin = 0.0;  // min eigenvalue of D
    double schur_margin = 0.0;  // membership margin of B - C D^+ C^T in F
    double null_residual = 0.0; // distance of C (I - D^+ D) from span nul(F)
    double margin = 0.0;        // overall signed margin (ignoring null violations)
    bool generator_based_null = false;
};

// Membership of A in the product cone F * P via the pseudo-inverse Schur
// characterization: D psd, C (I - D^+ D) in nul(F), B - C D^+ C^T in F.
ProductReport product_contains(const DirichletSet &F, const BlockSym &A, double margin);

struct SampledProductReport {
    Region region = Region::Exterior;
    double worst_margin = 0.0; // worst membership margin over probes
    Mat worst_gamma;
    double fiber_margin = 0.0;
    std::int64_t probes = 0;
    std::int64_t exterior_hits = 0;
};

// Membership by direct sampling of the definition: pi(A) psd and
// i_Gamma^* A in F over deterministic probes (zero, scaled units, the Schur
// minimizer -D^+ C^T, smallest-eigenvector rays of D, kernel-aligned rays)
// plus seeded random slopes with entries up to scale_max.
SampledProductReport product_contains_sampled(const DirichletSet &F, const BlockSym &A, int n_samples,
                                              double scale_max, std::uint64_t rng_seed, double margin);

} // namespace fstar
