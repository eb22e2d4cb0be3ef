#pragma once

#include "fstar/domain.hpp"
#include "fstar/symmat.hpp"

#include <string>
#include <vector>

namespace fstar {

enum class Region { Interior, Boundary, Exterior };

const char *to_string(Region r);

// tr(U A) >= c with U positive semidefinite and nonzero.
struct HalfSpace {
    SymMat U;
    double c = 0.0;
};

// f(lambda) = coeffs . lambda + offset >= 0, symmetrized over permutations of
// the eigenvalue vector.
struct EigenFunctional {
    std::vector<double> coeffs;
    double offset = 0.0;
};

// Finitely presented Dirichlet set in Sym^2(R^n): closed, proper, nonempty,
// stable under adding positive semidefinite matrices.
class DirichletSet {
  public:
    enum class Kind { PosCone, TraceCone, HalfSpaces, EigenCone };

    static DirichletSet pos_cone(int dim);
    static DirichletSet trace_cone(int dim);
    static DirichletSet half_spaces(int dim, std::vector<HalfSpace> hs);
    static DirichletSet eigen_cone(int dim, std::vector<EigenFunctional> fns);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool is_convex() const { return is_convex_; }
    bool is_cone() const { return is_cone_; }
    const std::vector<HalfSpace> &halfspaces() const { return halfspaces_; }
    const std::vector<EigenFunctional> &functionals() const { return functionals_; }

    std::string describe() const;

  private:
    DirichletSet() = default;
    Kind kind_ = Kind::PosCone;
    int dim_ = 0;
    bool is_convex_ = true;
    bool is_cone_ = true;
    std::vector<HalfSpace> halfspaces_;
    std::vector<EigenFunctional> functionals_;
};

// Signed distance-like membership margin: positive inside, negative outside,
// zero on the boundary (exact for the builtin kinds, generator-based for
// half-space lists).
double membership_margin(const DirichletSet &F, const SymMat &A);

Region contains(const DirichletSet &F, const SymMat &A, double margin);

// True iff -A is not interior to F, i.e. A lies in the Dirichlet dual
// ~(-Int F).  Agrees with contains(F, -A, margin) != Interior by construction.
bool dual_contains(const DirichletSet &F, const SymMat &A, double margin = 0.0);

// Asymptotic (recession) cone of F.  Identity on cones over 0.
DirichletSet ray_set(const DirichletSet &F);

struct DomainConvexityReport {
    bool supported = false;
    bool strictly_convex = false;
    Region ray_class = Region::Exterior;      // 2*Id under the ray set
    Region dual_ray_class = Region::Exterior; // 2*Id under the dual ray set interior test
    std::string note;
};

// Checks strict F-convexity of the domain boundary through its defining
// function: the boundary Hessian of |x-c|^2 - R^2 is 2*Id, classified under
// the ray set and the dual ray set.  Intervals are vacuously convex.
DomainConvexityReport check_strict_domain_convexity(const DirichletSet &F, const Domain &domain);

} // namespace fstar
