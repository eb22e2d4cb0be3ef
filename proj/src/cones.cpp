#include "fstar/cones.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fstar {

const char *to_string(Region r) {
    switch (r) {
        case Region::Interior: return "Interior";
        case Region::Boundary: return "Boundary";
        case Region::Exterior: return "Exterior";
    }
    return "?";
}

DirichletSet DirichletSet::pos_cone(int dim) {
    if (dim < 1) throw std::invalid_argument("DirichletSet: dim must be positive");
    DirichletSet f;
    f.kind_ = Kind::PosCone;
    f.dim_ = dim;
    return f;
}

DirichletSet DirichletSet::trace_cone(int dim) {
    if (dim < 1) throw std::invalid_argument("DirichletSet: dim must be positive");
    DirichletSet f;
    f.kind_ = Kind::TraceCone;
    f.dim_ = dim;
    return f;
}

DirichletSet DirichletSet::half_spaces(int dim, std::vector<HalfSpace> hs) {
    if (dim < 1) throw std::invalid_argument("DirichletSet: dim must be positive");
    if (hs.empty()) throw std::invalid_argument("DirichletSet: empty half-space list");
    bool cone = true;
    for (const HalfSpace &h : hs) {
        if (h.U.dim() != dim) throw std::invalid_argument("DirichletSet: half-space dimension mismatch");
        if (h.U.max_abs() == 0.0) throw std::invalid_argument("DirichletSet: half-space normal is zero");
        if (h.U.min_eigenvalue() < -1e-10 * std::max(1.0, h.U.max_abs()))
            throw std::invalid_argument("DirichletSet: half-space normal must be positive semidefinite");
        if (h.c != 0.0) cone = false;
    }
    DirichletSet f;
    f.kind_ = Kind::HalfSpaces;
    f.dim_ = dim;
    f.is_cone_ = cone;
    f.halfspaces_ = std::move(hs);
    return f;
}

DirichletSet DirichletSet::eigen_cone(int dim, std::vector<EigenFunctional> fns) {
    if (dim < 1) throw std::invalid_argument("DirichletSet: dim must be positive");
    if (fns.empty()) throw std::invalid_argument("DirichletSet: empty functional list");
    bool cone = true;
    for (const EigenFunctional &f : fns) {
        if (static_cast<int>(f.coeffs.size()) != dim) throw std::invalid_argument("DirichletSet: functional arity mismatch");
        if (f.offset != 0.0) cone = false;
    }
    DirichletSet f;
    f.kind_ = Kind::EigenCone;
    f.dim_ = dim;
    f.is_cone_ = cone;
    f.functionals_ = std::move(fns);
    return f;
}

std::string DirichletSet::describe() const {
    switch (kind_) {
        case Kind::PosCone: return "PosCone(" + std::to_string(dim_) + ")";
        case Kind::TraceCone: return "TraceCone(" + std::to_string(dim_) + ")";
        case Kind::HalfSpaces: return "HalfSpaces(" + std::to_string(dim_) + ", " + std::to_string(halfspaces_.size()) + ")";
        case Kind::EigenCone: return "EigenCone(" + std::to_string(dim_) + ", " + std::to_string(functionals_.size()) + ")";
    }
    return "?";
}

namespace {

// min over permutations sigma of coeffs . lambda_sigma: pair ascending
// coefficients with descending eigenvalues (rearrangement inequality).
double symmetrized_min(const EigenFunctional &f, const std::vector<double> &eig_ascending) {
    std::vector<double> c = f.coeffs;
    std::sort(c.begin(), c.end());
    double s = f.offset;
    size_t n = c.size();
    for (size_t i = 0; i < n; ++i) s += c[i] * eig_ascending[n - 1 - i];
    return s;
}

} // namespace

double membership_margin(const DirichletSet &F, const SymMat &A) {
    if (F.dim() != A.dim()) throw std::invalid_argument("membership_margin: dimension mismatch");
    switch (F.kind()) {
        case DirichletSet::Kind::PosCone: return A.min_eigenvalue();
        case DirichletSet::Kind::TraceCone: return A.trace();
        case DirichletSet::Kind::HalfSpaces: {
            double m = kInf;
            for (const HalfSpace &h : F.halfspaces()) m = std::min(m, h.U.dot(A) - h.c);
            return m;
        }
        case DirichletSet::Kind::EigenCone: {
            std::vector<double> eig = A.eigenvalues();
            double m = kInf;
            for (const EigenFunctional &f : F.functionals()) m = std::min(m, symmetrized_min(f, eig));
            return m;
        }
    }
    return -kInf;
}

Region contains(const DirichletSet &F, const SymMat &A, double margin) {
    if (margin < 0) throw std::invalid_argument("contains: margin must be nonnegative");
    double m = membership_margin(F, A);
    if (m > margin) return Region::Interior;
    if (m < -margin) return Region::Exterior;
    return Region::Boundary;
}

bool dual_contains(const DirichletSet &F, const SymMat &A, double margin) {
    if (F.kind() == DirichletSet::Kind::EigenCone)
        throw std::invalid_argument("dual_contains: EigenCone has no half-space presentation of its interior");
    return contains(F, -A, margin) != Region::Interior;
}

DirichletSet ray_set(const DirichletSet &F) {
    if (F.kind() == DirichletSet::Kind::EigenCone) throw std::invalid_argument("ray_set: unsupported kind");
    if (F.is_cone()) return F;
    std::vector<HalfSpace> hs = F.halfspaces();
    for (HalfSpace &h : hs) h.c = 0.0;
    return DirichletSet::half_spaces(F.dim(), std::move(hs));
}

DomainConvexityReport check_strict_domain_convexity(const DirichletSet &F, const Domain &domain) {
    DomainConvexityReport rep;
    if (domain.kind() == Domain::Kind::Grid) {
        rep.note = "grid-masked domains carry no smooth defining function; strict convexity not decidable";
        return rep;
    }
    rep.supported = true;
    if (domain.kind() == Domain::Kind::Interval) {
        // Boundary tangent spaces are 0-dimensional; the condition is vacuous.
        rep.strictly_convex = true;
        rep.ray_class = Region::Interior;
        rep.dual_ray_class = Region::Interior;
        rep.note = "interval boundary has trivial tangent space; vacuously strictly convex";
        return rep;
    }
    DirichletSet ray = ray_set(F);
    SymMat hess = 2.0 * SymMat::identity(F.dim());
    rep.ray_class = contains(ray, hess, 0.0);
    // 2*Id interior to the dual ray set iff -2*Id is exterior to the ray set.
    rep.dual_ray_class = contains(ray, -hess, 0.0) == Region::Exterior ? Region::Interior : Region::Boundary;
    rep.strictly_convex = rep.ray_class == Region::Interior && rep.dual_ray_class == Region::Interior;
    rep.note = rep.strictly_convex ? "disk defining-function Hessian interior to both ray sets"
                                   : "disk defining-function Hessian not interior";
    return rep;
}

} // namespace fstar
