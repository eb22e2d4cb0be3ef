#pragma once

#include "fstar/exec.hpp"
#include "fstar/gridfn.hpp"

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace fstar {

// Result of a discrete Legendre-Fenchel transform.  divergent[j] != 0 marks
// dual nodes whose maximum was attained strictly at the edge of the sample
// box, i.e. the grid cannot certify a finite supremum there; the value column
// still holds the finite grid maximum.
struct LegendreResult {
    GridFn fn;
    std::vector<std::uint8_t> divergent;
};

// f*(u) = max over grid nodes y of (y . u - f(y)), axis by axis.  +inf input
// nodes never attain the maximum and are skipped; an all-infinite input is an
// error (empty effective domain).
LegendreResult legendre(const GridFn &f, const std::vector<Axis> &dual_axes, Exec policy = default_exec());

// Dual axis suggestion from the discrete subgradient range of f, padded 10%.
std::vector<Axis> suggest_dual_axes(const GridFn &f, int count = 0);

// Convex set in R^m, m in {1,2}.  An interval stores its endpoints; a planar
// body stores support values on N uniform unit directions theta_i = 2*pi*i/N.
class ConvexBody {
  public:
    static ConvexBody interval(double lo, double hi);
    static ConvexBody planar(std::vector<double> support_values);
    static ConvexBody from_points(const std::vector<std::array<double, 2>> &pts, int directions = 256);
    static ConvexBody ball(std::array<double, 2> center, double radius, int directions = 256);

    int dim() const { return dim_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    int directions() const { return static_cast<int>(support_.size()); }
    double direction_angle(int i) const;
    double support_at(int i) const { return support_[static_cast<size_t>(i)]; }
    const std::vector<double> &support_values() const { return support_; }

  private:
    ConvexBody() = default;
    int dim_ = 1;
    double lo_ = 0.0, hi_ = 0.0;
    std::vector<double> support_;
};

// h_A(u) = sup_{z in A} z . u.  Stored directions are answered exactly from
// the support vector; other directions are evaluated on the clipped polygon.
double support_function(const ConvexBody &body, const std::vector<double> &u);

// chi_A on the grid: 0 on nodes satisfying every support inequality, +inf off.
GridFn indicator(const ConvexBody &body, const std::vector<Axis> &y_axes);

ConvexBody minkowski_sum(const ConvexBody &a, const ConvexBody &b);
ConvexBody scale(const ConvexBody &a, double t);

// Support-weighted Riemann sum of bodies: weights nonnegative, sum 1.
ConvexBody body_integral(const std::vector<std::pair<double, ConvexBody>> &weighted);

// Lebesgue measure: interval length, or shoelace area of the intersection of
// the N support half-planes.  Empty intersection reports volume 0.
double volume(const ConvexBody &body, bool *empty_warning = nullptr);

// Vertices (counter-clockwise) of the support half-plane intersection.
std::vector<std::array<double, 2>> body_polygon(const ConvexBody &body);

// Gauge of a body with 0 interior: max_i (y . theta_i) / h_i.
double gauge(const ConvexBody &body, const std::vector<double> &y);

double distance_to_body(const ConvexBody &body, const std::vector<double> &y);

// e^{k dist(y, A)} - 1: zero on the body, increasing in k toward chi_A.
GridFn smoothed_indicator(const ConvexBody &body, double k, const std::vector<Axis> &y_axes);

// psi_eps(z) = max_{z'} ( psi(z') - |z - z'|^2 / (2 eps) ) by separable
// parabola-envelope transforms, reported on the middle half of each axis.
// Requires finite input (gauge-truncate indicators first).
GridFn sup_convolution(const GridFn &psi, double eps, Exec policy = default_exec());

// Discrete convolution with a tensorized C^infty bump of radius eps, weights
// normalized to total mass 1; output loses the stencil radius on each side.
GridFn mollify(const GridFn &psi, double eps, Exec policy = default_exec());

} // namespace fstar
