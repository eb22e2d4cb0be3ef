#pragma once

#include "fstar/gridfn.hpp"

#include <array>
#include <vector>

namespace fstar {

// Supported base domains.  An Interval has the two endpoints as boundary; a
// Disk carries M uniformly spaced boundary nodes; a GridDomain is a boolean
// interior mask on a rectangle whose boundary nodes are the masked-out cells
// adjacent to the interior.
class Domain {
  public:
    enum class Kind { Interval, Disk, Grid };

    static Domain interval(double a, double b);
    static Domain disk(std::array<double, 2> center, double radius, int boundary_nodes = 256);
    static Domain grid(Axis ax0, Axis ax1, std::vector<std::uint8_t> interior_mask);

    Kind kind() const { return kind_; }
    int dim() const { return kind_ == Kind::Interval ? 1 : 2; }

    double a() const { return a_; }
    double b() const { return b_; }
    std::array<double, 2> center() const { return center_; }
    double radius() const { return radius_; }
    const Axis &grid_axis(int k) const { return grid_axes_[static_cast<size_t>(k)]; }
    bool interior_cell(int i, int j) const { return mask_[static_cast<size_t>(i) * grid_axes_[1].count + j] != 0; }
    const std::vector<std::uint8_t> &mask() const { return mask_; }

    int boundary_count() const;
    // Position of boundary node i (1-D coordinates padded with 0 for intervals).
    std::array<double, 2> boundary_node(int i) const;
    double boundary_angle(int i) const; // Disk only
    const std::vector<std::array<int, 2>> &grid_boundary_cells() const { return grid_boundary_; }

    bool is_interior_point(const std::vector<double> &x) const;

  private:
    Domain() = default;
    Kind kind_ = Kind::Interval;
    double a_ = 0.0, b_ = 1.0;
    std::array<double, 2> center_{0.0, 0.0};
    double radius_ = 1.0;
    int disk_nodes_ = 256;
    std::array<Axis, 2> grid_axes_{};
    std::vector<std::uint8_t> mask_;
    std::vector<std::array<int, 2>> grid_boundary_;
};

} // namespace fstar
