#include "fstar/domain.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

namespace fstar {

Domain Domain::interval(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("Domain: interval needs a < b");
    Domain d;
    d.kind_ = Kind::Interval;
    d.a_ = a;
    d.b_ = b;
    return d;
}

Domain Domain::disk(std::array<double, 2> center, double radius, int boundary_nodes) {
    if (!(radius > 0)) throw std::invalid_argument("Domain: disk radius must be positive");
    if (boundary_nodes < 3) throw std::invalid_argument("Domain: disk needs at least 3 boundary nodes");
    Domain d;
    d.kind_ = Kind::Disk;
    d.center_ = center;
    d.radius_ = radius;
    d.disk_nodes_ = boundary_nodes;
    return d;
}

Domain Domain::grid(Axis ax0, Axis ax1, std::vector<std::uint8_t> interior_mask) {
    ax0.validate();
    ax1.validate();
    if (interior_mask.size() != static_cast<size_t>(ax0.count) * ax1.count)
        throw std::invalid_argument("Domain: mask size mismatch");
    Domain d;
    d.kind_ = Kind::Grid;
    d.grid_axes_ = {ax0, ax1};
    d.mask_ = std::move(interior_mask);

    auto in_mask = [&](int i, int j) {
        return i >= 0 && i < ax0.count && j >= 0 && j < ax1.count && d.mask_[static_cast<size_t>(i) * ax1.count + j] != 0;
    };

    // Connectivity: every interior cell reachable from the first one.
    int start_i = -1, start_j = -1, total = 0;
    for (int i = 0; i < ax0.count; ++i)
        for (int j = 0; j < ax1.count; ++j)
            if (in_mask(i, j)) {
                if (start_i < 0) {
                    start_i = i;
                    start_j = j;
                }
                ++total;
            }
    if (total == 0) throw std::invalid_argument("Domain: mask interior is empty");
    std::vector<std::uint8_t> seen(d.mask_.size(), 0);
    std::queue<std::array<int, 2>> q;
    q.push({start_i, start_j});
    seen[static_cast<size_t>(start_i) * ax1.count + start_j] = 1;
    int reached = 0;
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    while (!q.empty()) {
        auto [i, j] = q.front();
        q.pop();
        ++reached;
        for (int k = 0; k < 4; ++k)
            if (in_mask(i + di[k], j + dj[k]) && !seen[static_cast<size_t>(i + di[k]) * ax1.count + j + dj[k]]) {
                seen[static_cast<size_t>(i + di[k]) * ax1.count + j + dj[k]] = 1;
                q.push({i + di[k], j + dj[k]});
            }
    }
    if (reached != total) throw std::invalid_argument("Domain: mask interior is disconnected");

    // Boundary cells: non-interior cells 4-adjacent to the interior, in row-major order.
    for (int i = 0; i < ax0.count; ++i)
        for (int j = 0; j < ax1.count; ++j) {
            if (in_mask(i, j)) continue;
            bool adj = false;
            for (int k = 0; k < 4; ++k) adj = adj || in_mask(i + di[k], j + dj[k]);
            if (adj) d.grid_boundary_.push_back({i, j});
        }
    if (d.grid_boundary_.empty()) throw std::invalid_argument("Domain: interior has no boundary ring (mask fills the grid)");
    return d;
}

int Domain::boundary_count() const {
    switch (kind_) {
        case Kind::Interval: return 2;
        case Kind::Disk: return disk_nodes_;
        case Kind::Grid: return static_cast<int>(grid_boundary_.size());
    }
    return 0;
}

double Domain::boundary_angle(int i) const {
    if (kind_ != Kind::Disk) throw std::logic_error("Domain: boundary_angle is disk-only");
    return 2.0 * M_PI * i / disk_nodes_;
}

std::array<double, 2> Domain::boundary_node(int i) const {
    switch (kind_) {
        case Kind::Interval: return {i == 0 ? a_ : b_, 0.0};
        case Kind::Disk: {
            double th = boundary_angle(i);
            return {center_[0] + radius_ * std::cos(th), center_[1] + radius_ * std::sin(th)};
        }
        case Kind::Grid: {
            const auto &c = grid_boundary_[static_cast<size_t>(i)];
            return {grid_axes_[0].coord(c[0]), grid_axes_[1].coord(c[1])};
        }
    }
    return {0.0, 0.0};
}

bool Domain::is_interior_point(const std::vector<double> &x) const {
    switch (kind_) {
        case Kind::Interval: return x.size() == 1 && x[0] > a_ && x[0] < b_;
        case Kind::Disk: {
            if (x.size() != 2) return false;
            double dx = x[0] - center_[0], dy = x[1] - center_[1];
            return dx * dx + dy * dy < radius_ * radius_;
        }
        case Kind::Grid: {
            if (x.size() != 2) return false;
            int i = static_cast<int>(std::lround((x[0] - grid_axes_[0].lo) / grid_axes_[0].step()));
            int j = static_cast<int>(std::lround((x[1] - grid_axes_[1].lo) / grid_axes_[1].step()));
            return i >= 0 && i < grid_axes_[0].count && j >= 0 && j < grid_axes_[1].count && interior_cell(i, j);
        }
    }
    return false;
}

} // namespace fstar
