#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace fstar {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniformly spaced closed interval [lo, hi] sampled at count nodes.
struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    int count = 2;

    double step() const { return (hi - lo) / (count - 1); }
    double coord(int i) const { return lo + i * step(); }
    void validate() const;
};

// Extended-real-valued function sampled on the tensor grid of its axes.
// Values are stored row-major with the LAST axis fastest.  +inf marks nodes
// outside the effective domain; -inf appears only as the empty-sup sentinel
// inside the Legendre transform.  An optional split designates the leading
// `split` axes as the base (x) block and the rest as the fiber (y) block.
class GridFn {
  public:
    GridFn() = default;
    GridFn(std::vector<Axis> axes, double fill = 0.0);

    int rank() const { return static_cast<int>(axes_.size()); }
    const std::vector<Axis> &axes() const { return axes_; }
    const Axis &axis(int k) const { return axes_[static_cast<size_t>(k)]; }
    std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }

    double operator[](std::int64_t flat) const { return values_[static_cast<size_t>(flat)]; }
    double &operator[](std::int64_t flat) { return values_[static_cast<size_t>(flat)]; }
    const std::vector<double> &values() const { return values_; }
    std::vector<double> &values() { return values_; }

    std::int64_t flat_index(const std::vector<int> &idx) const;
    std::vector<int> multi_index(std::int64_t flat) const;
    std::vector<double> coords(const std::vector<int> &idx) const;

    double at(const std::vector<int> &idx) const { return values_[static_cast<size_t>(flat_index(idx))]; }
    void set(const std::vector<int> &idx, double v) { values_[static_cast<size_t>(flat_index(idx))] = v; }

    // Multilinear interpolation at an arbitrary point inside the grid box.
    // Throws if the point exits the box; returns +inf if any stencil corner is +inf.
    double sample(const std::vector<double> &point) const;

    void set_split(int n_x);
    bool has_split() const { return split_ >= 0; }
    int split() const { return split_; }
    int x_rank() const { return split_; }
    int y_rank() const { return rank() - split_; }

    double max_abs_finite() const; // 0 if no finite values
    std::int64_t count_finite() const;

    // CSV: header row, coordinate columns first, value last, "inf"/"-inf" literals,
    // 17 significant digits.  Binary: "FSGF" magic + axes header + f64 payload.
    void write_csv(std::ostream &os) const;
    static GridFn read_csv(std::istream &is);
    void write_binary(std::ostream &os) const;
    static GridFn read_binary(std::istream &is);

  private:
    std::vector<Axis> axes_;
    std::vector<double> values_;
    int split_ = -1;
};

// Deterministic float formatting shared by every table writer.
std::string format_value(double v);
double parse_value(const std::string &s);

} // namespace fstar
