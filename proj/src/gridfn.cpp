#include "fstar/gridfn.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fstar {

void Axis::validate() const {
    if (count < 2) throw std::invalid_argument("Axis: count must be >= 2");
    if (!(hi > lo)) throw std::invalid_argument("Axis: hi must exceed lo");
}

GridFn::GridFn(std::vector<Axis> axes, double fill) : axes_(std::move(axes)) {
    if (axes_.empty()) throw std::invalid_argument("GridFn: needs at least one axis");
    std::int64_t n = 1;
    for (const Axis &a : axes_) {
        a.validate();
        n *= a.count;
    }
    values_.assign(static_cast<size_t>(n), fill);
}

std::int64_t GridFn::flat_index(const std::vector<int> &idx) const {
    std::int64_t f = 0;
    for (int k = 0; k < rank(); ++k) {
        int i = idx[static_cast<size_t>(k)];
        if (i < 0 || i >= axes_[static_cast<size_t>(k)].count) throw std::out_of_range("GridFn: index out of range");
        f = f * axes_[static_cast<size_t>(k)].count + i;
    }
    return f;
}

std::vector<int> GridFn::multi_index(std::int64_t flat) const {
    std::vector<int> idx(static_cast<size_t>(rank()));
    for (int k = rank() - 1; k >= 0; --k) {
        int c = axes_[static_cast<size_t>(k)].count;
        idx[static_cast<size_t>(k)] = static_cast<int>(flat % c);
        flat /= c;
    }
    return idx;
}

std::vector<double> GridFn::coords(const std::vector<int> &idx) const {
    std::vector<double> c(static_cast<size_t>(rank()));
    for (int k = 0; k < rank(); ++k) c[static_cast<size_t>(k)] = axes_[static_cast<size_t>(k)].coord(idx[static_cast<size_t>(k)]);
    return c;
}

double GridFn::sample(const std::vector<double> &point) const {
    if (static_cast<int>(point.size()) != rank()) throw std::invalid_argument("GridFn::sample: point rank mismatch");
    std::vector<int> base(static_cast<size_t>(rank()));
    std::vector<double> frac(static_cast<size_t>(rank()));
    for (int k = 0; k < rank(); ++k) {
        const Axis &a = axes_[static_cast<size_t>(k)];
        double t = (point[static_cast<size_t>(k)] - a.lo) / a.step();
        if (t < -1e-9 || t > a.count - 1 + 1e-9) throw std::out_of_range("GridFn::sample: point outside grid");
        t = std::min(std::max(t, 0.0), static_cast<double>(a.count - 1));
        int i = std::min(static_cast<int>(t), a.count - 2);
        base[static_cast<size_t>(k)] = i;
        frac[static_cast<size_t>(k)] = t - i;
    }
    double acc = 0.0;
    const int corners = 1 << rank();
    std::vector<int> idx(static_cast<size_t>(rank()));
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        for (int k = 0; k < rank(); ++k) {
            bool hi = (c >> k) & 1;
            idx[static_cast<size_t>(k)] = base[static_cast<size_t>(k)] + (hi ? 1 : 0);
            w *= hi ? frac[static_cast<size_t>(k)] : 1.0 - frac[static_cast<size_t>(k)];
        }
        double v = at(idx);
        if (std::isinf(v)) return kInf;
        acc += w * v;
    }
    return acc;
}

void GridFn::set_split(int n_x) {
    if (n_x < 1 || n_x >= rank()) throw std::invalid_argument("GridFn: split must leave both x- and y-axes");
    split_ = n_x;
}

double GridFn::max_abs_finite() const {
    double s = 0.0;
    for (double v : values_)
        if (std::isfinite(v)) s = std::max(s, std::abs(v));
    return s;
}

std::int64_t GridFn::count_finite() const {
    std::int64_t n = 0;
    for (double v : values_)
        if (std::isfinite(v)) ++n;
    return n;
}

std::string format_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_value(const std::string &s) {
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad numeric literal: " + s);
    return v;
}

void GridFn::write_csv(std::ostream &os) const {
    for (int k = 0; k < rank(); ++k) os << "c" << k << ",";
    os << "value\n";
    for (std::int64_t f = 0; f < size(); ++f) {
        std::vector<double> c = coords(multi_index(f));
        for (double x : c) os << format_value(x) << ",";
        os << format_value(values_[static_cast<size_t>(f)]) << "\n";
    }
}

namespace {
std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}
} // namespace

GridFn GridFn::read_csv(std::istream &is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("GridFn CSV: empty stream");
    int rank = static_cast<int>(split_csv_line(line).size()) - 1;
    if (rank < 1) throw std::runtime_error("GridFn CSV: header needs coordinates and a value column");

    std::vector<std::vector<double>> coords(static_cast<size_t>(rank));
    std::vector<double> vals;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != rank + 1) throw std::runtime_error("GridFn CSV: ragged row");
        for (int k = 0; k < rank; ++k) coords[static_cast<size_t>(k)].push_back(parse_value(cells[static_cast<size_t>(k)]));
        vals.push_back(parse_value(cells.back()));
    }
    if (vals.empty()) throw std::runtime_error("GridFn CSV: no data rows");

    // Recover axes from the node ordering (last axis fastest).
    std::vector<Axis> axes(static_cast<size_t>(rank));
    std::int64_t stride = 1;
    for (int k = rank - 1; k >= 0; --k) {
        const std::vector<double> &c = coords[static_cast<size_t>(k)];
        int count = 1;
        while (stride * count < static_cast<std::int64_t>(c.size()) && c[static_cast<size_t>(stride * count)] != c[0]) ++count;
        axes[static_cast<size_t>(k)] = Axis{c[0], c[static_cast<size_t>(stride * (count - 1))], count};
        stride *= count;
    }
    if (stride != static_cast<std::int64_t>(vals.size())) throw std::runtime_error("GridFn CSV: row count is not a full grid");
    GridFn g(axes);
    g.values_ = std::move(vals);
    return g;
}

void GridFn::write_binary(std::ostream &os) const {
    const char magic[4] = {'F', 'S', 'G', 'F'};
    os.write(magic, 4);
    auto put_u32 = [&os](std::uint32_t v) { os.write(reinterpret_cast<const char *>(&v), 4); };
    auto put_f64 = [&os](double v) { os.write(reinterpret_cast<const char *>(&v), 8); };
    put_u32(1u);
    put_u32(static_cast<std::uint32_t>(rank()));
    put_u32(static_cast<std::uint32_t>(split_ < 0 ? 0 : split_));
    for (const Axis &a : axes_) {
        put_f64(a.lo);
        put_f64(a.hi);
        put_u32(static_cast<std::uint32_t>(a.count));
    }
    os.write(reinterpret_cast<const char *>(values_.data()), static_cast<std::streamsize>(values_.size() * 8));
}

GridFn GridFn::read_binary(std::istream &is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "FSGF", 4) != 0) throw std::runtime_error("GridFn binary: bad magic");
    auto get_u32 = [&is]() {
        std::uint32_t v = 0;
        is.read(reinterpret_cast<char *>(&v), 4);
        return v;
    };
    auto get_f64 = [&is]() {
        double v = 0;
        is.read(reinterpret_cast<char *>(&v), 8);
        return v;
    };
    if (get_u32() != 1u) throw std::runtime_error("GridFn binary: unsupported version");
    int rank = static_cast<int>(get_u32());
    int split = static_cast<int>(get_u32());
    std::vector<Axis> axes(static_cast<size_t>(rank));
    for (Axis &a : axes) {
        a.lo = get_f64();
        a.hi = get_f64();
        a.count = static_cast<int>(get_u32());
    }
    GridFn g(axes);
    is.read(reinterpret_cast<char *>(g.values_.data()), static_cast<std::streamsize>(g.values_.size() * 8));
    if (!is) throw std::runtime_error("GridFn binary: truncated payload");
    if (split > 0) g.set_split(split);
    return g;
}

} // namespace fstar
