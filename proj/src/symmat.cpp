#include "fstar/symmat.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace fstar {

SymMat::SymMat(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {
    if (n <= 0) throw std::invalid_argument("SymMat: dimension must be positive");
}

SymMat::SymMat(int n, std::vector<double> entries) : n_(n), a_(std::move(entries)) {
    if (n <= 0) throw std::invalid_argument("SymMat: dimension must be positive");
    if (a_.size() != static_cast<size_t>(n) * n) throw std::invalid_argument("SymMat: entry count mismatch");
    double scale = 0.0, asym = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            scale = std::max(scale, std::abs((*this)(i, j)));
            asym = std::max(asym, std::abs((*this)(i, j) - (*this)(j, i)));
        }
    if (asym > 1e-12 * std::max(1.0, scale)) throw std::invalid_argument("SymMat: input not symmetric");
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
            a_[static_cast<size_t>(i) * n_ + j] = v;
            a_[static_cast<size_t>(j) * n_ + i] = v;
        }
}

SymMat SymMat::identity(int n) {
    SymMat m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

SymMat SymMat::diag(const std::vector<double> &d) {
    SymMat m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n_; ++i) m.set(i, i, d[static_cast<size_t>(i)]);
    return m;
}

SymMat SymMat::outer(const std::vector<double> &v) {
    SymMat m(static_cast<int>(v.size()));
    for (int i = 0; i < m.n_; ++i)
        for (int j = 0; j < m.n_; ++j) m.a_[static_cast<size_t>(i) * m.n_ + j] = v[i] * v[j];
    return m;
}

void SymMat::set(int i, int j, double v) {
    a_[static_cast<size_t>(i) * n_ + j] = v;
    a_[static_cast<size_t>(j) * n_ + i] = v;
}

SymMat SymMat::operator+(const SymMat &o) const {
    if (n_ != o.n_) throw std::invalid_argument("SymMat: dimension mismatch");
    SymMat r(n_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

SymMat SymMat::operator-(const SymMat &o) const {
    if (n_ != o.n_) throw std::invalid_argument("SymMat: dimension mismatch");
    SymMat r(n_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

SymMat SymMat::operator-() const {
    SymMat r(n_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = -a_[k];
    return r;
}

SymMat SymMat::operator*(double t) const {
    SymMat r(n_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = t * a_[k];
    return r;
}

SymMat operator*(double t, const SymMat &a) { return a * t; }

double SymMat::trace() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += (*this)(i, i);
    return s;
}

double SymMat::dot(const SymMat &o) const {
    if (n_ != o.n_) throw std::invalid_argument("SymMat: dimension mismatch");
    double s = 0.0;
    for (size_t k = 0; k < a_.size(); ++k) s += a_[k] * o.a_[k];
    return s;
}

double SymMat::max_abs() const {
    double s = 0.0;
    for (double v : a_) s = std::max(s, std::abs(v));
    return s;
}

void SymMat::eigh(std::vector<double> &w, std::vector<double> &V) const {
    Eigen::Map<const Eigen::MatrixXd> m(a_.data(), n_, n_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw std::runtime_error("SymMat: eigendecomposition failed");
    w.assign(es.eigenvalues().data(), es.eigenvalues().data() + n_);
    V.assign(es.eigenvectors().data(), es.eigenvectors().data() + static_cast<size_t>(n_) * n_);
}

std::vector<double> SymMat::eigenvalues() const {
    std::vector<double> w, V;
    eigh(w, V);
    return w;
}

double SymMat::min_eigenvalue() const { return eigenvalues().front(); }
double SymMat::max_eigenvalue() const { return eigenvalues().back(); }

} // namespace fstar
