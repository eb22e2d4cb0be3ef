#pragma once

#include <initializer_list>
#include <vector>

namespace fstar {

// Dense real symmetric matrix.  Entries are stored row-major and kept
// symmetric by construction; set() writes both (i,j) and (j,i).
class SymMat {
  public:
    SymMat() = default;
    explicit SymMat(int n);
    SymMat(int n, std::vector<double> entries); // symmetrized, throws if badly asymmetric

    static SymMat identity(int n);
    static SymMat diag(const std::vector<double> &d);
    static SymMat outer(const std::vector<double> &v); // v v^T

    int dim() const { return n_; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
    void set(int i, int j, double v);
    const std::vector<double> &entries() const { return a_; }

    SymMat operator+(const SymMat &o) const;
    SymMat operator-(const SymMat &o) const;
    SymMat operator-() const;
    SymMat operator*(double t) const;

    double trace() const;
    double dot(const SymMat &o) const; // tr(A B) for symmetric A, B
    double max_abs() const;

    std::vector<double> eigenvalues() const; // ascending
    double min_eigenvalue() const;
    double max_eigenvalue() const;
    // A = V diag(w) V^T with V column-major orthonormal eigenvectors, w ascending.
    void eigh(std::vector<double> &w, std::vector<double> &V) const;

  private:
    int n_ = 0;
    std::vector<double> a_;
};

SymMat operator*(double t, const SymMat &a);

} // namespace fstar
