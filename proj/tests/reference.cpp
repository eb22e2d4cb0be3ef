#include "reference.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fstar::reference {

double conjugate_at(const GridFn &f, const std::vector<double> &u) {
    double best = -kInf;
    for (std::int64_t fl = 0; fl < f.size(); ++fl) {
        double v = f[fl];
        if (v == kInf) continue;
        std::vector<double> y = f.coords(f.multi_index(fl));
        double dot = 0.0;
        for (size_t k = 0; k < y.size(); ++k) dot += y[k] * u[k];
        best = std::max(best, dot - v);
    }
    if (best == -kInf) throw std::invalid_argument("conjugate_at: empty effective domain");
    return best;
}

SymMat congruence_product(const BlockSym &A, const Mat &gamma) {
    const int n = A.n(), m = A.m();
    // I on top of Gamma: (n+m) x n.
    std::vector<std::vector<double>> J(static_cast<size_t>(n + m), std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) J[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) J[static_cast<size_t>(n + i)][static_cast<size_t>(j)] = gamma(i, j);
    SymMat out(n);
    for (int p = 0; p < n; ++p)
        for (int q = p; q < n; ++q) {
            double s = 0.0;
            for (int i = 0; i < n + m; ++i)
                for (int j = 0; j < n + m; ++j)
                    s += J[static_cast<size_t>(i)][static_cast<size_t>(p)] * A.full()(i, j) *
                         J[static_cast<size_t>(j)][static_cast<size_t>(q)];
            out.set(p, q, s);
        }
    return out;
}

double sup_convolution_at(const GridFn &psi, double eps, const std::vector<double> &z) {
    double best = -kInf;
    for (std::int64_t fl = 0; fl < psi.size(); ++fl) {
        std::vector<double> zp = psi.coords(psi.multi_index(fl));
        double d2 = 0.0;
        for (size_t k = 0; k < zp.size(); ++k) d2 += (z[k] - zp[k]) * (z[k] - zp[k]);
        best = std::max(best, psi[fl] - d2 / (2.0 * eps));
    }
    return best;
}

bool positive_definite(const SymMat &A) {
    const int n = A.dim();
    std::vector<double> L(static_cast<size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) {
        double d = A(j, j);
        for (int k = 0; k < j; ++k) d -= L[static_cast<size_t>(j) * n + k] * L[static_cast<size_t>(j) * n + k];
        if (!(d > 0.0)) return false;
        double lj = std::sqrt(d);
        L[static_cast<size_t>(j) * n + j] = lj;
        for (int i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (int k = 0; k < j; ++k) s -= L[static_cast<size_t>(i) * n + k] * L[static_cast<size_t>(j) * n + k];
            L[static_cast<size_t>(i) * n + j] = s / lj;
        }
    }
    return true;
}

bool graph_sampling_member_trace(const BlockSym &A, int n_samples, double scale_max, std::uint64_t seed,
                                 double margin) {
    const int n = A.n(), m = A.m();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    if (A.fiber_block().min_eigenvalue() < -margin) return false;
    std::vector<double> scales{1.0, 10.0, 100.0, 1000.0};
    for (double &s : scales) s = std::min(s, scale_max);
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < n; ++l)
            for (double s : scales)
                for (double sign : {1.0, -1.0}) {
                    Mat g(m, n);
                    g(k, l) = sign * s;
                    if (congruence_product(A, g).trace() < -margin) return false;
                }
    // A coarse lattice scan for small blocks catches interior minimizers that
    // sparse random sampling would miss.
    if (n * m <= 2) {
        std::vector<double> lattice;
        for (double v = -3.0; v <= 3.0 + 1e-12; v += 0.25) lattice.push_back(v);
        std::vector<size_t> idx(static_cast<size_t>(n * m), 0);
        for (;;) {
            Mat g(m, n);
            for (size_t k = 0; k < idx.size(); ++k) g.a[k] = lattice[idx[k]];
            if (congruence_product(A, g).trace() < -margin) return false;
            size_t k = 0;
            while (k < idx.size() && ++idx[k] == lattice.size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }
    for (int t = 0; t < n_samples; ++t) {
        Mat g(m, n);
        double s = scales[static_cast<size_t>(t) % scales.size()];
        for (double &v : g.a) v = s * unit(rng);
        if (congruence_product(A, g).trace() < -margin) return false;
    }
    return true;
}

} // namespace fstar::reference
