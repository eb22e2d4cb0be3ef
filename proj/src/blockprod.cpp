#include "fstar/blockprod.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fstar {

Mat Mat::transpose() const {
    Mat t(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Mat::max_abs() const {
    double s = 0.0;
    for (double v : a) s = std::max(s, std::abs(v));
    return s;
}

Mat matmul(const Mat &a, const Mat &b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
    Mat r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            double v = a(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) r(i, j) += v * b(k, j);
        }
    return r;
}

BlockSym::BlockSym(int n, int m, SymMat a) : n_(n), m_(m), a_(std::move(a)) {
    if (n < 1 || m < 1) throw std::invalid_argument("BlockSym: block dimensions must be positive");
    if (a_.dim() != n + m) throw std::invalid_argument("BlockSym: matrix dimension must be n + m");
}

SymMat BlockSym::base_block() const {
    SymMat b(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) b.set(i, j, a_(i, j));
    return b;
}

SymMat BlockSym::fiber_block() const {
    SymMat d(m_);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) d.set(i, j, a_(n_ + i, n_ + j));
    return d;
}

Mat BlockSym::coupling() const {
    Mat c(n_, m_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < m_; ++j) c(i, j) = a_(i, n_ + j);
    return c;
}

SymMat restrict_graph(const BlockSym &A, const Mat &gamma) {
    if (gamma.rows != A.m() || gamma.cols != A.n()) throw std::invalid_argument("restrict_graph: slope must be m x n");
    const int n = A.n();
    SymMat B = A.base_block();
    Mat C = A.coupling();
    SymMat D = A.fiber_block();

    Mat CG = matmul(C, gamma); // n x n
    Mat Dmat(A.m(), A.m());
    for (int i = 0; i < A.m(); ++i)
        for (int j = 0; j < A.m(); ++j) Dmat(i, j) = D(i, j);
    Mat GtDG = matmul(gamma.transpose(), matmul(Dmat, gamma)); // n x n

    SymMat r(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = B(i, j) + CG(i, j) + CG(j, i) + 0.5 * (GtDG(i, j) + GtDG(j, i));
            r.set(i, j, v);
        }
    return r;
}

SymMat project_fiber(const BlockSym &A) { return A.fiber_block(); }

SymMat pseudo_inverse(const SymMat &D, double tol) {
    std::vector<double> w, V;
    D.eigh(w, V);
    const int n = D.dim();
    double wmax = 0.0;
    for (double v : w) wmax = std::max(wmax, std::abs(v));
    SymMat r(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                double lam = w[static_cast<size_t>(k)];
                if (std::abs(lam) <= tol * wmax) continue;
                s += V[static_cast<size_t>(k) * n + i] * V[static_cast<size_t>(k) * n + j] / lam;
            }
            r.set(i, j, s);
        }
    return r;
}

namespace {

// Column-major orthonormal basis of the common kernel of psd generators,
// via the kernel of their sum.
std::pair<std::vector<double>, int> common_kernel(const std::vector<HalfSpace> &hs, int n) {
    SymMat s(n);
    for (const HalfSpace &h : hs) s = s + h.U * (1.0 / std::max(1.0, h.U.max_abs()));
    std::vector<double> w, V;
    s.eigh(w, V);
    double wmax = std::max(1e-300, std::abs(w.back()));
    std::vector<double> dirs;
    int k = 0;
    for (int i = 0; i < n; ++i)
        if (std::abs(w[static_cast<size_t>(i)]) <= 1e-10 * wmax) {
            dirs.insert(dirs.end(), V.begin() + static_cast<std::ptrdiff_t>(i) * n,
                        V.begin() + static_cast<std::ptrdiff_t>(i + 1) * n);
            ++k;
        }
    return {dirs, k};
}

} // namespace

NullSpace null_space(const DirichletSet &F, int m) {
    if (m < 1) throw std::invalid_argument("null_space: m must be positive");
    NullSpace ns;
    switch (F.kind()) {
        case DirichletSet::Kind::PosCone:
        case DirichletSet::Kind::TraceCone:
            return ns; // {0}
        case DirichletSet::Kind::HalfSpaces: {
            ns.generator_based = true;
            auto [dirs, k] = common_kernel(F.halfspaces(), F.dim());
            ns.kernel_dirs = dirs;
            ns.kernel_dim = k;
            const int n = F.dim();
            for (int kk = 0; kk < k; ++kk)
                for (int j = 0; j < m; ++j) {
                    Mat b(n, m);
                    for (int i = 0; i < n; ++i) b(i, j) = dirs[static_cast<size_t>(kk) * n + i];
                    ns.basis.push_back(std::move(b));
                }
            return ns;
        }
        case DirichletSet::Kind::EigenCone:
            throw std::invalid_argument("null_space: EigenCone unsupported");
    }
    return ns;
}

ProductReport product_contains(const DirichletSet &F, const BlockSym &A, double margin) {
    if (!F.is_convex()) throw std::invalid_argument("product_contains: characterization requires convex F");
    if (F.dim() != A.n()) throw std::invalid_argument("product_contains: base dimension mismatch");

    ProductReport rep;
    SymMat D = A.fiber_block();
    Mat C = A.coupling();
    rep.fiber_margin = D.min_eigenvalue();

    SymMat Dp = pseudo_inverse(D);
    Mat Dpm(A.m(), A.m()), Dm(A.m(), A.m());
    for (int i = 0; i < A.m(); ++i)
        for (int j = 0; j < A.m(); ++j) {
            Dpm(i, j) = Dp(i, j);
            Dm(i, j) = D(i, j);
        }

    // Residual of C (I - D^+ D) against span nul(F).
    Mat IDpD(A.m(), A.m());
    Mat DpD = matmul(Dpm, Dm);
    for (int i = 0; i < A.m(); ++i)
        for (int j = 0; j < A.m(); ++j) IDpD(i, j) = (i == j ? 1.0 : 0.0) - DpD(i, j);
    Mat resid = matmul(C, IDpD); // n x m
    NullSpace ns = null_space(F, A.m());
    rep.generator_based_null = ns.generator_based;
    if (ns.kernel_dim > 0) {
        // Project each column of resid off the common kernel in R^n.
        const int n = A.n();
        for (int j = 0; j < A.m(); ++j)
            for (int k = 0; k < ns.kernel_dim; ++k) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += resid(i, j) * ns.kernel_dirs[static_cast<size_t>(k) * n + i];
                for (int i = 0; i < n; ++i) resid(i, j) -= dot * ns.kernel_dirs[static_cast<size_t>(k) * n + i];
            }
    }
    rep.null_residual = resid.max_abs();

    // Schur part B - C D^+ C^T.
    Mat CDp = matmul(C, Dpm);          // n x m
    Mat S = matmul(CDp, C.transpose()); // n x n
    SymMat B = A.base_block();
    SymMat schur(A.n());
    for (int i = 0; i < A.n(); ++i)
        for (int j = i; j < A.n(); ++j) schur.set(i, j, B(i, j) - 0.5 * (S(i, j) + S(j, i)));
    rep.schur_margin = membership_margin(F, schur);

    double scale = std::max(1.0, A.full().max_abs());
    if (rep.null_residual > std::max(margin, 1e-12) * scale) {
        rep.region = Region::Exterior;
        rep.margin = -rep.null_residual;
        return rep;
    }
    rep.margin = std::min(rep.fiber_margin, rep.schur_margin);
    if (rep.margin > margin)
        rep.region = Region::Interior;
    else if (rep.margin < -margin)
        rep.region = Region::Exterior;
    else
        rep.region = Region::Boundary;
    return rep;
}

SampledProductReport product_contains_sampled(const DirichletSet &F, const BlockSym &A, int n_samples,
                                              double scale_max, std::uint64_t rng_seed, double margin) {
    const int n = A.n(), m = A.m();
    SymMat D = A.fiber_block();
    Mat C = A.coupling();

    SampledProductReport rep;
    rep.fiber_margin = D.min_eigenvalue();
    rep.worst_margin = kInf;
    rep.worst_gamma = Mat(m, n);

    std::vector<double> scales;
    for (double s = 1.0; s <= scale_max * (1.0 + 1e-12); s *= 10.0) scales.push_back(s);
    if (scales.empty()) scales.push_back(scale_max);

    std::vector<Mat> probes;
    probes.emplace_back(m, n); // zero slope

    for (int k = 0; k < m; ++k)
        for (int l = 0; l < n; ++l)
            for (double s : scales)
                for (double sign : {1.0, -1.0}) {
                    Mat g(m, n);
                    g(k, l) = sign * s;
                    probes.push_back(std::move(g));
                }

    // Schur minimizer -D^+ C^T and nearby rescalings.
    {
        SymMat Dp = pseudo_inverse(D);
        Mat Dpm(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) Dpm(i, j) = Dp(i, j);
        Mat g0 = matmul(Dpm, C.transpose()); // m x n
        for (double t : {-1.0, -0.5, -1.5, 1.0}) {
            Mat g(m, n);
            for (size_t i = 0; i < g.a.size(); ++i) g.a[i] = t * g0.a[i];
            probes.push_back(std::move(g));
        }
    }

    // Rays along the smallest eigenvector of D catch indefinite fiber blocks.
    {
        std::vector<double> w, V;
        D.eigh(w, V);
        for (int l = 0; l < n; ++l)
            for (double s : scales)
                for (double sign : {1.0, -1.0}) {
                    Mat g(m, n);
                    for (int i = 0; i < m; ++i) g(i, l) = sign * s * V[static_cast<size_t>(i)];
                    probes.push_back(std::move(g));
                }
    }

    // Kernel-aligned rays (I - D^+ D) (U C)^T expose null-space violations.
    {
        SymMat Dp = pseudo_inverse(D);
        Mat Dpm(m, m), Dm(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                Dpm(i, j) = Dp(i, j);
                Dm(i, j) = D(i, j);
            }
        Mat DpD = matmul(Dpm, Dm);
        Mat P(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) P(i, j) = (i == j ? 1.0 : 0.0) - DpD(i, j);
        std::vector<SymMat> normals;
        if (F.kind() == DirichletSet::Kind::HalfSpaces)
            for (const HalfSpace &h : F.halfspaces()) normals.push_back(h.U);
        else
            normals.push_back(SymMat::identity(n));
        for (const SymMat &U : normals) {
            Mat Um(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) Um(i, j) = U(i, j);
            Mat ray = matmul(P, matmul(Um, C).transpose()); // m x n
            if (ray.max_abs() == 0.0) continue;
            for (double s : scales)
                for (double sign : {1.0, -1.0}) {
                    Mat g(m, n);
                    for (size_t i = 0; i < g.a.size(); ++i) g.a[i] = sign * s * ray.a[i] / ray.max_abs();
                    probes.push_back(std::move(g));
                }
        }
    }

    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int s = 0; s < n_samples; ++s) {
        double sc = scales[static_cast<size_t>(s) % scales.size()];
        Mat g(m, n);
        for (double &v : g.a) v = sc * unit(rng);
        probes.push_back(std::move(g));
    }

    for (const Mat &g : probes) {
        double mgn = membership_margin(F, restrict_graph(A, g));
        ++rep.probes;
        if (mgn < rep.worst_margin) {
            rep.worst_margin = mgn;
            rep.worst_gamma = g;
        }
        if (mgn < -margin) ++rep.exterior_hits;
    }

    double combined = std::min(rep.worst_margin, rep.fiber_margin);
    if (combined < -margin)
        rep.region = Region::Exterior;
    else if (combined > margin)
        rep.region = Region::Interior;
    else
        rep.region = Region::Boundary;
    return rep;
}

} // namespace fstar
