#include "banachlab/opalg.hpp"

#include <algorithm>
#include <cmath>

namespace banachlab::opalg {

void check_matrix(const CMat& A) {
    if (A.rows() != A.cols()) throw PreconditionError("matrix must be square");
    if (A.rows() < 1 || A.rows() > kMaxDim)
        throw PreconditionError("matrix dimension must lie in [1, 12]");
    if (!A.allFinite()) throw PreconditionError("matrix entries must be finite");
}

Complex trace(const CMat& A) { return A.trace(); }

namespace {

// Householder reduction to upper Hessenberg form (in place, eigenvalues only).
void hessenberg(CMat& H) {
    const Eigen::Index n = H.rows();
    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        CVec x = H.col(k).segment(k + 1, n - k - 1);
        double xn = x.norm();
        if (xn < 1e-300) continue;
        Complex x0 = x[0];
        Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0, 0.0);
        CVec v = x;
        v[0] += phase * xn;
        double vn = v.norm();
        if (vn < 1e-300) continue;
        v /= vn;
        // H <- (I - 2vv^H) H (I - 2vv^H) restricted to the trailing block.
        H.block(k + 1, 0, n - k - 1, n) -= 2.0 * v * (v.adjoint() * H.block(k + 1, 0, n - k - 1, n));
        H.block(0, k + 1, n, n - k - 1) -= 2.0 * (H.block(0, k + 1, n, n - k - 1) * v) * v.adjoint();
        for (Eigen::Index i = k + 2; i < n; ++i) H(i, k) = Complex(0, 0);
    }
}

Complex wilkinson_shift(const CMat& H, Eigen::Index hi) {
    Complex a = H(hi - 1, hi - 1), b = H(hi - 1, hi), c = H(hi, hi - 1), d = H(hi, hi);
    Complex tr = a + d;
    Complex disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
    Complex l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
    return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

// One explicit single-shift QR sweep on the diagonal window [lo, hi].
void qr_sweep(CMat& H, Eigen::Index lo, Eigen::Index hi, Complex shift) {
    const Eigen::Index m = hi - lo + 1;
    std::vector<double> cs(static_cast<std::size_t>(m - 1));
    std::vector<Complex> ss(static_cast<std::size_t>(m - 1));
    for (Eigen::Index i = lo; i < lo + m; ++i) H(i, i) -= shift;
    for (Eigen::Index k = 0; k + 1 < m; ++k) {
        Complex f = H(lo + k, lo + k), g = H(lo + k + 1, lo + k);
        double r = std::hypot(std::abs(f), std::abs(g));
        double c;
        Complex s;
        if (r < 1e-300) {
            c = 1.0;
            s = Complex(0, 0);
        } else if (std::abs(f) < 1e-300) {
            c = 0.0;
            s = std::conj(g) / std::abs(g);
        } else {
            c = std::abs(f) / r;
            s = (f / std::abs(f)) * std::conj(g) / r;
        }
        cs[static_cast<std::size_t>(k)] = c;
        ss[static_cast<std::size_t>(k)] = s;
        for (Eigen::Index j = lo + k; j <= hi; ++j) {
            Complex t1 = H(lo + k, j), t2 = H(lo + k + 1, j);
            H(lo + k, j) = c * t1 + s * t2;
            H(lo + k + 1, j) = -std::conj(s) * t1 + c * t2;
        }
    }
    for (Eigen::Index k = 0; k + 1 < m; ++k) {
        double c = cs[static_cast<std::size_t>(k)];
        Complex s = ss[static_cast<std::size_t>(k)];
        for (Eigen::Index i = lo; i <= std::min(hi, lo + k + 2); ++i) {
            Complex t1 = H(i, lo + k), t2 = H(i, lo + k + 1);
            H(i, lo + k) = c * t1 + std::conj(s) * t2;
            H(i, lo + k + 1) = -s * t1 + c * t2;
        }
    }
    for (Eigen::Index i = lo; i < lo + m; ++i) H(i, i) += shift;
}

bool qr_eigenvalues(CMat H, std::vector<Complex>& out, int iter_cap) {
    const Eigen::Index n = H.rows();
    hessenberg(H);
    const double tiny = 1e-300;
    Eigen::Index hi = n - 1;
    int iters = 0;
    int since_deflation = 0;
    out.clear();
    while (hi >= 0) {
        if (hi == 0) {
            out.push_back(H(0, 0));
            break;
        }
        // Deflation scan from the bottom.
        Eigen::Index lo = hi;
        while (lo > 0) {
            double off = std::abs(H(lo, lo - 1));
            double scale = std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo));
            if (off <= 1e-15 * std::max(scale, tiny)) {
                H(lo, lo - 1) = Complex(0, 0);
                break;
            }
            --lo;
        }
        if (lo == hi) {
            out.push_back(H(hi, hi));
            --hi;
            since_deflation = 0;
            continue;
        }
        if (++iters > iter_cap) return false;
        Complex shift = wilkinson_shift(H, hi);
        if (++since_deflation % 12 == 0)
            shift = H(hi, hi) + Complex(0.75 * std::abs(H(hi, hi - 1)), 0.0);
        qr_sweep(H, lo, hi, shift);
    }
    std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return true;
}

// Characteristic polynomial coefficients via Faddeev-LeVerrier on the scaled
// matrix, then Durand-Kerner root iteration.
bool durand_kerner(const CMat& A, std::vector<Complex>& out) {
    const Eigen::Index n = A.rows();
    const double sigma = std::max(1.0, A.norm());
    CMat B = A / sigma;
    std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
    c[0] = 1.0;
    CMat M = CMat::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        M = B * M;
        Complex ck = -M.trace() / static_cast<double>(k);
        c[static_cast<std::size_t>(k)] = ck;
        M += ck * CMat::Identity(n, n);
    }
    auto poly = [&](Complex z) {
        Complex v = c[0];
        for (Eigen::Index k = 1; k <= n; ++k) v = v * z + c[static_cast<std::size_t>(k)];
        return v;
    };
    double radius = 1.0;
    for (Eigen::Index k = 1; k <= n; ++k)
        radius = std::max(radius, std::abs(c[static_cast<std::size_t>(k)]));
    radius += 1.0;
    std::vector<Complex> z(static_cast<std::size_t>(n));
    Complex seed(0.4, 0.9);
    Complex w = seed;
    for (Eigen::Index i = 0; i < n; ++i) {
        z[static_cast<std::size_t>(i)] = radius * w;
        w *= seed;
    }
    for (int it = 0; it < 1000; ++it) {
        double worst = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            Complex denom(1.0, 0.0);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                denom *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
            }
            if (std::abs(denom) < 1e-300) denom = Complex(1e-300, 0);
            Complex step = poly(z[static_cast<std::size_t>(i)]) / denom;
            z[static_cast<std::size_t>(i)] -= step;
            worst = std::max(worst, std::abs(step));
        }
        if (worst < 1e-15 * radius) break;
    }
    out.clear();
    for (Complex v : z) out.push_back(sigma * v);
    std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return true;
}

bool residuals_ok(const CMat& A, const std::vector<Complex>& eigs) {
    const Eigen::Index n = A.rows();
    const double limit = 1e-7 * std::pow(std::max(1.0, A.norm()), static_cast<double>(n));
    for (Complex lam : eigs) {
        CMat M = A - lam * CMat::Identity(n, n);
        double resid = std::abs(Eigen::FullPivLU<CMat>(M).determinant());
        if (!(resid < limit)) return false;
    }
    return true;
}

} // namespace

std::vector<Complex> eigenvalues(const CMat& A) {
    check_matrix(A);
    const Eigen::Index n = A.rows();
    if (n == 1) return {A(0, 0)};

    std::vector<Complex> out;
    if (qr_eigenvalues(A, out, 500 * static_cast<int>(n)) && residuals_ok(A, out))
        return out;
    if (durand_kerner(A, out) && residuals_ok(A, out)) return out;
    throw ConditioningError("eigenvalue iteration failed the determinant residual check (n=" +
                            std::to_string(n) + ", |A|_F=" + std::to_string(A.norm()) + ")");
}

double spectral_radius(const CMat& A) {
    double r = 0.0;
    for (Complex lam : eigenvalues(A)) r = std::max(r, std::abs(lam));
    return r;
}

bool is_triangular_element(const CMat& A, double tol) {
    check_matrix(A);
    const Eigen::Index n = A.rows();
    CMat C = A - (A.trace() / static_cast<double>(n)) * CMat::Identity(n, n);
    return spectral_radius(C) <= tol;
}

double operator_norm(const CMat& A) {
    if (A.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMat> svd(A);
    return svd.singularValues()[0];
}

} // namespace banachlab::opalg
