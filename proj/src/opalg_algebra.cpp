#include "banachlab/opalg.hpp"

#include <cmath>

namespace banachlab::opalg {

namespace {

Complex frob_inner(const CMat& A, const CMat& B) { return (B.adjoint() * A).trace(); }

// Gram-Schmidt append; returns true when M enlarged the span.
bool add_to_span(std::vector<CMat>& ortho, const CMat& M, double tol) {
    CMat R = M;
    for (const CMat& O : ortho) R -= frob_inner(R, O) * O;
    // One re-orthogonalization pass for numerical hygiene.
    for (const CMat& O : ortho) R -= frob_inner(R, O) * O;
    double rn = R.norm();
    if (rn <= tol * std::max(1.0, M.norm())) return false;
    ortho.push_back(R / rn);
    return true;
}

} // namespace

MatrixAlgebra algebra_closure(const std::vector<CMat>& gens) {
    if (gens.empty()) throw PreconditionError("need at least one generator");
    const Eigen::Index n = gens.front().rows();
    for (const CMat& G : gens) {
        check_matrix(G);
        if (G.rows() != n) throw PreconditionError("generators must share a dimension");
    }

    const double tol = 1e-10;
    MatrixAlgebra alg;
    for (const CMat& G : gens)
        if (add_to_span(alg.ortho, G, tol)) alg.basis.push_back(G);

    // Multiply out until the span stabilizes; dimension <= n^2 bounds the loop.
    bool grew = true;
    while (grew) {
        grew = false;
        const std::size_t d = alg.ortho.size();
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                CMat prod = alg.ortho[i] * alg.ortho[j];
                if (add_to_span(alg.ortho, prod, tol)) {
                    alg.basis.push_back(prod);
                    grew = true;
                }
            }
        }
        if (alg.ortho.size() >= static_cast<std::size_t>(n * n)) break;
    }
    return alg;
}

double frobenius_distance(const MatrixAlgebra& alg, const CMat& A) {
    CMat R = A;
    for (const CMat& O : alg.ortho) R -= frob_inner(R, O) * O;
    return R.norm();
}

bool contains(const MatrixAlgebra& alg, const CMat& A, double tol) {
    return frobenius_distance(alg, A) <= tol * std::max(1.0, A.norm());
}

bool is_triangular_algebra(const MatrixAlgebra& alg, double tol) {
    // Triangularity is checked on the orthonormal basis and pairwise sums; the
    // flag construction itself is the definitive test and errors otherwise.
    for (const CMat& O : alg.ortho)
        if (!is_triangular_element(O, tol)) return false;
    for (std::size_t i = 0; i < alg.ortho.size(); ++i)
        for (std::size_t j = i + 1; j < alg.ortho.size(); ++j) {
            CMat S = (alg.ortho[i] + alg.ortho[j]) / std::sqrt(2.0);
            if (!is_triangular_element(S, tol)) return false;
        }
    return true;
}

CMat triangularize(const MatrixAlgebra& alg) {
    if (alg.ortho.empty()) throw PreconditionError("empty algebra");
    const Eigen::Index n = alg.ortho.front().rows();
    if (!is_triangular_algebra(alg, 1e-7))
        throw PreconditionError("algebra is not triangular");

    // Trace-zero ideal basis from the kernel of the trace functional.
    std::vector<CMat> ideal;
    {
        const Eigen::Index d = static_cast<Eigen::Index>(alg.ortho.size());
        CVec traces(d);
        for (Eigen::Index i = 0; i < d; ++i)
            traces[i] = alg.ortho[static_cast<std::size_t>(i)].trace();
        if (traces.norm() < 1e-12) {
            ideal = alg.ortho;  // the whole span is trace-zero
        } else {
            Eigen::JacobiSVD<CMat> svd(traces.transpose(), Eigen::ComputeFullV);
            CMat V = svd.matrixV();
            for (Eigen::Index c = 1; c < d; ++c) {
                CMat S = CMat::Zero(n, n);
                for (Eigen::Index i = 0; i < d; ++i)
                    S += V(i, c) * alg.ortho[static_cast<std::size_t>(i)];
                double sn = S.norm();
                if (sn > 1e-12) ideal.push_back(S / sn);
            }
        }
    }

    // Invariant flag: at step k find x with ideal * x inside E_{k-1}, i.e. the
    // kernel of the stacked perpendicular actions, then take its component
    // orthogonal to the current flag.
    CMat flag(n, 0);
    for (Eigen::Index k = 0; k < n; ++k) {
        CMat perp = CMat::Identity(n, n) - flag * flag.adjoint();
        CVec dir;
        if (ideal.empty()) {
            // Zero ideal: any completion works; take the best coordinate.
            Eigen::Index pick = 0;
            double bestn = -1.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                double pn = (perp * CMat::Identity(n, n).col(j)).norm();
                if (pn > bestn + 1e-12) { bestn = pn; pick = j; }
            }
            dir = perp * CMat::Identity(n, n).col(pick);
        } else {
            CMat stacked(static_cast<Eigen::Index>(ideal.size()) * n, n);
            for (std::size_t j = 0; j < ideal.size(); ++j)
                stacked.middleRows(static_cast<Eigen::Index>(j) * n, n) = perp * ideal[j];
            Eigen::JacobiSVD<CMat> svd(stacked, Eigen::ComputeFullV);
            const auto& sv = svd.singularValues();
            double smax = sv.size() ? std::max(sv[0], 1.0) : 1.0;
            CMat V = svd.matrixV();
            double bestn = -1.0;
            Eigen::Index pick = -1;
            for (Eigen::Index c = 0; c < V.cols(); ++c) {
                if (c < sv.size() && sv[c] > 1e-7 * smax) continue;  // not in kernel
                double pn = (perp * V.col(c)).norm();
                if (pn > bestn + 1e-12) { bestn = pn; pick = c; }
            }
            if (pick < 0 || bestn <= 1e-8)
                throw ConditioningError("no admissible flag vector at step " +
                                        std::to_string(k + 1) + ": not triangular");
            dir = perp * V.col(pick);
        }
        dir /= dir.norm();
        flag.conservativeResize(n, k + 1);
        flag.col(k) = dir;
    }

    // e_k = flag direction of E_{n-k+1}: reverse the flag order.
    CMat U(n, n);
    for (Eigen::Index k = 0; k < n; ++k) U.col(k) = flag.col(n - 1 - k);

    // Post: every ideal member is zero on (e_j, A e_k), j <= k.
    for (const CMat& S : ideal) {
        CMat Bm = U.adjoint() * S * U;
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index kk = j; kk < n; ++kk)
                if (std::abs(Bm(j, kk)) > 1e-8)
                    throw ConditioningError("triangularization residual above 1e-8");
    }
    return U;
}

} // namespace banachlab::opalg
