#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "banachlab/norm.hpp"
#include "banachlab/rng.hpp"
#include "banachlab/seq_vector.hpp"

namespace banachlab::opalg {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr int kMaxDim = 12;

void check_matrix(const CMat& A);  // square, finite, dimension <= 12

// All complex eigenvalues with algebraic multiplicity, sorted by (re, im).
// Hessenberg reduction plus shifted QR; Durand-Kerner on the characteristic
// polynomial as fallback. Each returned lambda satisfies
// |det(A - lambda I)| < 1e-7 * max(1, ||A||_F)^n.
std::vector<Complex> eigenvalues(const CMat& A);

double spectral_radius(const CMat& A);
Complex trace(const CMat& A);

// r(A - (tr A / n) I) <= tol: scalar plus nilpotent.
bool is_triangular_element(const CMat& A, double tol);

// Operator 2-norm (largest singular value).
double operator_norm(const CMat& A);

// A product-closed matrix span. `basis` are the caller-facing generators of
// the span; `ortho` is a Frobenius-orthonormal basis of the same span used
// for distance computations.
struct MatrixAlgebra {
    std::vector<CMat> basis;
    std::vector<CMat> ortho;
    Eigen::Index dim() const { return static_cast<Eigen::Index>(ortho.size()); }
};

// Span of all words in the generators, iterated until products stabilize.
MatrixAlgebra algebra_closure(const std::vector<CMat>& gens);

// Frobenius distance to the span and membership test.
double frobenius_distance(const MatrixAlgebra& alg, const CMat& A);
bool contains(const MatrixAlgebra& alg, const CMat& A, double tol);

// Every algebra element is scalar plus nilpotent (checked at tol 1e-7).
bool is_triangular_algebra(const MatrixAlgebra& alg, double tol = 1e-7);

// Orthonormal basis (columns e_1..e_N) in which every trace-zero member A
// satisfies (e_j, A e_k) = 0 whenever j <= k; built from the invariant flag
// of the trace-zero ideal. Errors if the algebra is not triangular.
CMat triangularize(const MatrixAlgebra& alg);

struct SpectrumSplit {
    std::vector<Complex> eigenvalues;
    std::vector<int> group_one;  // indices into eigenvalues, 1 <= size < n
    double gap = 0.0;            // min cross-group distance
};

// Partition eigenvalues by connected components at threshold delta/(2n);
// group one is the component containing the eigenvalue of smallest modulus
// (tie: smallest argument). Requires max pairwise distance >= delta.
SpectrumSplit cluster_split(const std::vector<Complex>& eigs, double delta, int n);

struct ProjectionResult {
    CMat P;
    bool polished = false;
    double idempotency_residual = 0.0;
    double commutation_residual = 0.0;
    int rank = 0;
};

// Polynomial spectral projection onto the group-one generalized eigenspace:
//   T = prod_{j in g1} (S - lambda_j I),  mu_k = prod_{j in g1} (lambda_k - lambda_j),
//   W = prod_{k in g2} (T - mu_k I),      P = W / prod_{k in g2} (-mu_k).
// One idempotent-polishing sweep P <- 3P^2 - 2P^3 is applied when needed (and
// recorded); posts are checked at 1e-6.
ProjectionResult spectral_projection(const CMat& S, const SpectrumSplit& split);

struct SearchResult {
    ProjectionResult projection;
    std::vector<Complex> alpha;  // coefficients over the candidate words
    std::vector<int> word;       // factor indices of the word (depth >= 2) or {k}
    int depth = 1;
    double delta = 0.0;  // spectral radius of the centered candidate
};

// Search for S = sum alpha_k A_k (and short words at higher depth) with
// r(S - (tr S / n) I) > 1e-6, then cluster-split and project. The A_k must be
// singular and sum to the identity.
SearchResult lemma37_search(const std::vector<CMat>& decomp, int depth_cap, const Sampler& s);

struct DistanceCheck {
    double b_sampled = 0.0;   // max sampled operator-norm distance lower bound
    double bound = 0.0;       // 2^{-3N^2} (N!)^{-N} M^{1-N^2}
    double family_bound = 0.0;  // sampled M = sup_{|alpha|<=1} ||sum alpha_k A_k||
};

// Distance of the coefficient family to a triangular algebra, against the
// crude lower bound. Distances are certified from below by dist_F / sqrt(n).
DistanceCheck triangular_distance_check(const std::vector<CMat>& decomp,
                                        const MatrixAlgebra& alg, const Sampler& s);

// One block of a uniform UFDD with its Hilbert-space chart.
struct UfddBlock {
    std::int64_t window_lo = 0;  // coordinates (window_lo, window_lo + width]
    Eigen::MatrixXd basis;       // width x N, columns span E_n
    Eigen::MatrixXd chart;       // N x N invertible V_n : H -> coefficient space
};

struct UfddSplitResult {
    std::vector<CMat> block_projections;  // R_n on H
    CMat Q;                               // assembled block-diagonal projection
    std::vector<SearchResult> searches;
};

// Theorem-3.8 style per-block splitting: build the rank-one coefficient
// family A_{nk} from the coordinate functionals of a projection P and run the
// word search on every block.
UfddSplitResult split_uniform_ufdd(const std::vector<UfddBlock>& blocks,
                                   const Eigen::MatrixXd& P, int depth_cap, const Sampler& s);

// Band-decomposition lattice seminorm
//   ||(y_1..y_n)||_Z = sup_{||y*|| <= 1} sum_j <|y_j|, |(A Q_j B)^T y*|>
// with the sup over the ambient ball: l_inf ambient -> +-1 sign vectors
// (exact enumeration, m <= 20), l_1 ambient -> coordinate functionals.
double lattice_factorization_norm(const std::vector<SeqVector>& ys,
                                  const std::vector<Eigen::MatrixXd>& Qs,
                                  const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                  const NormSpec& ambient);

} // namespace banachlab::opalg
