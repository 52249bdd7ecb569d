#include "banachlab/opalg.hpp"

#include <cmath>

namespace banachlab::opalg {

namespace {

void check_decomposition(const std::vector<CMat>& decomp) {
    if (decomp.empty()) throw PreconditionError("empty decomposition");
    const Eigen::Index n = decomp.front().rows();
    if (n < 2) throw PreconditionError("decomposition blocks need dimension >= 2");
    CMat sum = CMat::Zero(n, n);
    for (const CMat& A : decomp) {
        check_matrix(A);
        if (A.rows() != n) throw PreconditionError("summands must share a dimension");
        double scale = std::pow(std::max(1.0, A.norm()), static_cast<double>(n));
        double det = std::abs(Eigen::FullPivLU<CMat>(A).determinant());
        if (!(det < 1e-9 * scale))
            throw PreconditionError("every summand must be singular (|det| = " +
                                    std::to_string(det) + ")");
        sum += A;
    }
    if ((sum - CMat::Identity(n, n)).norm() > 1e-9)
        throw PreconditionError("summands must add up to the identity within 1e-9");
}

// Deterministic coefficient candidates: indicators, then seeded draws; every
// fourth draw carries complex phases.
CVec candidate_alpha(std::size_t k, std::int64_t i, const Sampler& s) {
    CVec alpha = CVec::Zero(static_cast<Eigen::Index>(k));
    if (i < static_cast<std::int64_t>(k)) {
        alpha[static_cast<Eigen::Index>(i)] = 1.0;
        return alpha;
    }
    SplitMix64 g = s.stream(static_cast<std::uint64_t>(i));
    const bool phases = (i % 4 == 0);
    for (std::size_t j = 0; j < k; ++j) {
        double mag = g.uniform(-1.0, 1.0);
        if (phases) {
            double th = g.uniform(0.0, 6.283185307179586);
            alpha[static_cast<Eigen::Index>(j)] =
                std::abs(mag) * Complex(std::cos(th), std::sin(th));
        } else {
            alpha[static_cast<Eigen::Index>(j)] = mag;
        }
    }
    return alpha;
}

CMat combine(const std::vector<CMat>& decomp, const CVec& alpha) {
    CMat S = CMat::Zero(decomp.front().rows(), decomp.front().cols());
    for (std::size_t k = 0; k < decomp.size(); ++k)
        S += alpha[static_cast<Eigen::Index>(k)] * decomp[k];
    return S;
}

} // namespace

SearchResult lemma37_search(const std::vector<CMat>& decomp, int depth_cap, const Sampler& s) {
    check_decomposition(decomp);
    const Eigen::Index n = decomp.front().rows();
    const std::size_t K = decomp.size();
    const double delta_floor = 1e-6;

    auto try_candidate = [&](const CMat& S, SearchResult& result) -> bool {
        CMat centered = S - (S.trace() / static_cast<double>(n)) * CMat::Identity(n, n);
        double delta;
        std::vector<Complex> eigs;
        try {
            eigs = eigenvalues(S);
            delta = spectral_radius(centered);
        } catch (const ConditioningError&) {
            return false;
        }
        if (!(delta > delta_floor)) return false;
        try {
            SpectrumSplit split = cluster_split(eigs, delta, static_cast<int>(n));
            result.projection = spectral_projection(S, split);
            result.delta = delta;
            return true;
        } catch (const Error&) {
            return false;
        }
    };

    SearchResult result;

    // Depth 1: coordinate indicators, then sampled coefficient vectors.
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(K) + s.count; ++i) {
        CVec alpha = candidate_alpha(K, i, s);
        if (try_candidate(combine(decomp, alpha), result)) {
            result.depth = 1;
            result.alpha.assign(alpha.data(), alpha.data() + alpha.size());
            if (i < static_cast<std::int64_t>(K)) result.word = {static_cast<int>(i)};
            return result;
        }
    }

    // Depth 2: pure two-letter words, then products of sampled combinations.
    if (depth_cap >= 2) {
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = 0; j < K; ++j)
                if (try_candidate(decomp[i] * decomp[j], result)) {
                    result.depth = 2;
                    result.word = {static_cast<int>(i), static_cast<int>(j)};
                    return result;
                }
        for (std::int64_t i = 0; i < s.count; ++i) {
            CVec a = candidate_alpha(K, static_cast<std::int64_t>(K) + 2 * i, s);
            CVec b = candidate_alpha(K, static_cast<std::int64_t>(K) + 2 * i + 1, s);
            if (try_candidate(combine(decomp, a) * combine(decomp, b), result)) {
                result.depth = 2;
                result.alpha.assign(a.data(), a.data() + a.size());
                return result;
            }
        }
    }

    // Depth >= 3: sampled three-letter products.
    if (depth_cap >= 3) {
        for (std::int64_t i = 0; i < s.count; ++i) {
            SplitMix64 g = s.stream(0xabcdef ^ static_cast<std::uint64_t>(i));
            std::size_t a = static_cast<std::size_t>(g.below(K));
            std::size_t b = static_cast<std::size_t>(g.below(K));
            std::size_t c = static_cast<std::size_t>(g.below(K));
            if (try_candidate(decomp[a] * decomp[b] * decomp[c], result)) {
                result.depth = 3;
                result.word = {static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)};
                return result;
            }
        }
    }

    throw SearchExhaustedError(
        "no candidate with centered spectral radius above 1e-6 produced a valid projection "
        "within the sampled budget and depth cap " + std::to_string(depth_cap));
}

DistanceCheck triangular_distance_check(const std::vector<CMat>& decomp,
                                        const MatrixAlgebra& alg, const Sampler& s) {
    check_decomposition(decomp);
    if (!is_triangular_algebra(alg, 1e-7))
        throw PreconditionError("distance check requires a triangular algebra");
    const Eigen::Index n = decomp.front().rows();
    const std::size_t K = decomp.size();

    // Candidate alphas: all +-1 vertices when affordable (the norm sup over
    // the cube is attained at vertices), indicators, then sampled draws.
    std::vector<CVec> candidates;
    if (K <= 14) {
        for (std::uint64_t mask = 0; mask < (1ull << (K - 1)); ++mask) {
            CVec a(static_cast<Eigen::Index>(K));
            a[0] = 1.0;
            for (std::size_t j = 1; j < K; ++j)
                a[static_cast<Eigen::Index>(j)] = ((mask >> (j - 1)) & 1) ? -1.0 : 1.0;
            candidates.push_back(a);
        }
    }
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(K) + s.count; ++i)
        candidates.push_back(candidate_alpha(K, i, s));

    DistanceCheck out;
    for (const CVec& a : candidates) {
        CMat S = combine(decomp, a);
        out.family_bound = std::max(out.family_bound, operator_norm(S));
        // Operator-norm distance certified from below by dist_F / sqrt(n).
        out.b_sampled = std::max(out.b_sampled,
                                 frobenius_distance(alg, S) / std::sqrt(static_cast<double>(n)));
    }

    double nfact = 1.0;
    for (Eigen::Index i = 2; i <= n; ++i) nfact *= static_cast<double>(i);
    out.bound = std::pow(2.0, -3.0 * static_cast<double>(n * n)) *
                std::pow(nfact, -static_cast<double>(n)) *
                std::pow(out.family_bound, 1.0 - static_cast<double>(n * n));
    return out;
}

UfddSplitResult split_uniform_ufdd(const std::vector<UfddBlock>& blocks,
                                   const Eigen::MatrixXd& P, int depth_cap, const Sampler& s) {
    if (blocks.empty()) throw PreconditionError("no blocks");
    const Eigen::Index N = blocks.front().chart.rows();
    if (N < 2) throw PreconditionError("block dimension N must be >= 2 (nothing to split)");
    const Eigen::Index L = P.rows();
    if (P.cols() != L) throw PreconditionError("projection matrix must be square");

    UfddSplitResult out;
    out.Q = CMat::Zero(L, L);

    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const UfddBlock& blk = blocks[bi];
        const Eigen::Index w = blk.basis.rows();
        if (blk.basis.cols() != N || blk.chart.rows() != N || blk.chart.cols() != N)
            throw PreconditionError("block " + std::to_string(bi + 1) +
                                    ": basis must be width x N and chart N x N");
        if (blk.window_lo < 0 || blk.window_lo + w > L)
            throw PreconditionError("block window exceeds the projection matrix");

        Eigen::FullPivLU<Eigen::MatrixXd> lu(blk.chart);
        if (!lu.isInvertible())
            throw PreconditionError("block chart V_n must be invertible");
        Eigen::MatrixXd Vinv = lu.inverse();

        // Left inverse of the basis and the window slice of P.
        Eigen::MatrixXd C =
            (blk.basis.transpose() * blk.basis).ldlt().solve(blk.basis.transpose());
        Eigen::MatrixXd PW = P.block(blk.window_lo, blk.window_lo, w, w);

        Eigen::MatrixXd M1 = Vinv * C;        // N x w
        Eigen::MatrixXd M2 = blk.basis * blk.chart;  // w x N

        // A_{nk} = (V^-1 C P e_k) (e_k^T B V): rank one per window coordinate.
        std::vector<CMat> family;
        CMat sum = CMat::Zero(N, N);
        for (Eigen::Index k = 0; k < w; ++k) {
            Eigen::VectorXd u = M1 * PW.col(k);
            Eigen::RowVectorXd v = M2.row(k);
            CMat A = (u * v).cast<Complex>();
            sum += A;
            family.push_back(std::move(A));
        }
        if ((sum - CMat::Identity(N, N)).norm() > 1e-9)
            throw PreconditionError("block " + std::to_string(bi + 1) +
                                    ": rank-one family does not sum to the identity");

        Sampler block_sampler(sub_seed(s.seed, static_cast<std::uint64_t>(bi)), s.count,
                              s.strategy);
        SearchResult sr = lemma37_search(family, depth_cap, block_sampler);
        CMat R = sr.projection.P;
        out.block_projections.push_back(R);

        // Q acts on the window as B V R V^-1 C P_W.
        CMat QW = (M2.cast<Complex>()) * R * (M1.cast<Complex>()) * PW.cast<Complex>();
        out.Q.block(blk.window_lo, blk.window_lo, w, w) = QW;
        out.searches.push_back(std::move(sr));
    }

    if ((out.Q * out.Q - out.Q).norm() > 1e-6 * std::max(1.0, out.Q.norm()))
        throw ConditioningError("assembled Q failed the projection check");
    return out;
}

} // namespace banachlab::opalg
