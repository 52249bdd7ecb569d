#include "banachlab/opalg.hpp"

#include <algorithm>
#include <cmath>

namespace banachlab::opalg {

SpectrumSplit cluster_split(const std::vector<Complex>& eigs, double delta, int n) {
    if (static_cast<int>(eigs.size()) != n || n < 2)
        throw PreconditionError("need n >= 2 eigenvalues with multiplicity");
    if (!(delta > 0.0)) throw PreconditionError("delta must be positive");

    double spread = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            spread = std::max(spread, std::abs(eigs[static_cast<std::size_t>(i)] -
                                               eigs[static_cast<std::size_t>(j)]));
    if (spread < delta)
        throw PreconditionError("max pairwise eigenvalue distance is below delta");

    // Connected components of the graph linking eigenvalues closer than
    // delta/(2n). A chain of <= n points each below the threshold has
    // diameter < delta/2, so the precondition forces >= 2 components.
    const double threshold = delta / (2.0 * n);
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    int ncomp = 0;
    for (int i = 0; i < n; ++i) {
        if (comp[static_cast<std::size_t>(i)] >= 0) continue;
        std::vector<int> stack{i};
        comp[static_cast<std::size_t>(i)] = ncomp;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j) {
                if (comp[static_cast<std::size_t>(j)] >= 0) continue;
                if (std::abs(eigs[static_cast<std::size_t>(v)] -
                             eigs[static_cast<std::size_t>(j)]) < threshold) {
                    comp[static_cast<std::size_t>(j)] = ncomp;
                    stack.push_back(j);
                }
            }
        }
        ++ncomp;
    }
    if (ncomp < 2)
        throw PreconditionError(
            "eigenvalues form a single cluster although the spread is >= delta: bad input");

    // Group one: the component of the smallest-modulus eigenvalue, ties by
    // smallest argument, then smallest index.
    int anchor = 0;
    for (int i = 1; i < n; ++i) {
        double mi = std::abs(eigs[static_cast<std::size_t>(i)]);
        double ma = std::abs(eigs[static_cast<std::size_t>(anchor)]);
        if (mi < ma - 1e-15) {
            anchor = i;
        } else if (std::fabs(mi - ma) <= 1e-15) {
            if (std::arg(eigs[static_cast<std::size_t>(i)]) <
                std::arg(eigs[static_cast<std::size_t>(anchor)]) - 1e-15)
                anchor = i;
        }
    }

    SpectrumSplit split;
    split.eigenvalues = eigs;
    for (int i = 0; i < n; ++i)
        if (comp[static_cast<std::size_t>(i)] == comp[static_cast<std::size_t>(anchor)])
            split.group_one.push_back(i);

    double gap = std::numeric_limits<double>::infinity();
    for (int i : split.group_one)
        for (int j = 0; j < n; ++j) {
            if (comp[static_cast<std::size_t>(j)] == comp[static_cast<std::size_t>(anchor)])
                continue;
            gap = std::min(gap, std::abs(eigs[static_cast<std::size_t>(i)] -
                                         eigs[static_cast<std::size_t>(j)]));
        }
    split.gap = gap;
    return split;
}

ProjectionResult spectral_projection(const CMat& S, const SpectrumSplit& split) {
    check_matrix(S);
    const Eigen::Index n = S.rows();
    if (static_cast<Eigen::Index>(split.eigenvalues.size()) != n)
        throw PreconditionError("split eigenvalue count must match the dimension");
    const std::size_t s = split.group_one.size();
    if (s == 0 || s >= static_cast<std::size_t>(n))
        throw PreconditionError("group one must be a proper nonempty subset");

    std::vector<bool> in_one(static_cast<std::size_t>(n), false);
    for (int i : split.group_one) {
        if (i < 0 || i >= n) throw PreconditionError("group index out of range");
        in_one[static_cast<std::size_t>(i)] = true;
    }
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (in_one[static_cast<std::size_t>(i)] && !in_one[static_cast<std::size_t>(j)])
                gap = std::min(gap, std::abs(split.eigenvalues[static_cast<std::size_t>(i)] -
                                             split.eigenvalues[static_cast<std::size_t>(j)]));
    if (!(gap > 0.0)) throw PreconditionError("cross-group eigenvalue gap is zero");

    auto fail = [&](const std::string& what, double resid) {
        throw ConditioningError("spectral projection " + what + " residual " +
                                std::to_string(resid) + " (gap=" + std::to_string(gap) +
                                ", n=" + std::to_string(n) + ", |S|_F=" +
                                std::to_string(S.norm()) + ")");
    };

    const CMat I = CMat::Identity(n, n);
    CMat T = I;
    for (Eigen::Index j = 0; j < n; ++j)
        if (in_one[static_cast<std::size_t>(j)])
            T = T * (S - split.eigenvalues[static_cast<std::size_t>(j)] * I);

    CMat W = I;
    Complex gamma(1.0, 0.0);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (in_one[static_cast<std::size_t>(k)]) continue;
        Complex mu(1.0, 0.0);
        for (Eigen::Index j = 0; j < n; ++j)
            if (in_one[static_cast<std::size_t>(j)])
                mu *= split.eigenvalues[static_cast<std::size_t>(k)] -
                      split.eigenvalues[static_cast<std::size_t>(j)];
        W = W * (T - mu * I);
        gamma *= -mu;
    }
    if (std::abs(gamma) < 1e-300)
        throw ConditioningError("normalization constant underflow in the projection recipe");

    ProjectionResult out;
    out.P = W / gamma;
    out.idempotency_residual = (out.P * out.P - out.P).norm();
    if (out.idempotency_residual > 1e-9) {
        // One idempotent-attracting sweep; still a polynomial in S.
        out.P = 3.0 * out.P * out.P - 2.0 * out.P * out.P * out.P;
        out.polished = true;
        out.idempotency_residual = (out.P * out.P - out.P).norm();
    }
    if (out.idempotency_residual > 1e-6) fail("idempotency", out.idempotency_residual);

    out.commutation_residual = (out.P * S - S * out.P).norm();
    if (out.commutation_residual > 1e-6) fail("commutation", out.commutation_residual);

    double tr = out.P.trace().real();
    out.rank = static_cast<int>(std::lround(tr));
    if (std::fabs(tr - s) > 1e-6 || out.rank != static_cast<int>(s))
        fail("trace/rank", std::fabs(tr - s));
    Eigen::JacobiSVD<CMat> svd(out.P);
    int sv_rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 0.5) ++sv_rank;
    if (sv_rank != out.rank) fail("singular-value rank", static_cast<double>(sv_rank));
    if (out.rank <= 0 || out.rank >= n) fail("rank range", static_cast<double>(out.rank));

    // Range must lie inside the group-one generalized eigenspace: T kills it.
    double range_resid = (T * out.P).norm() / std::max(1.0, T.norm());
    if (range_resid > 1e-6) fail("range", range_resid);

    return out;
}

} // namespace banachlab::opalg
