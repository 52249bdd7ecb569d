#include "banachlab/uncond.hpp"

#include <cmath>
#include <limits>

namespace banachlab::uncond {

namespace {

// Assignment by shortest augmenting paths with potentials (O(d^3)); exact for
// finite costs.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    const double INF = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<int> p(static_cast<std::size_t>(n + 1), 0);   // column -> matched row
    std::vector<int> way(static_cast<std::size_t>(n + 1), 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n + 1), INF);
        std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            int i0 = p[static_cast<std::size_t>(j0)], j1 = 0;
            double delta = INF;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                             v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> perm(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        perm[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
    return perm;
}

} // namespace

MatchingResult prop26_matching(const Eigen::MatrixXcd& A) {
    const int d = static_cast<int>(A.rows());
    if (d == 0 || A.cols() != d) throw PreconditionError("matching needs a square matrix");
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
    const double absdet = std::abs(lu.determinant());
    if (!(absdet > 0.0) || lu.rank() < d)
        throw PreconditionError("singular matrix rejected: permutation product bound is vacuous");

    // Maximize prod |a_{i,sigma(i)}| == minimize sum -log|a_{i,sigma(i)}|.
    Eigen::MatrixXd cost(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            cost(i, j) = -std::log(std::max(std::abs(A(i, j)), 1e-300));

    MatchingResult out;
    out.perm = solve_assignment(cost);
    out.product = 1.0;
    for (int i = 0; i < d; ++i)
        out.product *= std::abs(A(i, out.perm[static_cast<std::size_t>(i)]));

    // Permanent-expansion pigeonhole: |det A| <= d! * max_sigma prod.
    double dfact = 1.0;
    for (int i = 2; i <= d; ++i) dfact *= i;
    if (out.product < absdet / dfact * (1.0 - 1e-9))
        throw ConditioningError("matching product fell below |det|/d!: assignment failure");
    return out;
}

} // namespace banachlab::uncond
