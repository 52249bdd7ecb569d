#include "banachlab/uncond.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "banachlab/parallel.hpp"

namespace banachlab::uncond {

namespace {

constexpr std::uint64_t kSignSalt = 0x5349474e53ULL;
constexpr std::uint64_t kLatticeSalt = 0x4c41545449ULL;

// Columns of the family over a compressed index set, for the dense fast path.
struct DenseFamily {
    bool usable = false;
    Eigen::Index len = 0;
    std::vector<std::vector<std::pair<Eigen::Index, double>>> sparse_cols;
};

DenseFamily stack_family(const std::vector<SeqVector>& vectors) {
    DenseFamily f;
    std::int64_t len = 0;
    for (const SeqVector& v : vectors) len = std::max(len, v.max_index());
    if (len > 4096) return f;  // keep dense windows bounded; callers fall back
    f.usable = true;
    f.len = static_cast<Eigen::Index>(len);
    f.sparse_cols.resize(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (const auto& [idx, val] : vectors[i].entries())
            f.sparse_cols[i].emplace_back(static_cast<Eigen::Index>(idx - 1), val);
    return f;
}

std::vector<int> sign_pattern(std::int64_t p, int n, bool exhaustive, std::uint64_t seed) {
    std::vector<int> eps(static_cast<std::size_t>(n), 1);
    if (exhaustive) {
        // eps_1 fixed +1; ratios are invariant under a global flip.
        for (int i = 1; i < n; ++i)
            if ((p >> (i - 1)) & 1) eps[static_cast<std::size_t>(i)] = -1;
        return eps;
    }
    if (p == 0) return eps;                       // all plus
    if (p == 1) { for (int& e : eps) e = -1; return eps; }
    if (p == 2) {                                 // alternating
        for (int i = 1; i < n; i += 2) eps[static_cast<std::size_t>(i)] = -1;
        return eps;
    }
    SplitMix64 g(sub_seed(seed ^ kSignSalt, static_cast<std::uint64_t>(p)));
    for (int i = 0; i < n; ++i) eps[static_cast<std::size_t>(i)] = g.sign();
    return eps;
}

// Deterministic coefficient pool followed by seeded random draws.
std::vector<Eigen::VectorXd> coefficient_pool(int n, const Sampler& s, bool singletons) {
    std::vector<Eigen::VectorXd> pool;
    pool.push_back(Eigen::VectorXd::Ones(n));
    if (singletons)
        for (int k = 0; k < n; ++k) pool.push_back(Eigen::VectorXd::Unit(n, k));
    if (s.strategy == SampleStrategy::CoordinateExtreme && n >= 2) {
        // Two-level odd/even profiles over a quarter-step ratio grid: classic
        // stress configurations for alternating block structures.
        for (int k = -16; k <= 16; ++k) {
            Eigen::VectorXd a(n);
            for (int i = 0; i < n; ++i) a[i] = (i % 2 == 0) ? 1.0 : 0.25 * k;
            pool.push_back(a);
        }
        for (int j = 0; j < 16; ++j) {
            SplitMix64 g(sub_seed(s.seed ^ kLatticeSalt, static_cast<std::uint64_t>(j)));
            Eigen::VectorXd a(n);
            for (int i = 0; i < n; ++i) a[i] = g.sign();
            pool.push_back(a);
        }
    }
    if (s.strategy == SampleStrategy::Grid) {
        const int res = s.grid_resolution;
        for (int j = 0; j < 32; ++j) {
            SplitMix64 g(sub_seed(s.seed ^ kLatticeSalt, static_cast<std::uint64_t>(j)));
            Eigen::VectorXd a(n);
            for (int i = 0; i < n; ++i) {
                double u = g.uniform(-1.0, 1.0);
                a[i] = std::round(u * (res - 1) / 2.0) * 2.0 / (res - 1);
            }
            pool.push_back(a);
        }
    }
    for (std::int64_t j = 0; j < s.count; ++j) {
        SplitMix64 g = s.stream(static_cast<std::uint64_t>(j));
        pool.push_back(g.gaussian_vector(n));
    }
    return pool;
}

Json vector_to_json(const Eigen::VectorXd& v) {
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

Eigen::VectorXd vector_from_json(const Json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

SeqVector combine(const std::vector<SeqVector>& vectors, const Eigen::VectorXd& a,
                  const std::vector<int>& signs) {
    SeqVector out;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        double c = a[static_cast<Eigen::Index>(i)];
        if (!signs.empty()) c *= signs[i];
        out.add_scaled(vectors[i], c);
    }
    return out;
}

} // namespace

void check_independent(const BasisFamily& b) {
    if (b.vectors.empty()) throw PreconditionError("empty basis family");
    std::map<std::int64_t, Eigen::Index> rows;
    for (const SeqVector& v : b.vectors)
        for (const auto& [i, val] : v.entries()) rows.emplace(i, 0);
    Eigen::Index r = 0;
    for (auto& [i, row] : rows) row = r++;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                              static_cast<Eigen::Index>(b.vectors.size()));
    for (std::size_t c = 0; c < b.vectors.size(); ++c)
        for (const auto& [i, val] : b.vectors[c].entries())
            M(rows[i], static_cast<Eigen::Index>(c)) = val;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(1e-10);
    if (qr.rank() != M.cols())
        throw PreconditionError("basis vectors are linearly dependent");
}

ConstantEstimate ubc_estimate(const BasisFamily& b, const Sampler& s, UbcOptions opt) {
    check_independent(b);
    const int n = static_cast<int>(b.vectors.size());
    const bool exhaustive = n <= 20;
    const std::int64_t patterns = exhaustive ? (std::int64_t{1} << (n - 1))
                                             : (3 + opt.sign_budget);

    std::vector<Eigen::VectorXd> pool = coefficient_pool(n, s, /*singletons=*/false);
    const std::int64_t draws = static_cast<std::int64_t>(pool.size());

    DenseFamily fam = stack_family(b.vectors);

    // Precompute bases and denominators once, serially.
    std::vector<Eigen::VectorXd> bases;
    std::vector<double> dens(static_cast<std::size_t>(draws), 0.0);
    if (fam.usable) {
        bases.resize(static_cast<std::size_t>(draws));
        for (std::int64_t d = 0; d < draws; ++d) {
            Eigen::VectorXd base = Eigen::VectorXd::Zero(fam.len);
            for (int i = 0; i < n; ++i)
                for (const auto& [row, val] : fam.sparse_cols[static_cast<std::size_t>(i)])
                    base[row] += pool[static_cast<std::size_t>(d)][i] * val;
            dens[static_cast<std::size_t>(d)] = eval_norm_dense(base, b.norm);
            bases[static_cast<std::size_t>(d)] = std::move(base);
        }
    } else {
        for (std::int64_t d = 0; d < draws; ++d)
            dens[static_cast<std::size_t>(d)] =
                eval_norm(combine(b.vectors, pool[static_cast<std::size_t>(d)], {}), b.norm);
    }

    auto score = [&](std::int64_t flat) -> double {
        const std::int64_t d = flat / patterns;
        const std::int64_t p = flat % patterns;
        const double den = dens[static_cast<std::size_t>(d)];
        if (den < 1e-12) return 0.0;
        std::vector<int> eps = sign_pattern(p, n, exhaustive, s.seed);
        double num;
        if (fam.usable) {
            thread_local Eigen::VectorXd scratch;
            scratch = bases[static_cast<std::size_t>(d)];
            for (int i = 0; i < n; ++i) {
                if (eps[static_cast<std::size_t>(i)] > 0) continue;
                const double c = 2.0 * pool[static_cast<std::size_t>(d)][i];
                for (const auto& [row, val] : fam.sparse_cols[static_cast<std::size_t>(i)])
                    scratch[row] -= c * val;
            }
            num = eval_norm_dense(scratch, b.norm);
        } else {
            num = eval_norm(combine(b.vectors, pool[static_cast<std::size_t>(d)], eps), b.norm);
        }
        return num / den;
    };

    par::Scored best = par::max_scan(draws * patterns, score);

    ConstantEstimate est;
    est.lower_bound = best.value;
    est.samples_used = draws * patterns;
    est.exhaustive_signs = exhaustive;
    const std::int64_t bd = best.index / patterns;
    const std::int64_t bp = best.index % patterns;
    Json signs = Json::array();
    for (int e : sign_pattern(bp, n, exhaustive, s.seed)) signs.push_back(e);
    est.witness = Json{{"coefficients", vector_to_json(pool[static_cast<std::size_t>(bd)])},
                       {"signs", signs},
                       {"ratio", best.value}};
    return est;
}

double ubc_replay(const BasisFamily& b, const Json& witness) {
    Eigen::VectorXd a = vector_from_json(witness.at("coefficients"));
    std::vector<int> eps;
    for (const auto& e : witness.at("signs")) eps.push_back(e.get<int>());
    double den = eval_norm(combine(b.vectors, a, {}), b.norm);
    double num = eval_norm(combine(b.vectors, a, eps), b.norm);
    return num / den;
}

namespace {

struct BlockDraw {
    std::vector<Eigen::VectorXd> xc;  // per-block coefficients of x_n
    std::vector<Eigen::VectorXd> yc;  // per-block coefficients of y_n
};

double block_norm(const BlockStructure& bs, std::size_t k, const Eigen::VectorXd& c,
                  const NormSpec& norm) {
    return eval_norm(block_vector(bs, k, c), norm);
}

// y_n = target * (unit of the block in `norm` along `dir`).
Eigen::VectorXd scaled_unit(const BlockStructure& bs, std::size_t k, const Eigen::VectorXd& dir,
                            const NormSpec& norm, double target) {
    double nb = block_norm(bs, k, dir, norm);
    if (nb <= 0.0) return Eigen::VectorXd::Zero(dir.size());
    return (target / nb) * dir;
}

} // namespace

ConstantEstimate absoluteness_estimate(const BlockStructure& bs, const NormSpec& norm,
                                       const Sampler& s) {
    const std::size_t m = bs.count();
    if (m == 0) throw PreconditionError("empty block structure");
    const bool all_dim2 = [&] {
        for (std::size_t k = 0; k < m; ++k)
            if (bs.dim(k) < 2) return false;
        return true;
    }();

    // Deterministic configurations: x profiles crossed with y placement
    // kinds, then seeded random draws.
    std::vector<std::vector<Eigen::VectorXd>> x_profiles;
    {
        std::vector<Eigen::VectorXd> axis(m), flat(m);
        for (std::size_t k = 0; k < m; ++k) {
            axis[k] = Eigen::VectorXd::Unit(bs.dim(k), 0);
            flat[k] = Eigen::VectorXd::Ones(bs.dim(k));
        }
        x_profiles.push_back(axis);
        x_profiles.push_back(flat);
        if (all_dim2) {
            for (int g = -16; g <= 16; ++g) {
                std::vector<Eigen::VectorXd> two(m);
                for (std::size_t k = 0; k < m; ++k) {
                    two[k] = Eigen::VectorXd::Zero(bs.dim(k));
                    two[k][0] = 1.0;
                    two[k][1] = 0.25 * g;
                }
                x_profiles.push_back(std::move(two));
            }
        }
    }
    const int y_kinds = all_dim2 ? 4 : 2;  // identity, axis1, axis2, alternating split
    const std::int64_t det_count = static_cast<std::int64_t>(x_profiles.size()) * y_kinds;
    const std::int64_t draws = det_count + s.count;

    auto make_draw = [&](std::int64_t i) -> BlockDraw {
        BlockDraw d;
        d.xc.resize(m);
        d.yc.resize(m);
        if (i < det_count) {
            const std::size_t xp = static_cast<std::size_t>(i / y_kinds);
            const int yk = static_cast<int>(i % y_kinds);
            d.xc = x_profiles[xp];
            for (std::size_t k = 0; k < m; ++k) {
                double r = block_norm(bs, k, d.xc[k], norm);
                switch (yk) {
                    case 0: d.yc[k] = d.xc[k]; break;
                    case 1:
                        d.yc[k] = scaled_unit(bs, k, Eigen::VectorXd::Unit(bs.dim(k), 0), norm, r);
                        break;
                    case 2:
                        d.yc[k] = scaled_unit(bs, k, Eigen::VectorXd::Unit(bs.dim(k), 1), norm, r);
                        break;
                    default: {
                        int axis = (k % 2 == 0) ? 0 : 1;
                        d.yc[k] = scaled_unit(bs, k, Eigen::VectorXd::Unit(bs.dim(k), axis), norm, r);
                        break;
                    }
                }
            }
            return d;
        }
        SplitMix64 g = s.stream(static_cast<std::uint64_t>(i - det_count));
        for (std::size_t k = 0; k < m; ++k) d.xc[k] = g.sphere(bs.dim(k));
        const bool shrink = (i % 3 == 0);
        for (std::size_t k = 0; k < m; ++k) {
            double r = block_norm(bs, k, d.xc[k], norm);
            double rho = shrink ? g.uniform01() : 1.0;
            d.yc[k] = scaled_unit(bs, k, g.sphere(bs.dim(k)), norm, rho * r);
        }
        return d;
    };

    auto ratio_of = [&](const BlockDraw& d) -> double {
        double den = eval_norm(assemble(bs, d.xc), norm);
        if (den < 1e-12) return 0.0;
        return eval_norm(assemble(bs, d.yc), norm) / den;
    };

    par::Scored best = par::max_scan(draws, [&](std::int64_t i) { return ratio_of(make_draw(i)); });

    BlockDraw bd = make_draw(best.index);
    Json jx = Json::array(), jy = Json::array();
    for (const auto& c : bd.xc) jx.push_back(vector_to_json(c));
    for (const auto& c : bd.yc) jy.push_back(vector_to_json(c));

    ConstantEstimate est;
    est.lower_bound = best.value;
    est.samples_used = draws;
    est.witness = Json{{"x_coefficients", jx}, {"y_coefficients", jy}, {"ratio", best.value}};
    return est;
}

double absoluteness_replay(const BlockStructure& bs, const NormSpec& norm, const Json& witness) {
    std::vector<Eigen::VectorXd> xc, yc;
    for (const auto& c : witness.at("x_coefficients")) xc.push_back(vector_from_json(c));
    for (const auto& c : witness.at("y_coefficients")) yc.push_back(vector_from_json(c));
    return eval_norm(assemble(bs, yc), norm) / eval_norm(assemble(bs, xc), norm);
}

ConstantEstimate shift_constant(const BasisFamily& b, const Sampler& s) {
    const int m = static_cast<int>(b.vectors.size());
    if (m < 2) throw PreconditionError("shift constant needs at least two blocks");
    for (int k = 0; k + 1 < m; ++k)
        if (b.vectors[static_cast<std::size_t>(k)].max_index() >=
            b.vectors[static_cast<std::size_t>(k + 1)].min_index())
            throw PreconditionError("blocks must be consecutively and disjointly supported");

    const int len = m - 1;
    std::vector<Eigen::VectorXd> pool = coefficient_pool(len, s, /*singletons=*/true);
    const std::int64_t draws = static_cast<std::int64_t>(pool.size());

    auto ratio_of = [&](const Eigen::VectorXd& a) -> double {
        SeqVector lhs, rhs;
        for (int k = 0; k < len; ++k) {
            lhs.add_scaled(b.vectors[static_cast<std::size_t>(k)], a[k]);
            rhs.add_scaled(b.vectors[static_cast<std::size_t>(k + 1)], a[k]);
        }
        double nl = eval_norm(lhs, b.norm);
        double nr = eval_norm(rhs, b.norm);
        if (nl < 1e-300 || nr < 1e-300) return 1.0;
        double r = nr / nl;
        return std::max(r, 1.0 / r);
    };

    par::Scored best =
        par::max_scan(draws, [&](std::int64_t i) { return ratio_of(pool[static_cast<std::size_t>(i)]); });

    ConstantEstimate est;
    est.lower_bound = best.value;
    est.samples_used = draws;
    est.witness = Json{{"alpha", vector_to_json(pool[static_cast<std::size_t>(best.index)])},
                       {"ratio", best.value}};
    return est;
}

double shift_replay(const BasisFamily& b, const Json& witness) {
    Eigen::VectorXd a = vector_from_json(witness.at("alpha"));
    SeqVector lhs, rhs;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        lhs.add_scaled(b.vectors[static_cast<std::size_t>(k)], a[k]);
        rhs.add_scaled(b.vectors[static_cast<std::size_t>(k + 1)], a[k]);
    }
    double r = eval_norm(rhs, b.norm) / eval_norm(lhs, b.norm);
    return std::max(r, 1.0 / r);
}

ConstantEstimate equivalence_constant(const BasisFamily& b1, const BasisFamily& b2,
                                      const Sampler& s) {
    if (b1.vectors.size() != b2.vectors.size())
        throw PreconditionError("families must have equal length");
    const int n = static_cast<int>(b1.vectors.size());
    std::vector<Eigen::VectorXd> pool = coefficient_pool(n, s, /*singletons=*/true);
    const std::int64_t draws = static_cast<std::int64_t>(pool.size());

    auto ratio_of = [&](const Eigen::VectorXd& a) -> double {
        double n1 = eval_norm(combine(b1.vectors, a, {}), b1.norm);
        double n2 = eval_norm(combine(b2.vectors, a, {}), b2.norm);
        if (n1 < 1e-300 || n2 < 1e-300) return 1.0;
        double r = n1 / n2;
        return std::max(r, 1.0 / r);
    };

    par::Scored best =
        par::max_scan(draws, [&](std::int64_t i) { return ratio_of(pool[static_cast<std::size_t>(i)]); });

    ConstantEstimate est;
    est.lower_bound = best.value;
    est.samples_used = draws;
    est.witness = Json{{"alpha", vector_to_json(pool[static_cast<std::size_t>(best.index)])},
                       {"ratio", best.value}};
    return est;
}

double equivalence_replay(const BasisFamily& b1, const BasisFamily& b2, const Json& witness) {
    Eigen::VectorXd a = vector_from_json(witness.at("alpha"));
    double n1 = eval_norm(combine(b1.vectors, a, {}), b1.norm);
    double n2 = eval_norm(combine(b2.vectors, a, {}), b2.norm);
    double r = n1 / n2;
    return std::max(r, 1.0 / r);
}

namespace {

Eigen::MatrixXd random_symmetric_contraction(SplitMix64& g, Eigen::Index d) {
    Eigen::MatrixXd G(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) G(i, j) = g.gaussian();
    Eigen::MatrixXd S = 0.5 * (G + G.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    double top = es.eigenvalues().cwiseAbs().maxCoeff();
    if (top < 1e-12) return Eigen::MatrixXd::Identity(d, d);
    return S / top;
}

} // namespace

ConstantEstimate hermitian_stress(const BlockStructure& bs, const NormSpec& norm,
                                  const Sampler& s, const std::vector<Eigen::MatrixXd>& grams) {
    const std::size_t m = bs.count();
    if (m == 0) throw PreconditionError("empty block structure");
    if (!grams.empty() && grams.size() != m)
        throw PreconditionError("need one Gram per block when supplied");

    std::vector<Eigen::MatrixXd> half(m), half_inv(m);
    for (std::size_t k = 0; k < m; ++k) {
        const Eigen::Index d = bs.dim(k);
        if (grams.empty()) {
            half[k] = Eigen::MatrixXd::Identity(d, d);
            half_inv[k] = half[k];
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(grams[k]);
            if (es.eigenvalues().minCoeff() <= 0.0)
                throw PreconditionError("Gram matrix is not positive definite");
            half[k] = es.operatorSqrt();
            half_inv[k] = es.operatorInverseSqrt();
        }
    }
    // Hermitian for the block Euclidean norm: A = G^{-1/2} S G^{1/2} with S
    // symmetric; contraction when |S|_2 <= 1.
    auto hermitian_from = [&](std::size_t k, const Eigen::MatrixXd& S) {
        return Eigen::MatrixXd(half_inv[k] * S * half[k]);
    };

    const bool all_dim2 = [&] {
        for (std::size_t k = 0; k < m; ++k)
            if (bs.dim(k) < 2) return false;
        return true;
    }();

    std::vector<std::vector<Eigen::VectorXd>> x_profiles;
    {
        std::vector<Eigen::VectorXd> axis(m), flat(m);
        for (std::size_t k = 0; k < m; ++k) {
            axis[k] = Eigen::VectorXd::Unit(bs.dim(k), 0);
            flat[k] = Eigen::VectorXd::Ones(bs.dim(k));
        }
        x_profiles.push_back(axis);
        x_profiles.push_back(flat);
        if (all_dim2) {
            for (int g = -16; g <= 16; ++g) {
                std::vector<Eigen::VectorXd> two(m);
                for (std::size_t k = 0; k < m; ++k) {
                    two[k] = Eigen::VectorXd::Zero(bs.dim(k));
                    two[k][0] = 1.0;
                    two[k][1] = 0.25 * g;
                }
                x_profiles.push_back(std::move(two));
            }
        }
    }
    const int a_kinds = all_dim2 ? 4 : 2;  // I, -I, diag(1,-1,...), diag(-1,1,...)
    const std::int64_t det_count = static_cast<std::int64_t>(x_profiles.size()) * a_kinds;
    const std::int64_t draws = det_count + s.count;

    auto deterministic_contraction = [&](int kind, std::size_t k) -> Eigen::MatrixXd {
        const Eigen::Index d = bs.dim(k);
        Eigen::MatrixXd S = Eigen::MatrixXd::Identity(d, d);
        if (kind == 1) S = -S;
        if (kind == 2 || kind == 3)
            for (Eigen::Index i = 0; i < d; ++i)
                S(i, i) = ((i % 2 == 0) == (kind == 2)) ? 1.0 : -1.0;
        return S;
    };

    struct StressDraw {
        std::vector<Eigen::VectorXd> xc;
        std::vector<Eigen::MatrixXd> A;
    };
    auto make_draw = [&](std::int64_t i) -> StressDraw {
        StressDraw d;
        d.xc.resize(m);
        d.A.resize(m);
        if (i < det_count) {
            const std::size_t xp = static_cast<std::size_t>(i / a_kinds);
            const int ak = static_cast<int>(i % a_kinds);
            d.xc = x_profiles[xp];
            for (std::size_t k = 0; k < m; ++k)
                d.A[k] = hermitian_from(k, deterministic_contraction(ak, k));
            return d;
        }
        SplitMix64 g = s.stream(static_cast<std::uint64_t>(i - det_count));
        for (std::size_t k = 0; k < m; ++k) {
            d.xc[k] = g.sphere(bs.dim(k));
            d.A[k] = hermitian_from(k, random_symmetric_contraction(g, bs.dim(k)));
        }
        return d;
    };

    auto ratio_of = [&](const StressDraw& d) -> double {
        double den = eval_norm(assemble(bs, d.xc), norm);
        if (den < 1e-12) return 0.0;
        std::vector<Eigen::VectorXd> mapped(m);
        for (std::size_t k = 0; k < m; ++k) mapped[k] = d.A[k] * d.xc[k];
        return eval_norm(assemble(bs, mapped), norm) / den;
    };

    par::Scored best = par::max_scan(draws, [&](std::int64_t i) { return ratio_of(make_draw(i)); });

    StressDraw bd = make_draw(best.index);
    Json jx = Json::array(), ja = Json::array();
    for (const auto& c : bd.xc) jx.push_back(vector_to_json(c));
    for (const auto& A : bd.A) {
        Json rows = Json::array();
        for (Eigen::Index r = 0; r < A.rows(); ++r) {
            Json row = Json::array();
            for (Eigen::Index c = 0; c < A.cols(); ++c) row.push_back(A(r, c));
            rows.push_back(row);
        }
        ja.push_back(rows);
    }

    ConstantEstimate est;
    est.lower_bound = best.value;
    est.samples_used = draws;
    est.witness = Json{{"x_coefficients", jx}, {"operators", ja}, {"ratio", best.value}};
    return est;
}

double hermitian_replay(const BlockStructure& bs, const NormSpec& norm, const Json& witness) {
    std::vector<Eigen::VectorXd> xc;
    for (const auto& c : witness.at("x_coefficients")) xc.push_back(vector_from_json(c));
    std::vector<Eigen::VectorXd> mapped(xc.size());
    const Json& ops = witness.at("operators");
    for (std::size_t k = 0; k < xc.size(); ++k) {
        const Json& rows = ops[k];
        Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(rows[0].size()));
        for (Eigen::Index r = 0; r < A.rows(); ++r)
            for (Eigen::Index c = 0; c < A.cols(); ++c)
                A(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
        mapped[k] = A * xc[k];
    }
    return eval_norm(assemble(bs, mapped), norm) / eval_norm(assemble(bs, xc), norm);
}

ExtractedBasis extract_block_basis(const BlockStructure& bs, const Eigen::MatrixXd& P,
                                   const NormSpec& norm) {
    const Eigen::Index L = static_cast<Eigen::Index>(bs.cover_end());
    if (P.rows() != L || P.cols() != L)
        throw PreconditionError("projection matrix must cover all block coordinates");
    const double scale = std::max(1.0, P.norm());
    if ((P * P - P).norm() > 1e-9 * scale)
        throw PreconditionError("P is not a projection (P^2 != P)");

    const std::size_t m = bs.count();
    std::vector<Eigen::MatrixXd> e_basis(m);  // current basis of E_n inside its window
    for (std::size_t k = 0; k < m; ++k) {
        const std::int64_t lo = bs.window_lo(k);
        const std::int64_t w = bs.width(k);
        // Off-window entries of the window's columns must vanish: P(F_n) = E_n
        // inside F_n.
        Eigen::MatrixXd cols = P.middleCols(lo, w);
        for (Eigen::Index r = 0; r < L; ++r) {
            if (r >= lo && r < lo + w) continue;
            if (cols.row(r).cwiseAbs().maxCoeff() > 1e-9 * scale)
                throw PreconditionError("P does not act block-diagonally on block " +
                                        std::to_string(k + 1));
        }
        Eigen::MatrixXd PW = P.block(lo, lo, w, w);
        // range(P|F_n) must equal span of the block basis.
        const Eigen::MatrixXd& B = bs.basis(k);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
        Eigen::MatrixXd sol = qr.solve(PW);
        if ((B * sol - PW).norm() > 1e-9 * std::max(1.0, PW.norm()))
            throw PreconditionError("P(F_n) is not contained in E_n for block " +
                                    std::to_string(k + 1));
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_qr(PW);
        rank_qr.setThreshold(1e-9);
        if (rank_qr.rank() != B.cols())
            throw PreconditionError("P(F_n) does not span E_n for block " + std::to_string(k + 1));
        e_basis[k] = B;
    }

    const double N = static_cast<double>(bs.max_width());
    Eigen::MatrixXd cur = P;

    ExtractedBasis out;
    out.per_block.resize(m);
    out.picked_coordinates.resize(m);
    out.diagonal_entries.resize(m);

    std::vector<bool> live(m);
    for (std::size_t k = 0; k < m; ++k) live[k] = e_basis[k].cols() > 0;

    for (std::int64_t round = 0; round < bs.max_width(); ++round) {
        bool any = false;
        Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(L, L);
        for (std::size_t k = 0; k < m; ++k) {
            if (!live[k]) continue;
            any = true;
            const std::int64_t lo = bs.window_lo(k);
            const std::int64_t w = bs.width(k);
            Eigen::Index pick = 0;
            double alpha = -1.0;
            for (Eigen::Index j = 0; j < w; ++j) {
                double d = cur(lo + j, lo + j);
                if (d > alpha) { alpha = d; pick = j; }
            }
            if (alpha < 1.0 / N - 1e-12)
                throw ConditioningError(
                    "no diagonal entry above 1/N in block " + std::to_string(k + 1) +
                    ": inconsistent projection input");
            Eigen::VectorXd f = cur.col(lo + pick);
            out.picked_coordinates[k].push_back(lo + pick + 1);
            out.diagonal_entries[k].push_back(alpha);
            SeqVector fv = SeqVector::from_dense(f);
            double nf = eval_norm(fv, norm);
            out.per_block[k].push_back(fv * (1.0 / nf));
            // Q y = alpha^{-1} <y, e_k*> f, accumulated over blocks.
            Q.col(lo + pick) += f / alpha;

            // Shrink E_n to the kernel of the picked coordinate functional.
            Eigen::MatrixXd B = e_basis[k];
            Eigen::RowVectorXd row = B.row(pick);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(row, Eigen::ComputeFullV);
            Eigen::Index d = B.cols();
            Eigen::MatrixXd kernel = svd.matrixV().rightCols(d - 1);
            e_basis[k] = B * kernel;
            if (e_basis[k].cols() == 0) live[k] = false;
        }
        if (!any) break;
        cur = (Eigen::MatrixXd::Identity(L, L) - Q) * cur;
    }

    // The extracted vectors must span the original E_n.
    for (std::size_t k = 0; k < m; ++k) {
        const Eigen::Index d = bs.basis(k).cols();
        if (static_cast<Eigen::Index>(out.per_block[k].size()) != d)
            throw ConditioningError("extraction terminated early in block " + std::to_string(k + 1));
        Eigen::MatrixXd F(bs.width(k), d);
        for (Eigen::Index j = 0; j < d; ++j)
            F.col(j) = out.per_block[k][static_cast<std::size_t>(j)].dense(bs.window_lo(k) + 1,
                                                                           bs.width(k));
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(bs.basis(k));
        if ((bs.basis(k) * qr.solve(F) - F).norm() > 1e-8 * std::max(1.0, F.norm()))
            throw ConditioningError("extracted vectors leave E_n in block " + std::to_string(k + 1));
    }
    return out;
}

} // namespace banachlab::uncond
