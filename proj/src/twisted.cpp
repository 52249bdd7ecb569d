#include "banachlab/twisted.hpp"

#include <algorithm>
#include <cmath>

#include "banachlab/parallel.hpp"

namespace banachlab::twisted {

Centralizer Centralizer::identity(NormSpec base) {
    Centralizer c(std::move(base), ScalarFn::Identity);
    c.lipschitz_ = 1.0;
    return c;
}

Centralizer Centralizer::zero(NormSpec base) {
    Centralizer c(std::move(base), ScalarFn::Zero);
    c.lipschitz_ = 0.0;
    return c;
}

Centralizer Centralizer::clamp(NormSpec base, double L) {
    if (!(L >= 0.0)) throw PreconditionError("clamp level must be >= 0");
    Centralizer c(std::move(base), ScalarFn::Clamp);
    c.clamp_ = L;
    c.lipschitz_ = 1.0;
    c.verify_lipschitz();
    return c;
}

Centralizer Centralizer::piecewise_linear(NormSpec base,
                                          std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw PreconditionError("need at least two knots");
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        if (!(knots[i].first < knots[i + 1].first))
            throw PreconditionError("knot abscissae must be strictly increasing");
    Centralizer c(std::move(base), ScalarFn::PiecewiseLinear);
    double lip = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double slope = (knots[i + 1].second - knots[i].second) /
                       (knots[i + 1].first - knots[i].first);
        lip = std::max(lip, std::fabs(slope));
    }
    c.knots_ = std::move(knots);
    c.lipschitz_ = lip;
    c.verify_lipschitz();
    return c;
}

double Centralizer::f(double t) const {
    switch (fn_) {
        case ScalarFn::Identity: return t;
        case ScalarFn::Zero: return 0.0;
        case ScalarFn::Clamp: return std::max(-clamp_, std::min(clamp_, t));
        case ScalarFn::PiecewiseLinear: {
            if (t <= knots_.front().first) return knots_.front().second;
            if (t >= knots_.back().first) return knots_.back().second;
            auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                                       [](double v, const auto& k) { return v < k.first; });
            auto lo = hi - 1;
            double w = (t - lo->first) / (hi->first - lo->first);
            return lo->second + w * (hi->second - lo->second);
        }
    }
    return 0.0;
}

void Centralizer::verify_lipschitz() const {
    double prev_t = -40.0;
    double prev_v = f(prev_t);
    for (double t = -39.75; t <= 40.0; t += 0.25) {
        double v = f(t);
        if (std::fabs(v - prev_v) > (lipschitz_ + 1e-9) * std::fabs(t - prev_t))
            throw PreconditionError("declared Lipschitz constant violated on the test grid");
        prev_t = t;
        prev_v = v;
    }
}

TwistedSpace::TwistedSpace(Centralizer omega, std::int64_t cap)
    : omega_(std::move(omega)), cap_(cap) {
    if (cap < 1) throw PreconditionError("section cap must be >= 1");
}

SeqVector apply_centralizer(const Centralizer& c, const SeqVector& x) {
    if (x.is_zero()) return SeqVector();
    const double nx = eval_norm(x, c.base());
    if (nx <= 0.0) return SeqVector();
    SeqVector out;
    for (const auto& [i, v] : x.entries()) {
        double w = v * c.f(std::log(std::fabs(v) / nx));
        if (w != 0.0) out.set(i, w);
    }
    return out;
}

double twisted_norm(const TwistedSpace& t, const TwistedVector& v) {
    SeqVector corrected = v.y - apply_centralizer(t.omega(), v.x);
    return eval_norm(v.x, t.omega().base()) + eval_norm(corrected, t.omega().base());
}

TwistedVector split_interleaved(const SeqVector& v) {
    TwistedVector out;
    for (const auto& [i, val] : v.entries()) {
        if (i % 2 == 1)
            out.x.set((i + 1) / 2, val);
        else
            out.y.set(i / 2, val);
    }
    return out;
}

SeqVector interleave(const TwistedVector& v) {
    SeqVector out;
    for (const auto& [i, val] : v.x.entries()) out.set(2 * i - 1, val);
    for (const auto& [i, val] : v.y.entries()) out.set(2 * i, val);
    return out;
}

Eigen::VectorXd apply_centralizer_dense(const Centralizer& c, const Eigen::VectorXd& x) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
    const double nx = eval_norm_dense(x, c.base());
    if (nx <= 0.0) return out;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] != 0.0) out[i] = x[i] * c.f(std::log(std::fabs(x[i]) / nx));
    return out;
}

double twisted_norm_dense(const TwistedSpace& t, const Eigen::VectorXd& interleaved) {
    const Eigen::Index m = (interleaved.size() + 1) / 2;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(m), y = Eigen::VectorXd::Zero(m);
    for (Eigen::Index i = 0; i < interleaved.size(); ++i) {
        if (i % 2 == 0)
            u[i / 2] = interleaved[i];
        else
            y[i / 2] = interleaved[i];
    }
    Eigen::VectorXd corrected = y - apply_centralizer_dense(t.omega(), u);
    return eval_norm_dense(u, t.omega().base()) + eval_norm_dense(corrected, t.omega().base());
}

namespace {

SeqVector gaussian_section_vector(SplitMix64& g, std::int64_t m) {
    SeqVector v;
    for (std::int64_t k = 1; k <= m; ++k) {
        double a = g.gaussian();
        if (a != 0.0) v.set(k, a);
    }
    return v;
}

TwistedVector draw_pair_component(const TwistedSpace& t, SplitMix64& g, std::int64_t m,
                                  bool matched) {
    TwistedVector v;
    v.x = gaussian_section_vector(g, m);
    if (matched) {
        v.y = apply_centralizer(t.omega(), v.x);
        // Perturb away from the exactly-matched pair so both regimes appear.
        SeqVector noise = gaussian_section_vector(g, m);
        v.y.add_scaled(noise, 0.25 * g.uniform01());
    } else {
        v.y = gaussian_section_vector(g, m);
    }
    return v;
}

Json twisted_vector_to_json(const TwistedVector& v) {
    Json jx = Json::array();
    for (const auto& [i, val] : v.x.entries()) jx.push_back({i, val});
    Json jy = Json::array();
    for (const auto& [i, val] : v.y.entries()) jy.push_back({i, val});
    return Json{{"x", jx}, {"y", jy}};
}

TwistedVector twisted_vector_from_json(const Json& j) {
    TwistedVector v;
    for (const auto& e : j.at("x")) v.x.set(e.at(0).get<std::int64_t>(), e.at(1).get<double>());
    for (const auto& e : j.at("y")) v.y.set(e.at(0).get<std::int64_t>(), e.at(1).get<double>());
    return v;
}

} // namespace

ConstantEstimate quasinorm_constant(const TwistedSpace& t, const Sampler& s) {
    const std::int64_t m = t.cap();
    const std::int64_t draws = s.count + 1;  // draw 0 is the deterministic (w, w) pair

    auto make_pair = [&](std::int64_t i) -> std::pair<TwistedVector, TwistedVector> {
        if (i == 0) {
            TwistedVector w;
            for (std::int64_t k = 1; k <= m; ++k) w.x.set(k, 1.0);
            return {w, w};
        }
        SplitMix64 g = s.stream(static_cast<std::uint64_t>(i));
        bool matched = (i % 3 == 0);
        TwistedVector u = draw_pair_component(t, g, m, matched);
        TwistedVector v = draw_pair_component(t, g, m, matched);
        return {u, v};
    };

    auto score = [&](std::int64_t i) -> double {
        auto [u, v] = make_pair(i);
        double nu = twisted_norm(t, u);
        double nv = twisted_norm(t, v);
        if (nu + nv < 1e-12) return 0.0;
        TwistedVector sum{u.x + v.x, u.y + v.y};
        return twisted_norm(t, sum) / (nu + nv);
    };

    par::Scored best = par::max_scan(draws, score);
    auto [u, v] = make_pair(best.index);

    ConstantEstimate est;
    est.lower_bound = best.value;
    est.samples_used = draws;
    est.exhaustive_signs = false;
    est.witness = Json{{"u", twisted_vector_to_json(u)},
                       {"v", twisted_vector_to_json(v)},
                       {"ratio", best.value}};
    return est;
}

double quasinorm_replay(const TwistedSpace& t, const Json& witness) {
    TwistedVector u = twisted_vector_from_json(witness.at("u"));
    TwistedVector v = twisted_vector_from_json(witness.at("v"));
    TwistedVector sum{u.x + v.x, u.y + v.y};
    return twisted_norm(t, sum) / (twisted_norm(t, u) + twisted_norm(t, v));
}

namespace {

// Residual of one pool member against a multiplier sequence.
double residual_norm(const Centralizer& omega, const SeqVector& omega_x, const SeqVector& x,
                     const SeqVector& b) {
    SeqVector r = omega_x;
    for (const auto& [i, bi] : b.entries()) {
        double xi = x[i];
        if (xi != 0.0) r.add(i, -bi * xi);
    }
    return eval_norm(r, omega.base());
}

} // namespace

DeficiencyResult splitting_deficiency(const TwistedSpace& t, std::int64_t n, const Sampler& s) {
    if (n < 1) throw PreconditionError("section size must be >= 1");
    if (n > t.cap()) throw PreconditionError("section size exceeds the space cap");
    const Centralizer& omega = t.omega();

    // Pool: coordinate vectors, dyadic flats, then random draws. All members
    // are normalized in the base norm so residuals are already ratios.
    std::vector<SeqVector> pool;
    for (std::int64_t k = 1; k <= n; ++k) pool.push_back(SeqVector::unit(k));
    for (std::int64_t w = 2; w <= n; w *= 2) {
        SeqVector flat;
        for (std::int64_t k = 1; k <= w; ++k) flat.set(k, 1.0);
        pool.push_back(flat);
    }
    for (std::int64_t i = 0; i < s.count; ++i) {
        SplitMix64 g = s.stream(static_cast<std::uint64_t>(i));
        SeqVector v = gaussian_section_vector(g, n);
        if (!v.is_zero()) pool.push_back(v);
    }
    for (SeqVector& x : pool) {
        double nx = eval_norm(x, omega.base());
        if (nx > 0.0) x *= 1.0 / nx;
    }

    std::vector<SeqVector> omega_pool(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i)
        omega_pool[i] = apply_centralizer(omega, pool[i]);

    const bool l2_base = omega.base().kind() == NormKind::Lp && omega.base().p() == 2.0;

    // Dense snapshots for the l2 fast path: per pool member, coordinate
    // values and the residual sum of squares under the current b.
    std::vector<Eigen::VectorXd> xs, os;
    Eigen::VectorXd sq;
    if (l2_base) {
        xs.resize(pool.size());
        os.resize(pool.size());
        sq.resize(static_cast<Eigen::Index>(pool.size()));
        for (std::size_t i = 0; i < pool.size(); ++i) {
            xs[i] = pool[i].dense(1, n);
            os[i] = omega_pool[i].dense(1, n);
        }
    }

    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);

    auto objective = [&](const Eigen::VectorXd& bvec) -> double {
        double worst = 0.0;
        SeqVector bs_ = SeqVector::from_dense(bvec);
        for (std::size_t i = 0; i < pool.size(); ++i)
            worst = std::max(worst, residual_norm(omega, omega_pool[i], pool[i], bs_));
        return worst;
    };

    // Per-coordinate ratio ranges; the optimal multiplier in coordinate k
    // always lies inside [blo[k], bhi[k]] (moving beyond the extreme ratio
    // increases every residual term).
    Eigen::VectorXd blo = Eigen::VectorXd::Zero(n), bhi = Eigen::VectorXd::Zero(n);

    // Decoupled per-coordinate initialization: b(k) minimizes the worst
    // absolute residual of the k-th coordinates alone; ties go to b(k) = 0.
    for (std::int64_t k = 0; k < n; ++k) {
        double lo = 0.0, hi = 0.0;
        bool any = false;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            double xi = pool[i][k + 1];
            if (std::fabs(xi) < 1e-14) continue;
            double r = omega_pool[i][k + 1] / xi;
            lo = any ? std::min(lo, r) : r;
            hi = any ? std::max(hi, r) : r;
            any = true;
        }
        blo[k] = lo;
        bhi[k] = hi;
        if (!any) { b[k] = 0.0; continue; }
        auto coord_obj = [&](double beta) {
            double worst = 0.0;
            for (std::size_t i = 0; i < pool.size(); ++i) {
                double xi = pool[i][k + 1];
                if (xi == 0.0) continue;
                worst = std::max(worst, std::fabs(omega_pool[i][k + 1] - beta * xi));
            }
            return worst;
        };
        double a = lo - 1.0, c = hi + 1.0;
        for (int it = 0; it < 120; ++it) {
            double m1 = a + (c - a) / 3.0, m2 = c - (c - a) / 3.0;
            if (coord_obj(m1) <= coord_obj(m2)) c = m2; else a = m1;
        }
        double beta = 0.5 * (a + c);
        b[k] = (coord_obj(0.0) <= coord_obj(beta) + 1e-12) ? 0.0 : beta;
    }

    // Alternating coordinate minimax on the true objective (convex in each
    // coordinate), 50 rounds with early stop.
    auto sweep_l2 = [&]() {
        for (std::size_t i = 0; i < pool.size(); ++i)
            sq[static_cast<Eigen::Index>(i)] = (os[i] - b.cwiseProduct(xs[i])).squaredNorm();
        double current = std::sqrt(sq.maxCoeff());
        for (int round = 0; round < 50; ++round) {
            double before = current;
            for (std::int64_t k = 0; k < n; ++k) {
                auto obj_at = [&](double beta) {
                    double worst = 0.0;
                    for (std::size_t i = 0; i < pool.size(); ++i) {
                        double xi = xs[i][k];
                        double old_term = os[i][k] - b[k] * xi;
                        double new_term = os[i][k] - beta * xi;
                        double v = sq[static_cast<Eigen::Index>(i)] - old_term * old_term +
                                   new_term * new_term;
                        worst = std::max(worst, v);
                    }
                    return worst;
                };
                double a = blo[k] - 1.0, c = bhi[k] + 1.0;
                for (int it = 0; it < 80; ++it) {
                    double m1 = a + (c - a) / 3.0, m2 = c - (c - a) / 3.0;
                    if (obj_at(m1) <= obj_at(m2)) c = m2; else a = m1;
                }
                double beta = 0.5 * (a + c);
                if (obj_at(0.0) <= obj_at(beta)) beta = 0.0;
                if (obj_at(beta) < obj_at(b[k])) {
                    double old = b[k];
                    b[k] = beta;
                    for (std::size_t i = 0; i < pool.size(); ++i) {
                        double xi = xs[i][k];
                        double old_term = os[i][k] - old * xi;
                        double new_term = os[i][k] - beta * xi;
                        sq[static_cast<Eigen::Index>(i)] +=
                            new_term * new_term - old_term * old_term;
                    }
                }
            }
            current = std::sqrt(std::max(0.0, sq.maxCoeff()));
            if (before - current < 1e-13) break;
        }
    };

    auto sweep_generic = [&]() {
        double current = objective(b);
        for (int round = 0; round < 50; ++round) {
            double before = current;
            for (std::int64_t k = 0; k < n; ++k) {
                Eigen::VectorXd trial = b;
                auto obj_at = [&](double beta) {
                    trial[k] = beta;
                    return objective(trial);
                };
                double a = blo[k] - 1.0, c = bhi[k] + 1.0;
                for (int it = 0; it < 40; ++it) {
                    double m1 = a + (c - a) / 3.0, m2 = c - (c - a) / 3.0;
                    if (obj_at(m1) <= obj_at(m2)) c = m2; else a = m1;
                }
                double beta = 0.5 * (a + c);
                if (obj_at(0.0) <= obj_at(beta)) beta = 0.0;
                if (obj_at(beta) < obj_at(b[k])) b[k] = beta;
            }
            current = objective(b);
            if (before - current < 1e-13) break;
        }
    };

    if (l2_base) sweep_l2(); else sweep_generic();

    DeficiencyResult out;
    out.b = SeqVector::from_dense(b);
    out.samples_used = static_cast<std::int64_t>(pool.size());
    double worst = -1.0;
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        double r = residual_norm(omega, omega_pool[i], pool[i], out.b);
        if (r > worst) { worst = r; worst_i = i; }
    }
    out.C = std::max(0.0, worst);
    out.witness = pool[worst_i];
    return out;
}

double deficiency_replay(const TwistedSpace& t, const SeqVector& b, const SeqVector& x) {
    double nx = eval_norm(x, t.omega().base());
    if (nx <= 0.0) return 0.0;
    SeqVector r = apply_centralizer(t.omega(), x);
    for (const auto& [i, bi] : b.entries()) {
        double xi = x[i];
        if (xi != 0.0) r.add(i, -bi * xi);
    }
    return eval_norm(r, t.omega().base()) / nx;
}

} // namespace banachlab::twisted
