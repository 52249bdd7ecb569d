#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "banachlab/constant_estimate.hpp"
#include "banachlab/norm.hpp"
#include "banachlab/rng.hpp"
#include "banachlab/seq_vector.hpp"

namespace banachlab::twisted {

enum class ScalarFn { Identity, Zero, Clamp, PiecewiseLinear };

// Homogeneous centralizer Omega on a sequence space X:
//   Omega(x)(n) = x(n) * f(log(|x(n)| / ||x||_X)),   Omega(x)(n) = 0 at x(n) = 0,
// with f a scalar Lipschitz function. Omega(alpha x) = alpha Omega(x) holds
// exactly for all real alpha by construction.
class Centralizer {
public:
    static Centralizer identity(NormSpec base);
    static Centralizer zero(NormSpec base);
    static Centralizer clamp(NormSpec base, double L);
    // Piecewise-linear interpolation through sorted (t, value) knots, constant
    // beyond the end knots.
    static Centralizer piecewise_linear(NormSpec base,
                                        std::vector<std::pair<double, double>> knots);

    double f(double t) const;
    double lipschitz() const { return lipschitz_; }
    ScalarFn scalar_fn() const { return fn_; }
    double clamp_level() const { return clamp_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }
    const NormSpec& base() const { return base_; }

private:
    Centralizer(NormSpec base, ScalarFn fn) : base_(std::move(base)), fn_(fn) {}
    void verify_lipschitz() const;

    NormSpec base_;
    ScalarFn fn_;
    double clamp_ = 0.0;
    std::vector<std::pair<double, double>> knots_;
    double lipschitz_ = 0.0;
};

struct TwistedVector {
    SeqVector x;
    SeqVector y;
};

// Finite section of the twisted sum X (+)_Omega X with the quasi-norm
// ||(x,y)|| = ||x||_X + ||y - Omega(x)||_X. The cap bounds section sizes the
// estimators accept.
class TwistedSpace {
public:
    TwistedSpace(Centralizer omega, std::int64_t cap);

    const Centralizer& omega() const { return omega_; }
    std::int64_t cap() const { return cap_; }

private:
    Centralizer omega_;
    std::int64_t cap_;
};

SeqVector apply_centralizer(const Centralizer& c, const SeqVector& x);

double twisted_norm(const TwistedSpace& t, const TwistedVector& v);

// Interleaving between a twisted pair and a single coordinate vector:
// coordinate 2k-1 <-> x(k), coordinate 2k <-> y(k).
TwistedVector split_interleaved(const SeqVector& v);
SeqVector interleave(const TwistedVector& v);

// Dense kernels used by estimator inner loops.
Eigen::VectorXd apply_centralizer_dense(const Centralizer& c, const Eigen::VectorXd& x);
double twisted_norm_dense(const TwistedSpace& t, const Eigen::VectorXd& interleaved);

// Best quasi-norm constant found: max of ||u+v|| / (||u|| + ||v||) over
// sampled pairs of section vectors (always >= 1, witnessed).
ConstantEstimate quasinorm_constant(const TwistedSpace& t, const Sampler& s);
double quasinorm_replay(const TwistedSpace& t, const Json& witness);

// Splitting-deficiency estimate on the n-dimensional section: the returned b
// approximately minimizes max over the sample of ||Omega(x) - b x||_X with
// ||x||_X = 1, and C is that max at the returned b (a lower bound on the
// deficiency of b over the whole section).
struct DeficiencyResult {
    SeqVector b;
    double C = 0.0;
    SeqVector witness;
    std::int64_t samples_used = 0;
};

DeficiencyResult splitting_deficiency(const TwistedSpace& t, std::int64_t n, const Sampler& s);
double deficiency_replay(const TwistedSpace& t, const SeqVector& b, const SeqVector& x);

} // namespace banachlab::twisted
