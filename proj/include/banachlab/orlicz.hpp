#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "banachlab/seq_vector.hpp"

namespace banachlab::orlicz {

enum class Family { G, F, Fa };

// The function family of the construction:
//   G(x) = x(1 - log(x)/2) on (0,1],  sqrt(x) beyond;
//   F(x) = x^2(1 - log x)  on (0,1],  x beyond;
//   F_a(x) = x^2(1 - a log x) on (0,1], x beyond,  0 <= a <= 1.
// All vanish at 0, are continuous (both one-sided values agree at x = 1) and
// strictly increasing on [0, inf). F(x) = G(x^2) identically and F_1 = F,
// F_0(x) = x^2 on (0,1].
class OrliczFn {
public:
    static OrliczFn G() { return OrliczFn(Family::G, 0.0); }
    static OrliczFn F() { return OrliczFn(Family::F, 1.0); }
    static OrliczFn Fa(double a);

    // Evaluation; rejects x < 0. Arguments below 1e-300 return 0 (the limit).
    double operator()(double x) const;

    Family family() const { return family_; }
    double a() const { return a_; }
    std::string name() const;

private:
    OrliczFn(Family f, double a) : family_(f), a_(a) {}
    Family family_;
    double a_;
};

// Per-block Musielak weights a_n in [0,1]. Indexing is 1-based to match
// coordinates; beyond the stored profile the weight extends as a = 1 (i.e.
// plain F), so the modular is total.
class MusielakProfile {
public:
    MusielakProfile() = default;
    explicit MusielakProfile(std::vector<double> a);

    double at(std::int64_t block) const {
        if (block < 1) throw PreconditionError("profile index must be >= 1");
        std::size_t i = static_cast<std::size_t>(block - 1);
        return i < a_.size() ? a_[i] : 1.0;
    }

    const std::vector<double>& values() const { return a_; }
    std::size_t size() const { return a_.size(); }

private:
    std::vector<double> a_;
};

// The modular Lambda(x) = sum_n F(|x(n)|), or its Musielak variant
// sum_n F_{a_n}(|x(n)|).
double modular(const SeqVector& x, const OrliczFn& fn);
double modular(const SeqVector& x, const MusielakProfile& profile);

// Luxemburg gauge: the unique t > 0 with sum fn(|x(n)|/t) = 1 (0 for x = 0).
// Bisection to relative width 1e-12, at most 200 iterations.
double luxemburg_gauge(const SeqVector& x, const OrliczFn& fn);
double luxemburg_gauge(const SeqVector& x, const MusielakProfile& profile);

namespace detail {
// Shared bisection kernel. modular_at must be continuous and strictly
// decreasing; l2/l1 bracket the root for this function family.
double gauge_bisect(double l2, double l1, const std::function<double(double)>& modular_at);
} // namespace detail

// Dense-window gauge kernels for estimator inner loops. fn maps u >= 0 to
// fn(u); the indexed variant receives the 1-based coordinate as well.
template <class Fn>
double luxemburg_gauge_dense(const Eigen::VectorXd& x, Fn&& fn) {
    double l1 = 0.0, l2 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        l1 += std::fabs(x[i]);
        l2 += x[i] * x[i];
    }
    if (l1 == 0.0) return 0.0;
    return detail::gauge_bisect(std::sqrt(l2), l1, [&](double t) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (x[i] != 0.0) s += fn(std::fabs(x[i]) / t);
        return s;
    });
}

template <class Fn>
double luxemburg_gauge_dense_indexed(const Eigen::VectorXd& x, Fn&& fn) {
    double l1 = 0.0, l2 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        l1 += std::fabs(x[i]);
        l2 += x[i] * x[i];
    }
    if (l1 == 0.0) return 0.0;
    return detail::gauge_bisect(std::sqrt(l2), l1, [&](double t) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (x[i] != 0.0) s += fn(i + 1, std::fabs(x[i]) / t);
        return s;
    });
}

// Musielak profile of a block sequence: a_n = ||x_n||_2^2. Each block must be
// normalized in the F-gauge within 1e-9 (which forces every coordinate <= 1
// in absolute value).
MusielakProfile musielak_profile(const std::vector<SeqVector>& blocks);

} // namespace banachlab::orlicz
