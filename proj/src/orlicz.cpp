#include "banachlab/orlicz.hpp"

#include <cmath>
#include <functional>

namespace banachlab::orlicz {

OrliczFn OrliczFn::Fa(double a) {
    if (!(a >= 0.0 && a <= 1.0))
        throw PreconditionError("F_a requires a in [0,1]");
    return OrliczFn(Family::Fa, a);
}

double OrliczFn::operator()(double x) const {
    if (x < 0.0) throw PreconditionError("Orlicz functions take x >= 0");
    if (x < 1e-300) return 0.0;
    switch (family_) {
        case Family::G:
            return x <= 1.0 ? x * (1.0 - 0.5 * std::log(x)) : std::sqrt(x);
        case Family::F:
            return x <= 1.0 ? x * x * (1.0 - std::log(x)) : x;
        case Family::Fa:
            return x <= 1.0 ? x * x * (1.0 - a_ * std::log(x)) : x;
    }
    return 0.0;
}

std::string OrliczFn::name() const {
    switch (family_) {
        case Family::G: return "G";
        case Family::F: return "F";
        case Family::Fa: return "Fa(" + std::to_string(a_) + ")";
    }
    return "?";
}

MusielakProfile::MusielakProfile(std::vector<double> a) : a_(std::move(a)) {
    for (double v : a_)
        if (!(v >= 0.0 && v <= 1.0))
            throw PreconditionError("Musielak profile weights must lie in [0,1]");
}

double modular(const SeqVector& x, const OrliczFn& fn) {
    double s = 0.0;
    for (const auto& [i, v] : x.entries()) s += fn(std::fabs(v));
    return s;
}

double modular(const SeqVector& x, const MusielakProfile& profile) {
    double s = 0.0;
    for (const auto& [i, v] : x.entries())
        s += OrliczFn::Fa(profile.at(i))(std::fabs(v));
    return s;
}

namespace detail {

// Bisection on t -> sum fn(|x(n)|/t), which is continuous and strictly
// decreasing for x != 0. The gauge is the root of modular = 1; the paper's
// sup-form set is an upper ray, so the root is the meaningful value.
// F(u) >= u^2 on [0,1] for every family member, so the modular at t = ||x||_2
// is >= 1 and the l2 norm is a valid lower bracket; F(u) <= u makes the l1
// norm an upper bracket for the F family (G doubles up from there).
double gauge_bisect(double l2, double l1, const std::function<double(double)>& modular_at) {
    double lo = l2;
    double hi = std::max(l1, 2.0 * lo);
    int guard = 0;
    while (modular_at(hi) > 1.0 && guard++ < 200) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (modular_at(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

namespace {

double gauge_by_bisection(const SeqVector& x,
                          const std::function<double(double)>& modular_at) {
    if (x.is_zero()) return 0.0;
    return detail::gauge_bisect(x.l2(), x.l1(), modular_at);
}

} // namespace

double luxemburg_gauge(const SeqVector& x, const OrliczFn& fn) {
    return gauge_by_bisection(x, [&](double t) {
        double s = 0.0;
        for (const auto& [i, v] : x.entries()) s += fn(std::fabs(v) / t);
        return s;
    });
}

double luxemburg_gauge(const SeqVector& x, const MusielakProfile& profile) {
    return gauge_by_bisection(x, [&](double t) {
        double s = 0.0;
        for (const auto& [i, v] : x.entries())
            s += OrliczFn::Fa(profile.at(i))(std::fabs(v) / t);
        return s;
    });
}

MusielakProfile musielak_profile(const std::vector<SeqVector>& blocks) {
    const OrliczFn F = OrliczFn::F();
    std::vector<double> a;
    a.reserve(blocks.size());
    for (std::size_t n = 0; n < blocks.size(); ++n) {
        const SeqVector& b = blocks[n];
        double g = luxemburg_gauge(b, F);
        if (std::fabs(g - 1.0) > 1e-9)
            throw PreconditionError("block " + std::to_string(n + 1) +
                                    " is not F-normalized: gauge = " + std::to_string(g));
        if (b.linf() > 1.0 + 1e-12)
            throw PreconditionError("block " + std::to_string(n + 1) +
                                    " has a coordinate above 1");
        double a_n = 0.0;
        for (const auto& [i, v] : b.entries()) a_n += v * v;
        a.push_back(std::min(a_n, 1.0));
    }
    return MusielakProfile(std::move(a));
}

} // namespace banachlab::orlicz
