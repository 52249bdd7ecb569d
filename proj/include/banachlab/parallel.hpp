#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace banachlab::par {

// Thread cap: min(OMP max threads, BANACHLAB_THREADS if set).
int max_threads();

// Runtime switch between the OpenMP kernels and the serial reference path.
// Both produce bit-identical results; tests assert this and the benchmark
// target compares their speed.
bool parallel_enabled();
void set_parallel_enabled(bool on);

struct Scored {
    double value = 0.0;
    std::int64_t index = -1;
};

// a strictly better than b under "maximize value, break ties toward the
// smaller index".  Indexed tie-breaking keeps reductions associative and
// commutative, so any chunking of the index range yields the same winner.
inline bool better_max(const Scored& a, const Scored& b) {
    if (b.index < 0) return true;
    if (a.index < 0) return false;
    if (a.value != b.value) return a.value > b.value;
    return a.index < b.index;
}

inline bool better_min(const Scored& a, const Scored& b) {
    if (b.index < 0) return true;
    if (a.index < 0) return false;
    if (a.value != b.value) return a.value < b.value;
    return a.index < b.index;
}

namespace detail {

template <class Fn, class Better>
Scored scan_serial(std::int64_t count, Fn&& score, Better&& better) {
    Scored best;
    for (std::int64_t i = 0; i < count; ++i) {
        Scored s{score(i), i};
        if (better(s, best)) best = s;
    }
    return best;
}

template <class Fn, class Better>
Scored scan_parallel(std::int64_t count, Fn&& score, Better&& better) {
#ifdef _OPENMP
    const int nt = max_threads();
    if (nt > 1 && count > 1) {
        std::vector<Scored> partial(static_cast<std::size_t>(nt));
#pragma omp parallel num_threads(nt)
        {
            const int tid = omp_get_thread_num();
            Scored local;
#pragma omp for schedule(static)
            for (std::int64_t i = 0; i < count; ++i) {
                Scored s{score(i), i};
                if (better(s, local)) local = s;
            }
            partial[static_cast<std::size_t>(tid)] = local;
        }
        Scored best;
        for (const Scored& s : partial)
            if (s.index >= 0 && better(s, best)) best = s;
        return best;
    }
#endif
    return scan_serial(count, score, better);
}

} // namespace detail

// Deterministic max-reduction over an index range. score(i) must depend on i
// only (draws take their randomness from sub-seeds keyed by i).
template <class Fn>
Scored max_scan(std::int64_t count, Fn&& score) {
    if (parallel_enabled())
        return detail::scan_parallel(count, score, better_max);
    return detail::scan_serial(count, score, better_max);
}

template <class Fn>
Scored min_scan(std::int64_t count, Fn&& score) {
    if (parallel_enabled())
        return detail::scan_parallel(count, score, better_min);
    return detail::scan_serial(count, score, better_min);
}

struct SlackOutcome {
    double slack = 0.0;
    bool skipped = false;
};

struct SlackScan {
    double worst_slack = 0.0;       // min slack over non-skipped instances
    std::int64_t worst_index = -1;
    std::int64_t evaluated = 0;
    std::int64_t skipped = 0;
    std::vector<std::int64_t> violators;  // slack < -tol, ascending index, capped
};

inline constexpr std::size_t kMaxViolatorsKept = 16;

// Verifier scan: min slack + violator collection. Violators are merged by
// index order so the result is identical for any thread count.
template <class Fn>
SlackScan slack_scan(std::int64_t count, double tol, Fn&& eval) {
    SlackScan out;
    auto fold = [&](SlackScan& acc, std::int64_t i, const SlackOutcome& r) {
        if (r.skipped) { ++acc.skipped; return; }
        ++acc.evaluated;
        if (acc.worst_index < 0 || r.slack < acc.worst_slack ||
            (r.slack == acc.worst_slack && i < acc.worst_index)) {
            acc.worst_slack = r.slack;
            acc.worst_index = i;
        }
        if (r.slack < -tol) acc.violators.push_back(i);
    };

#ifdef _OPENMP
    if (parallel_enabled()) {
        const int nt = max_threads();
        if (nt > 1 && count > 1) {
            std::vector<SlackScan> partial(static_cast<std::size_t>(nt));
#pragma omp parallel num_threads(nt)
            {
                const int tid = omp_get_thread_num();
                SlackScan& local = partial[static_cast<std::size_t>(tid)];
#pragma omp for schedule(static)
                for (std::int64_t i = 0; i < count; ++i) fold(local, i, eval(i));
            }
            for (const SlackScan& loc : partial) {
                out.evaluated += loc.evaluated;
                out.skipped += loc.skipped;
                if (loc.worst_index >= 0 &&
                    (out.worst_index < 0 || loc.worst_slack < out.worst_slack ||
                     (loc.worst_slack == out.worst_slack && loc.worst_index < out.worst_index))) {
                    out.worst_slack = loc.worst_slack;
                    out.worst_index = loc.worst_index;
                }
                out.violators.insert(out.violators.end(), loc.violators.begin(),
                                     loc.violators.end());
            }
            std::sort(out.violators.begin(), out.violators.end());
            if (out.violators.size() > kMaxViolatorsKept)
                out.violators.resize(kMaxViolatorsKept);
            return out;
        }
    }
#endif
    for (std::int64_t i = 0; i < count; ++i) fold(out, i, eval(i));
    if (out.violators.size() > kMaxViolatorsKept)
        out.violators.resize(kMaxViolatorsKept);
    return out;
}

} // namespace banachlab::par
