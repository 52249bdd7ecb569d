#pragma once

#include <cstdint>
#include <map>

#include <Eigen/Dense>

#include "banachlab/errors.hpp"

namespace banachlab {

// Finitely supported real coordinate vector over 1-based indices: the element
// of c00 every sequence-space computation works on. No zero entries are ever
// stored; all indices are >= 1.
class SeqVector {
public:
    using Map = std::map<std::int64_t, double>;

    SeqVector() = default;

    static SeqVector unit(std::int64_t i) {
        SeqVector v;
        v.set(i, 1.0);
        return v;
    }

    static SeqVector from_dense(const Eigen::VectorXd& d, std::int64_t first_index = 1);

    double operator[](std::int64_t i) const {
        auto it = entries_.find(i);
        return it == entries_.end() ? 0.0 : it->second;
    }

    void set(std::int64_t i, double v) {
        if (i < 1) throw PreconditionError("SeqVector index must be >= 1");
        if (v == 0.0)
            entries_.erase(i);
        else
            entries_[i] = v;
    }

    void add(std::int64_t i, double v) { set(i, (*this)[i] + v); }

    const Map& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }
    std::int64_t max_index() const { return entries_.empty() ? 0 : entries_.rbegin()->first; }
    std::int64_t min_index() const { return entries_.empty() ? 0 : entries_.begin()->first; }

    SeqVector& operator+=(const SeqVector& o);
    SeqVector& operator-=(const SeqVector& o);
    SeqVector& operator*=(double s);
    SeqVector& add_scaled(const SeqVector& o, double s);

    friend SeqVector operator+(SeqVector a, const SeqVector& b) { return a += b; }
    friend SeqVector operator-(SeqVector a, const SeqVector& b) { return a -= b; }
    friend SeqVector operator*(SeqVector a, double s) { return a *= s; }
    friend SeqVector operator*(double s, SeqVector a) { return a *= s; }

    bool operator==(const SeqVector& o) const { return entries_ == o.entries_; }

    SeqVector abs() const;

    double l1() const;
    double l2() const;
    double linf() const;
    double dot(const SeqVector& o) const;

    // Coordinates [first, first + dim) as a dense vector.
    Eigen::VectorXd dense(std::int64_t first, Eigen::Index dim) const;

private:
    Map entries_;
};

} // namespace banachlab
