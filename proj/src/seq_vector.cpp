#include "banachlab/seq_vector.hpp"

#include <cmath>

namespace banachlab {

SeqVector SeqVector::from_dense(const Eigen::VectorXd& d, std::int64_t first_index) {
    SeqVector v;
    for (Eigen::Index i = 0; i < d.size(); ++i)
        if (d[i] != 0.0) v.set(first_index + i, d[i]);
    return v;
}

SeqVector& SeqVector::operator+=(const SeqVector& o) {
    for (const auto& [i, x] : o.entries_) add(i, x);
    return *this;
}

SeqVector& SeqVector::operator-=(const SeqVector& o) {
    for (const auto& [i, x] : o.entries_) add(i, -x);
    return *this;
}

SeqVector& SeqVector::operator*=(double s) {
    if (s == 0.0) {
        entries_.clear();
        return *this;
    }
    for (auto& [i, x] : entries_) x *= s;
    return *this;
}

SeqVector& SeqVector::add_scaled(const SeqVector& o, double s) {
    if (s == 0.0) return *this;
    for (const auto& [i, x] : o.entries_) add(i, s * x);
    return *this;
}

SeqVector SeqVector::abs() const {
    SeqVector v;
    for (const auto& [i, x] : entries_) v.set(i, std::fabs(x));
    return v;
}

double SeqVector::l1() const {
    double s = 0.0;
    for (const auto& [i, x] : entries_) s += std::fabs(x);
    return s;
}

double SeqVector::l2() const {
    double s = 0.0;
    for (const auto& [i, x] : entries_) s += x * x;
    return std::sqrt(s);
}

double SeqVector::linf() const {
    double s = 0.0;
    for (const auto& [i, x] : entries_) s = std::max(s, std::fabs(x));
    return s;
}

double SeqVector::dot(const SeqVector& o) const {
    const SeqVector* a = this;
    const SeqVector* b = &o;
    if (a->entries_.size() > b->entries_.size()) std::swap(a, b);
    double s = 0.0;
    for (const auto& [i, x] : a->entries_) s += x * (*b)[i];
    return s;
}

Eigen::VectorXd SeqVector::dense(std::int64_t first, Eigen::Index dim) const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
    auto it = entries_.lower_bound(first);
    for (; it != entries_.end() && it->first < first + dim; ++it)
        d[it->first - first] = it->second;
    return d;
}

} // namespace banachlab
