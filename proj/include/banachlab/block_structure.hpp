#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "banachlab/seq_vector.hpp"

namespace banachlab {

// A finite UFDD section: consecutive coordinate windows (p_{n-1}, p_n] with a
// full-column-rank basis matrix per block. Basis columns are coordinates of
// the block's basis vectors inside the window.
class BlockStructure {
public:
    BlockStructure(std::vector<std::int64_t> boundaries,
                   std::vector<Eigen::MatrixXd> block_bases);

    // Windows of width w with the identity basis, starting at coordinate 1.
    static BlockStructure coordinate_blocks(std::int64_t count, std::int64_t width);

    std::size_t count() const { return bases_.size(); }
    std::int64_t window_lo(std::size_t n) const { return boundaries_[n]; }      // exclusive
    std::int64_t window_hi(std::size_t n) const { return boundaries_[n + 1]; }  // inclusive
    std::int64_t width(std::size_t n) const { return boundaries_[n + 1] - boundaries_[n]; }
    Eigen::Index dim(std::size_t n) const { return bases_[n].cols(); }
    const Eigen::MatrixXd& basis(std::size_t n) const { return bases_[n]; }
    std::int64_t cover_end() const { return boundaries_.back(); }
    std::int64_t max_width() const;

    const std::vector<std::int64_t>& boundaries() const { return boundaries_; }

private:
    std::vector<std::int64_t> boundaries_;  // p_0 = 0 < p_1 < ...
    std::vector<Eigen::MatrixXd> bases_;
};

// Per-block coefficients of x in the block bases (least squares per block).
// Errors if x has support outside the covered coordinates or the reassembled
// vector misses x by more than 1e-12 relative.
std::vector<Eigen::VectorXd> block_decompose(const SeqVector& x, const BlockStructure& bs);

// Sum of per-block basis combinations back into coordinates.
SeqVector assemble(const BlockStructure& bs, const std::vector<Eigen::VectorXd>& coeffs);

// The single block-n vector with the given coefficients.
SeqVector block_vector(const BlockStructure& bs, std::size_t n, const Eigen::VectorXd& c);

} // namespace banachlab
