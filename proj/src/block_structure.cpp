#include "banachlab/block_structure.hpp"

#include <cmath>

namespace banachlab {

BlockStructure::BlockStructure(std::vector<std::int64_t> boundaries,
                               std::vector<Eigen::MatrixXd> block_bases)
    : boundaries_(std::move(boundaries)), bases_(std::move(block_bases)) {
    if (boundaries_.size() != bases_.size() + 1)
        throw PreconditionError("boundaries must have one more entry than blocks");
    if (boundaries_.empty() || boundaries_.front() != 0)
        throw PreconditionError("boundaries must start at p_0 = 0");
    for (std::size_t n = 0; n + 1 < boundaries_.size(); ++n)
        if (boundaries_[n + 1] <= boundaries_[n])
            throw PreconditionError("boundaries must be strictly increasing");
    for (std::size_t n = 0; n < bases_.size(); ++n) {
        const Eigen::MatrixXd& B = bases_[n];
        const std::int64_t w = boundaries_[n + 1] - boundaries_[n];
        if (B.rows() != w)
            throw PreconditionError("block basis rows must equal the window width");
        if (B.cols() < 1 || B.cols() > w)
            throw PreconditionError("block basis must have 1..width columns");
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
        qr.setThreshold(1e-10);
        if (qr.rank() != B.cols())
            throw PreconditionError("block basis matrix is column rank deficient");
    }
}

BlockStructure BlockStructure::coordinate_blocks(std::int64_t count, std::int64_t width) {
    std::vector<std::int64_t> bounds(static_cast<std::size_t>(count) + 1);
    std::vector<Eigen::MatrixXd> bases(static_cast<std::size_t>(count));
    for (std::int64_t n = 0; n <= count; ++n) bounds[static_cast<std::size_t>(n)] = n * width;
    for (auto& B : bases) B = Eigen::MatrixXd::Identity(width, width);
    return BlockStructure(std::move(bounds), std::move(bases));
}

std::int64_t BlockStructure::max_width() const {
    std::int64_t w = 0;
    for (std::size_t n = 0; n < count(); ++n) w = std::max(w, width(n));
    return w;
}

std::vector<Eigen::VectorXd> block_decompose(const SeqVector& x, const BlockStructure& bs) {
    if (!x.is_zero() && (x.min_index() < 1 || x.max_index() > bs.cover_end()))
        throw PreconditionError("vector has support outside the covered coordinates");

    std::vector<Eigen::VectorXd> coeffs(bs.count());
    for (std::size_t n = 0; n < bs.count(); ++n) {
        Eigen::VectorXd window = x.dense(bs.window_lo(n) + 1, bs.width(n));
        const Eigen::MatrixXd& B = bs.basis(n);
        Eigen::VectorXd c = B.colPivHouseholderQr().solve(window);
        double resid = (B * c - window).norm();
        double scale = std::max(1.0, window.norm());
        if (resid > 1e-12 * scale)
            throw PreconditionError("coordinates outside the block span: residual " +
                                    std::to_string(resid) + " in block " + std::to_string(n + 1));
        coeffs[n] = std::move(c);
    }
    return coeffs;
}

SeqVector assemble(const BlockStructure& bs, const std::vector<Eigen::VectorXd>& coeffs) {
    if (coeffs.size() != bs.count())
        throw PreconditionError("coefficient list size must match block count");
    SeqVector x;
    for (std::size_t n = 0; n < bs.count(); ++n) {
        Eigen::VectorXd w = bs.basis(n) * coeffs[n];
        for (Eigen::Index i = 0; i < w.size(); ++i)
            if (w[i] != 0.0) x.add(bs.window_lo(n) + 1 + i, w[i]);
    }
    return x;
}

SeqVector block_vector(const BlockStructure& bs, std::size_t n, const Eigen::VectorXd& c) {
    SeqVector x;
    Eigen::VectorXd w = bs.basis(n) * c;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w[i] != 0.0) x.add(bs.window_lo(n) + 1 + i, w[i]);
    return x;
}

} // namespace banachlab
