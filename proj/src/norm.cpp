#include "banachlab/norm.hpp"

#include <cmath>

#include "banachlab/twisted.hpp"

namespace banachlab {

NormSpec NormSpec::lp(double p) {
    if (!(p >= 1.0))
        throw PreconditionError("Lp requires p >= 1");
    NormSpec n(NormKind::Lp);
    n.p_ = p;
    return n;
}

NormSpec NormSpec::orlicz_gauge(orlicz::OrliczFn fn) {
    NormSpec n(NormKind::OrliczGauge);
    n.fn_ = fn;
    return n;
}

NormSpec NormSpec::musielak(orlicz::MusielakProfile profile) {
    NormSpec n(NormKind::Musielak);
    n.profile_ = std::move(profile);
    return n;
}

NormSpec NormSpec::twisted_section(std::shared_ptr<const twisted::TwistedSpace> space) {
    if (!space) throw PreconditionError("null twisted space");
    NormSpec n(NormKind::Twisted);
    n.twisted_ = std::move(space);
    return n;
}

NormSpec NormSpec::block_euclidean(BlockStructure blocks, std::vector<Eigen::MatrixXd> grams) {
    if (grams.size() != blocks.count())
        throw PreconditionError("one Gram matrix per block required");
    for (std::size_t n = 0; n < grams.size(); ++n) {
        const Eigen::MatrixXd& G = grams[n];
        if (G.rows() != G.cols() || G.rows() != blocks.dim(n))
            throw PreconditionError("Gram dimension must match block dimension");
        if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + G.cwiseAbs().maxCoeff()))
            throw PreconditionError("Gram matrix is not symmetric");
        Eigen::LLT<Eigen::MatrixXd> llt(G);
        if (llt.info() != Eigen::Success)
            throw PreconditionError("Gram matrix is not positive definite");
    }
    NormSpec n(NormKind::BlockEuclidean);
    n.block_euclidean_ = std::make_shared<BlockEuclidean>(
        BlockEuclidean{std::move(blocks), std::move(grams)});
    return n;
}

std::string NormSpec::name() const {
    switch (kind_) {
        case NormKind::Lp:
            return p_ == infinity ? "l_inf" : "l_" + std::to_string(p_);
        case NormKind::OrliczGauge: return "orlicz-gauge[" + fn_->name() + "]";
        case NormKind::Musielak: return "musielak";
        case NormKind::Twisted: return "twisted";
        case NormKind::BlockEuclidean: return "block-euclidean";
    }
    return "?";
}

namespace {

double lp_norm(const SeqVector& x, double p) {
    if (p == NormSpec::infinity) return x.linf();
    if (p == 1.0) return x.l1();
    if (p == 2.0) return x.l2();
    double s = 0.0;
    for (const auto& [i, v] : x.entries()) s += std::pow(std::fabs(v), p);
    return std::pow(s, 1.0 / p);
}

} // namespace

namespace {

double lp_norm_dense(const Eigen::VectorXd& x, double p) {
    if (p == NormSpec::infinity) return x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
    if (p == 1.0) return x.lpNorm<1>();
    if (p == 2.0) return x.norm();
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::fabs(x[i]), p);
    return std::pow(s, 1.0 / p);
}

} // namespace

double eval_norm_dense(const Eigen::VectorXd& x, const NormSpec& n) {
    switch (n.kind()) {
        case NormKind::Lp:
            return lp_norm_dense(x, n.p());
        case NormKind::OrliczGauge:
            return orlicz::luxemburg_gauge_dense(
                x, [&](double u) { return n.fn()(u); });
        case NormKind::Musielak:
            return orlicz::luxemburg_gauge_dense_indexed(x, [&](std::int64_t i, double u) {
                return orlicz::OrliczFn::Fa(n.profile().at(i))(u);
            });
        case NormKind::Twisted:
            return twisted::twisted_norm_dense(n.twisted_space(), x);
        case NormKind::BlockEuclidean: {
            const BlockEuclidean& be = n.block_euclidean_data();
            if (x.size() > be.blocks.cover_end()) {
                for (Eigen::Index i = be.blocks.cover_end(); i < x.size(); ++i)
                    if (x[i] != 0.0)
                        throw PreconditionError("vector has support outside the covered coordinates");
            }
            double s = 0.0;
            for (std::size_t k = 0; k < be.blocks.count(); ++k) {
                const std::int64_t lo = be.blocks.window_lo(k);
                const std::int64_t w = be.blocks.width(k);
                Eigen::VectorXd window = Eigen::VectorXd::Zero(w);
                for (std::int64_t i = 0; i < w && lo + i < x.size(); ++i)
                    window[i] = x[lo + i];
                const Eigen::MatrixXd& B = be.blocks.basis(k);
                Eigen::VectorXd c = B.colPivHouseholderQr().solve(window);
                if ((B * c - window).norm() > 1e-12 * std::max(1.0, window.norm()))
                    throw PreconditionError("coordinates outside the block span");
                s += c.dot(be.grams[k] * c);
            }
            return std::sqrt(s);
        }
    }
    return 0.0;
}

double eval_norm(const SeqVector& x, const NormSpec& n) {
    switch (n.kind()) {
        case NormKind::Lp:
            return lp_norm(x, n.p());
        case NormKind::OrliczGauge:
            return orlicz::luxemburg_gauge(x, n.fn());
        case NormKind::Musielak:
            return orlicz::luxemburg_gauge(x, n.profile());
        case NormKind::Twisted:
            return twisted::twisted_norm(n.twisted_space(), twisted::split_interleaved(x));
        case NormKind::BlockEuclidean: {
            const BlockEuclidean& be = n.block_euclidean_data();
            std::vector<Eigen::VectorXd> c = block_decompose(x, be.blocks);
            double s = 0.0;
            for (std::size_t k = 0; k < c.size(); ++k)
                s += c[k].dot(be.grams[k] * c[k]);
            return std::sqrt(s);
        }
    }
    return 0.0;
}

} // namespace banachlab
