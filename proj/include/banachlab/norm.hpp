#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "banachlab/block_structure.hpp"
#include "banachlab/orlicz.hpp"
#include "banachlab/seq_vector.hpp"

namespace banachlab {

namespace twisted {
class TwistedSpace;
}

enum class NormKind { Lp, OrliczGauge, Musielak, Twisted, BlockEuclidean };

// Per-block Euclidean structure: norm = sqrt(sum_n c_n^T G_n c_n) over the
// block coefficients. Gram matrices must be symmetric positive definite.
struct BlockEuclidean {
    BlockStructure blocks;
    std::vector<Eigen::MatrixXd> grams;
};

// A named norm / quasi-norm on coordinate vectors. Twisted sections use the
// interleaving convention: coordinate 2k-1 is the k-th coordinate of the
// first component, 2k of the second.
class NormSpec {
public:
    static constexpr double infinity = std::numeric_limits<double>::infinity();

    static NormSpec lp(double p);
    static NormSpec orlicz_gauge(orlicz::OrliczFn fn);
    static NormSpec musielak(orlicz::MusielakProfile profile);
    static NormSpec twisted_section(std::shared_ptr<const twisted::TwistedSpace> space);
    static NormSpec block_euclidean(BlockStructure blocks, std::vector<Eigen::MatrixXd> grams);

    NormKind kind() const { return kind_; }
    double p() const { return p_; }
    const orlicz::OrliczFn& fn() const { return *fn_; }
    const orlicz::MusielakProfile& profile() const { return *profile_; }
    const twisted::TwistedSpace& twisted_space() const { return *twisted_; }
    std::shared_ptr<const twisted::TwistedSpace> twisted_ptr() const { return twisted_; }
    const BlockEuclidean& block_euclidean_data() const { return *block_euclidean_; }

    std::string name() const;

private:
    explicit NormSpec(NormKind k) : kind_(k) {}

    NormKind kind_;
    double p_ = 2.0;
    std::optional<orlicz::OrliczFn> fn_;
    std::optional<orlicz::MusielakProfile> profile_;
    std::shared_ptr<const twisted::TwistedSpace> twisted_;
    std::shared_ptr<const BlockEuclidean> block_euclidean_;
};

// Norm evaluation. Absolutely homogeneous; monotone in |coordinates| for the
// lattice kinds (Lp, OrliczGauge, Musielak).
double eval_norm(const SeqVector& x, const NormSpec& n);

// Same norm on a dense coordinate window [1, x.size()]. Estimator inner loops
// use this to avoid sparse-map churn; it agrees with eval_norm on the
// embedded vector.
double eval_norm_dense(const Eigen::VectorXd& x, const NormSpec& n);

} // namespace banachlab
