#include "banachlab/uncond.hpp"

namespace banachlab::uncond {

namespace {

void check_spd(const Eigen::MatrixXd& G, const char* what) {
    if (G.rows() != G.cols()) throw PreconditionError(std::string(what) + " must be square");
    if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + G.cwiseAbs().maxCoeff()))
        throw PreconditionError(std::string(what) + " must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success)
        throw PreconditionError(std::string(what) + " must be positive definite");
}

} // namespace

Eigen::MatrixXd joint_basis_block(const Eigen::MatrixXd& gram2, const Eigen::MatrixXd& gram_e) {
    check_spd(gram2, "gram2");
    check_spd(gram_e, "gram_e");
    if (gram2.rows() != gram_e.rows())
        throw PreconditionError("pencil matrices must have equal dimension");

    // Solve gram2 v = lambda gram_e v; eigenvectors come out gram_e-orthonormal
    // and diagonalize gram2 simultaneously.
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(gram2, gram_e);
    if (ges.info() != Eigen::Success)
        throw ConditioningError("generalized eigensolver failed on the SPD pencil");
    Eigen::MatrixXd B = ges.eigenvectors();

    const Eigen::Index d = B.cols();
    Eigen::MatrixXd RE = B.transpose() * gram_e * B - Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd R2 = B.transpose() * gram2 * B;
    R2.diagonal().setZero();
    double scale = std::max(1.0, gram2.norm() + gram_e.norm());
    if (RE.cwiseAbs().maxCoeff() > 1e-10 * scale || R2.cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw ConditioningError("joint basis residual above 1e-10");
    return B;
}

std::vector<Eigen::MatrixXd> joint_basis(const BlockStructure& bs,
                                         const std::vector<Eigen::MatrixXd>& grams2,
                                         const std::vector<Eigen::MatrixXd>& grams_e) {
    if (grams2.size() != bs.count() || grams_e.size() != bs.count())
        throw PreconditionError("need one Gram pair per block");
    std::vector<Eigen::MatrixXd> out(bs.count());
    for (std::size_t k = 0; k < bs.count(); ++k) {
        if (grams2[k].rows() != bs.dim(k))
            throw PreconditionError("Gram dimension must match block dimension");
        out[k] = joint_basis_block(grams2[k], grams_e[k]);
    }
    return out;
}

} // namespace banachlab::uncond
