#include "banachlab/opalg.hpp"

#include <cmath>

namespace banachlab::opalg {

double lattice_factorization_norm(const std::vector<SeqVector>& ys,
                                  const std::vector<Eigen::MatrixXd>& Qs,
                                  const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                  const NormSpec& ambient) {
    if (ambient.kind() != NormKind::Lp ||
        (ambient.p() != 1.0 && ambient.p() != NormSpec::infinity))
        throw PreconditionError("unsupported ambient: need l_1 or l_inf");
    if (ys.size() != Qs.size()) throw PreconditionError("one y_j per Q_j required");
    if (ys.empty()) return 0.0;

    const Eigen::Index m = A.rows();   // ambient dimension (Y)
    const Eigen::Index dx = A.cols();  // X dimension
    if (B.rows() != dx || B.cols() != m)
        throw PreconditionError("A: X->Y and B: Y->X must have matching dimensions");

    const std::size_t nq = Qs.size();
    std::vector<Eigen::MatrixXd> M(nq);  // M_j = A Q_j B : Y -> Y
    std::vector<Eigen::VectorXd> absy(nq);
    for (std::size_t j = 0; j < nq; ++j) {
        if (Qs[j].rows() != dx || Qs[j].cols() != dx)
            throw PreconditionError("Q_j must act on X");
        M[j] = A * Qs[j] * B;
        if (ys[j].max_index() > m)
            throw PreconditionError("y_j has support outside the ambient dimension");
        absy[j] = ys[j].dense(1, m).cwiseAbs();
    }

    if (ambient.p() == 1.0) {
        // Ball extreme points are +-e_k; the absolute value kills the sign.
        double best = 0.0;
        for (Eigen::Index k = 0; k < m; ++k) {
            double v = 0.0;
            for (std::size_t j = 0; j < nq; ++j)
                v += absy[j].dot(M[j].row(k).cwiseAbs().transpose());
            best = std::max(best, v);
        }
        return best;
    }

    // l_inf ambient: extreme points are sign vectors; enumerate with a Gray
    // code (s and -s agree after the absolute value, so fix s_1 = +1).
    if (m > 20) throw PreconditionError("sign enumeration limited to m <= 20");
    std::vector<Eigen::VectorXd> img(nq);  // M_j^T s for the current s
    Eigen::VectorXd s = Eigen::VectorXd::Ones(m);
    for (std::size_t j = 0; j < nq; ++j) img[j] = M[j].transpose() * s;

    auto value = [&]() {
        double v = 0.0;
        for (std::size_t j = 0; j < nq; ++j) v += absy[j].dot(img[j].cwiseAbs());
        return v;
    };

    double best = value();
    if (m >= 2) {
        const std::uint64_t steps = 1ull << (m - 1);
        std::uint64_t gray = 0;
        for (std::uint64_t i = 1; i < steps; ++i) {
            std::uint64_t next = i ^ (i >> 1);
            std::uint64_t changed = gray ^ next;
            gray = next;
            int bit = 0;
            while (!((changed >> bit) & 1)) ++bit;
            Eigen::Index k = 1 + bit;  // s[0] stays +1
            s[k] = -s[k];
            for (std::size_t j = 0; j < nq; ++j) img[j] += 2.0 * s[k] * M[j].row(k).transpose();
            best = std::max(best, value());
        }
    }
    return best;
}

} // namespace banachlab::opalg
