#pragma once

#include <vector>

#include <Eigen/Dense>

#include "banachlab/block_structure.hpp"
#include "banachlab/constant_estimate.hpp"
#include "banachlab/norm.hpp"
#include "banachlab/rng.hpp"
#include "banachlab/seq_vector.hpp"

namespace banachlab::uncond {

// An ordered, linearly independent family of vectors with the norm they are
// measured in.
struct BasisFamily {
    std::vector<SeqVector> vectors;
    NormSpec norm;
};

void check_independent(const BasisFamily& b);

struct UbcOptions {
    // Sampled sign patterns when exhaustive enumeration (<= 20 vectors) is
    // out of reach; the all-plus, all-minus and alternating patterns are
    // always included on top.
    std::int64_t sign_budget = 4096;
};

// Unconditional basis constant, from below: max over sampled coefficient
// vectors a and sign patterns eps of ||sum eps_i a_i x_i|| / ||sum a_i x_i||.
ConstantEstimate ubc_estimate(const BasisFamily& b, const Sampler& s, UbcOptions opt = {});
double ubc_replay(const BasisFamily& b, const Json& witness);

// Absoluteness constant of a block UFDD, from below: sampled x_n per block
// and y_n with ||y_n|| <= ||x_n||, ratio ||sum y_n|| / ||sum x_n||.
ConstantEstimate absoluteness_estimate(const BlockStructure& bs, const NormSpec& norm,
                                       const Sampler& s);
double absoluteness_replay(const BlockStructure& bs, const NormSpec& norm, const Json& witness);

// Shift-property constant of a normalized disjoint block basis: best C with
// C^{-1} ||sum a_n x_n|| <= ||sum a_n x_{n+1}|| <= C ||sum a_n x_n||.
ConstantEstimate shift_constant(const BasisFamily& b, const Sampler& s);
double shift_replay(const BasisFamily& b, const Json& witness);

// Two-sided equivalence constant between equal-length families.
ConstantEstimate equivalence_constant(const BasisFamily& b1, const BasisFamily& b2,
                                      const Sampler& s);
double equivalence_replay(const BasisFamily& b1, const BasisFamily& b2, const Json& witness);

// Best constant in ||sum A_n x_n|| <= C ||sum x_n|| over sampled Hermitian
// contractions A_n acting on block coefficients (identity Gram per block
// unless supplied).
ConstantEstimate hermitian_stress(const BlockStructure& bs, const NormSpec& norm,
                                  const Sampler& s,
                                  const std::vector<Eigen::MatrixXd>& grams = {});
double hermitian_replay(const BlockStructure& bs, const NormSpec& norm, const Json& witness);

// Permutation maximizing prod_i |a_{i,sigma(i)}| (assignment problem on
// -log|a_ij|). Guaranteed product >= |det A| / d!.
struct MatchingResult {
    std::vector<int> perm;  // sigma(i) as 0-based column per row
    double product = 0.0;
};
MatchingResult prop26_matching(const Eigen::MatrixXcd& A);

// Nested unconditional basis extraction from a uniform complemented block
// UFDD: given a projection P with P(F_n) = E_n per block, returns vectors
// f_{n,1..dim E_n} spanning each E_n, built by repeated diagonal-entry
// selection and rank reduction.
struct ExtractedBasis {
    std::vector<std::vector<SeqVector>> per_block;
    std::vector<std::vector<std::int64_t>> picked_coordinates;
    std::vector<std::vector<double>> diagonal_entries;
};
ExtractedBasis extract_block_basis(const BlockStructure& bs, const Eigen::MatrixXd& P,
                                   const NormSpec& norm);

// Basis of an SPD pencil: B with B^T gram_e B = I and B^T gram2 B diagonal.
Eigen::MatrixXd joint_basis_block(const Eigen::MatrixXd& gram2, const Eigen::MatrixXd& gram_e);
std::vector<Eigen::MatrixXd> joint_basis(const BlockStructure& bs,
                                         const std::vector<Eigen::MatrixXd>& grams2,
                                         const std::vector<Eigen::MatrixXd>& grams_e);

} // namespace banachlab::uncond
