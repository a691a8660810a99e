#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "uqbench/matrix.hpp"

namespace uqbench {

enum class LossKind { CE, CE_PE, CE_ECE };

LossKind loss_kind_from_string(const std::string& name);
std::string to_string(LossKind kind);

struct LossSpec {
    LossKind kind = LossKind::CE;
    double pe_weight = 1.0;
    double ece_weight = 1.0;
    std::size_t ece_bins = 10;
};

/// Scalar loss plus its gradient w.r.t. every predicted probability.
struct LossValue {
    double value = 0.0;
    Matrix grad;
};

/// Mean over the batch of -log p[true class], probabilities clamped at 1e-12.
LossValue cross_entropy(const Matrix& probs, const std::vector<int>& labels);

/// Mean over the batch of each sample's predictive entropy.
LossValue pe_term(const Matrix& probs);

/// Binned calibration error on max-softmax confidences. The subgradient holds
/// bin membership and correctness fixed and differentiates each bin's mean
/// confidence through the max-probability entries.
LossValue ece_term(const Matrix& probs, const std::vector<int>& labels, std::size_t bins);

LossValue total_loss(const LossSpec& spec, const Matrix& probs, const std::vector<int>& labels);

}  // namespace uqbench
