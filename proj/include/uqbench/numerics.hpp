#pragma once

#include <functional>
#include <span>

#include "uqbench/matrix.hpp"

namespace uqbench {

/// Probabilities are clamped to this floor inside every log so that the
/// 0*log(0) = 0 convention holds and losses stay finite.
inline constexpr double kProbFloor = 1e-12;

/// Exp-normalize with max-subtraction. Throws on empty or non-finite input.
Vec softmax(std::span<const double> logits);

/// Row-wise softmax of a logit batch.
Matrix softmax_rows(const Matrix& logits);

/// Elementwise max(0, x). Throws on non-finite input.
Vec relu(std::span<const double> x);

/// True when every entry is in [0, 1] and the entries sum to 1 within tol.
bool is_prob_vector(std::span<const double> p, double tol = 1e-9);

/// Central-difference gradient estimate, (f(x+h e_i) - f(x-h e_i)) / (2h).
/// The oracle every analytic gradient in this project is checked against.
Vec finite_diff_grad(const std::function<double(const Vec&)>& f, const Vec& x, double h);

}  // namespace uqbench
