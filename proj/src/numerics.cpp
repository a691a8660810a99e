#include "uqbench/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uqbench {

Vec softmax(std::span<const double> logits) {
    if (logits.empty()) {
        throw std::invalid_argument("softmax: empty input");
    }
    double max_logit = logits[0];
    for (double v : logits) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("softmax: non-finite input");
        }
        max_logit = std::max(max_logit, v);
    }
    Vec out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - max_logit);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix out(logits.rows, logits.cols);
    for (std::size_t r = 0; r < logits.rows; ++r) {
        const Vec p = softmax(logits.row(r));
        std::copy(p.begin(), p.end(), out.row(r).begin());
    }
    return out;
}

Vec relu(std::span<const double> x) {
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            throw std::invalid_argument("relu: non-finite input");
        }
        out[i] = x[i] > 0.0 ? x[i] : 0.0;
    }
    return out;
}

bool is_prob_vector(std::span<const double> p, double tol) {
    if (p.size() < 2) return false;
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) return false;
        sum += v;
    }
    return std::abs(sum - 1.0) <= tol;
}

Vec finite_diff_grad(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
    if (h <= 0.0) {
        throw std::invalid_argument("finite_diff_grad: step size must be positive");
    }
    Vec grad(x.size());
    Vec probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = probe[i];
        probe[i] = orig + h;
        const double fp = f(probe);
        probe[i] = orig - h;
        const double fm = f(probe);
        probe[i] = orig;
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw std::runtime_error("finite_diff_grad: non-finite function evaluation");
        }
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

}  // namespace uqbench
