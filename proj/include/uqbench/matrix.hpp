#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace uqbench {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles. The one carrier type for batches,
/// weights and gradients; deliberately dumb, all math lives in free functions.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Vec data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

    std::size_t size() const { return data.size(); }

    bool same_shape(const Matrix& other) const { return rows == other.rows && cols == other.cols; }
};

inline Matrix make_matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values) {
    if (values.size() != rows * cols) {
        throw std::invalid_argument("make_matrix: initializer size does not match shape");
    }
    Matrix m(rows, cols);
    m.data.assign(values);
    return m;
}

}  // namespace uqbench
