#pragma once

#include <cstddef>
#include <vector>

#include "grulstm/rng.hpp"

namespace grulstm {

using Vector = std::vector<double>;

// Dense row-major matrix of 64-bit floats. All recurrent-cell weights and
// dense-layer weights live in instances of this type.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // length rows * cols

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Matrix identity(std::size_t n);
};

// m (r x c) times v (c) -> (r). Throws E_DIM naming both shapes on mismatch.
Vector matvec(const Matrix& m, const Vector& v);

// m^T (c x r) times v (r) -> (c). Used by backward passes.
Vector matvec_transposed(const Matrix& m, const Vector& v);

// Componentwise product; equal lengths required.
Vector hadamard(const Vector& a, const Vector& b);

Vector add(const Vector& a, const Vector& b);
void add_in_place(Vector& a, const Vector& b);
void scale_in_place(Vector& a, double s);

// m += a * b^T  (outer-product accumulation for weight gradients).
void add_outer(Matrix& m, const Vector& a, const Vector& b);

double sigmoid_scalar(double x);

Vector sigmoid(const Vector& v);
// Derivative expressed through the activation value s: s * (1 - s).
Vector sigmoid_derivative_from_value(const Vector& s);

Vector tanh_act(const Vector& v);
// Derivative through the activation value t: 1 - t^2.
Vector tanh_derivative_from_value(const Vector& t);

// Glorot-range uniform init: entries in +-sqrt(6 / (rows + cols)),
// deterministic given the generator state.
Matrix init_matrix(std::size_t rows, std::size_t cols, SeededRng& rng);

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

}  // namespace grulstm
