#include "grulstm/numerics.hpp"

#include <cmath>
#include <string>

#include "grulstm/error.hpp"

namespace grulstm {

namespace {

std::string shape_of(const Matrix& m) {
    return std::to_string(m.rows) + "x" + std::to_string(m.cols);
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector matvec(const Matrix& m, const Vector& v) {
    if (m.cols != v.size()) {
        throw Error(errc::kDim, "matvec: matrix " + shape_of(m) + " incompatible with vector of length " +
                                    std::to_string(v.size()));
    }
    Vector out(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* row = m.data.data() + i * m.cols;
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) acc += row[j] * v[j];
        out[i] = acc;
    }
    return out;
}

Vector matvec_transposed(const Matrix& m, const Vector& v) {
    if (m.rows != v.size()) {
        throw Error(errc::kDim, "matvec_transposed: matrix " + shape_of(m) +
                                    " incompatible with vector of length " + std::to_string(v.size()));
    }
    Vector out(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* row = m.data.data() + i * m.cols;
        const double vi = v[i];
        for (std::size_t j = 0; j < m.cols; ++j) out[j] += row[j] * vi;
    }
    return out;
}

Vector hadamard(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw Error(errc::kDim, "hadamard: lengths " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    }
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

Vector add(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw Error(errc::kDim, "add: lengths " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    }
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

void add_in_place(Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw Error(errc::kDim, "add_in_place: lengths " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    }
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

void scale_in_place(Vector& a, double s) {
    for (auto& x : a) x *= s;
}

void add_outer(Matrix& m, const Vector& a, const Vector& b) {
    if (m.rows != a.size() || m.cols != b.size()) {
        throw Error(errc::kDim, "add_outer: matrix " + shape_of(m) + " vs vectors " +
                                    std::to_string(a.size()) + ", " + std::to_string(b.size()));
    }
    for (std::size_t i = 0; i < m.rows; ++i) {
        double* row = m.data.data() + i * m.cols;
        const double ai = a[i];
        for (std::size_t j = 0; j < m.cols; ++j) row[j] += ai * b[j];
    }
}

double sigmoid_scalar(double x) {
    // Split on sign so exp never overflows.
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Vector sigmoid(const Vector& v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = sigmoid_scalar(v[i]);
    return out;
}

Vector sigmoid_derivative_from_value(const Vector& s) {
    Vector out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] * (1.0 - s[i]);
    return out;
}

Vector tanh_act(const Vector& v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
    return out;
}

Vector tanh_derivative_from_value(const Vector& t) {
    Vector out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = 1.0 - t[i] * t[i];
    return out;
}

Matrix init_matrix(std::size_t rows, std::size_t cols, SeededRng& rng) {
    if (rows == 0 || cols == 0) {
        throw Error(errc::kContract, "init_matrix: zero dimension (" + std::to_string(rows) + "x" +
                                         std::to_string(cols) + ")");
    }
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix m(rows, cols);
    for (auto& x : m.data) x = rng.uniform(-limit, limit);
    return m;
}

bool all_finite(const Vector& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

bool all_finite(const Matrix& m) {
    return all_finite(m.data);
}

}  // namespace grulstm
