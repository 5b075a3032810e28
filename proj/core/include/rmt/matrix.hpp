#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rmt {

// Dense row-major real matrix. Immutable use is the norm: operations in
// this library take matrices by const reference and return new values.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    const std::vector<double>& data() const { return data_; }

    DenseMatrix transposed() const;
    bool all_finite() const;
    double frobenius_norm() const;

    // y = A x
    std::vector<double> apply(std::span<const double> x) const;
    // y = A^T x
    std::vector<double> apply_transpose(std::span<const double> x) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Dense CSV format: first line is the dimension n, then n lines of n
// comma-separated decimals.
DenseMatrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const DenseMatrix& m, const std::string& path);

// Small vector helpers shared across modules.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

} // namespace rmt
