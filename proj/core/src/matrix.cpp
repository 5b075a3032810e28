#include "rmt/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rmt/errors.hpp"

namespace rmt {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ValidationError("from_rows: no rows");
    const std::size_t cols = rows.front().size();
    DenseMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw ValidationError("from_rows: ragged rows");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool DenseMatrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

std::vector<double> DenseMatrix::apply(std::span<const double> x) const {
    if (x.size() != cols_) throw ValidationError("apply: dimension mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* r = data_.data() + i * cols_;
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> DenseMatrix::apply_transpose(std::span<const double> x) const {
    if (x.size() != rows_) throw ValidationError("apply_transpose: dimension mismatch");
    std::vector<double> y(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* r = data_.data() + i * cols_;
        const double xi = x[i];
        for (std::size_t j = 0; j < cols_; ++j) y[j] += r[j] * xi;
    }
    return y;
}

DenseMatrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open matrix file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty matrix file: " + path);
    std::size_t n = 0;
    try {
        n = static_cast<std::size_t>(std::stoull(line));
    } catch (const std::exception&) {
        throw ValidationError("matrix file header must be the dimension n: " + path);
    }
    if (n == 0) throw ValidationError("matrix dimension must be positive: " + path);
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw ValidationError("matrix file truncated: " + path);
        std::stringstream ss(line);
        std::string cell;
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::getline(ss, cell, ','))
                throw ValidationError("matrix row has too few columns: " + path);
            try {
                m(i, j) = std::stod(cell);
            } catch (const std::exception&) {
                throw ValidationError("bad matrix entry '" + cell + "' in " + path);
            }
        }
    }
    if (!m.all_finite()) throw ValidationError("matrix has non-finite entries: " + path);
    return m;
}

void write_matrix_csv(const DenseMatrix& m, const std::string& path) {
    if (m.rows() != m.cols()) throw ValidationError("write_matrix_csv: square matrices only");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write matrix file: " + path);
    out << m.rows() << "\n";
    char buf[40];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            out << buf << (j + 1 == m.cols() ? "\n" : ",");
        }
    }
    if (!out) throw IoError("failed writing matrix file: " + path);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

} // namespace rmt
