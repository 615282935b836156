#include "localflow/linalg.hpp"

#include <cmath>

namespace localflow {

Matrix symmetric_pseudoinverse(const Matrix& m, double rel_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
    const Vector& values = eig.eigenvalues();
    const double scale = values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
    Vector inverted = Vector::Zero(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (std::abs(values(i)) > rel_tol * scale) inverted(i) = 1.0 / values(i);
    }
    const Matrix& vecs = eig.eigenvectors();
    return vecs * inverted.asDiagonal() * vecs.transpose();
}

int symmetric_kernel_dimension(const Matrix& m, double rel_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
    const Vector& values = eig.eigenvalues();
    if (values.size() == 0) return 0;
    const double scale = values.cwiseAbs().maxCoeff();
    int count = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (std::abs(values(i)) <= rel_tol * scale) ++count;
    }
    return scale == 0.0 ? static_cast<int>(values.size()) : count;
}

Vector gather(const Vector& v, std::span<const int> indices) {
    Vector out(static_cast<Eigen::Index>(indices.size()));
    for (std::size_t i = 0; i < indices.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(indices[i]);
    return out;
}

void scatter(const Vector& values, std::span<const int> indices, Vector& target) {
    for (std::size_t i = 0; i < indices.size(); ++i) target(indices[i]) = values(static_cast<Eigen::Index>(i));
}

double subset_norm(const Vector& v, std::span<const int> indices) {
    double sum = 0.0;
    for (int i : indices) sum += v(i) * v(i);
    return std::sqrt(sum);
}

Matrix submatrix(const Matrix& m, std::span<const int> rows, std::span<const int> cols) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
    return out;
}

}  // namespace localflow
