#include "mgoc/linalg/dense_eigs.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>
#include <string>

namespace mgoc::linalg {

namespace {

Eigen::MatrixXd to_matrix(std::span<const double> row_major, Index n, Index cap) {
    if (n > cap)
        throw std::length_error("dense_eigs: n = " + std::to_string(n) + " exceeds cap " +
                                std::to_string(cap));
    if (static_cast<Index>(row_major.size()) != n * n)
        throw std::invalid_argument("dense_eigs: expected n*n entries");
    Eigen::MatrixXd a(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) a(i, j) = row_major[i * n + j];
    return a;
}

}  // namespace

std::vector<std::complex<double>> dense_eigs(std::span<const double> row_major, Index n,
                                             Index cap) {
    const Eigen::MatrixXd a = to_matrix(row_major, n, cap);
    if (n == 0) return {};
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense_eigs: QR iteration failed");
    std::vector<std::complex<double>> ev(es.eigenvalues().begin(), es.eigenvalues().end());
    std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return ev;
}

std::vector<double> dense_symmetric_eigs(std::span<const double> row_major, Index n, Index cap) {
    const Eigen::MatrixXd a = to_matrix(row_major, n, cap);
    if (n == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("dense_symmetric_eigs: iteration failed");
    return {es.eigenvalues().begin(), es.eigenvalues().end()};
}

}  // namespace mgoc::linalg
