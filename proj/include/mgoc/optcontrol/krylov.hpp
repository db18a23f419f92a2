#pragma once

#include <functional>
#include <span>

#include "mgoc/linalg/sparse.hpp"

namespace mgoc::optcontrol {

using linalg::Index;
using linalg::Vector;

/// y = Op(x); y has the size of x.
using LinearOp = std::function<void(std::span<const double> x, std::span<double> y)>;

struct KrylovOptions {
    double tol = 1e-8;
    /// 0 selects the size of the system.
    Index max_it = 0;
};

struct KrylovResult {
    Vector x;
    Index iterations = 0;
    bool converged = false;
    /// Relative residual estimate after each iteration, starting with 1 for x0 = 0.
    Vector residual_history;
    /// ‖b - A x‖ / ‖b‖ of the returned iterate.
    double true_relative_residual = 0.0;
};

/// Right-preconditioned GMRES without restarts, started from x0 = 0. An
/// empty `precon` means the identity. Stops once the true relative residual
/// is at most tol; at max_it the last iterate is returned unconverged.
KrylovResult gmres(const LinearOp& a, const LinearOp& precon, std::span<const double> b,
                   const KrylovOptions& opts = {});

/// Preconditioned MINRES for symmetric A and SPD P, started from x0 = 0.
/// Stops when the P^{-1}-norm residual relative to that of b is at most tol.
/// Throws std::domain_error when A fails a symmetry probe at setup or P is
/// detected to be indefinite.
KrylovResult minres(const LinearOp& a, const LinearOp& precon, std::span<const double> b,
                    const KrylovOptions& opts = {});

}  // namespace mgoc::optcontrol
