#include "mgoc/optcontrol/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace mgoc::optcontrol {

using linalg::axpy;
using linalg::dot;
using linalg::norm2;

namespace {

Index resolve_max_it(const KrylovOptions& opts, std::size_t n) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("Krylov solver: tol must be positive");
    if (opts.max_it < 0) throw std::invalid_argument("Krylov solver: max_it must be nonnegative");
    return opts.max_it == 0 ? static_cast<Index>(n) : opts.max_it;
}

void apply_or_copy(const LinearOp& p, std::span<const double> x, std::span<double> y) {
    if (p) {
        p(x, y);
    } else {
        std::copy(x.begin(), x.end(), y.begin());
    }
}

double true_residual(const LinearOp& a, std::span<const double> b, std::span<const double> x,
                     double bnorm) {
    Vector r(b.size());
    a(x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return norm2(r) / bnorm;
}

}  // namespace

KrylovResult gmres(const LinearOp& a, const LinearOp& precon, std::span<const double> b,
                   const KrylovOptions& opts) {
    const std::size_t n = b.size();
    const Index max_it = resolve_max_it(opts, n);
    KrylovResult res;
    res.x.assign(n, 0.0);
    const double bnorm = norm2(b);
    res.residual_history.push_back(1.0);
    if (bnorm == 0.0) {
        res.converged = true;
        res.residual_history.back() = 0.0;
        return res;
    }

    Vector r(b.begin(), b.end());
    double rnorm = bnorm;
    Vector z(n), w(n), trial(n);
    Index it = 0;

    // Each pass builds one Krylov space from the current residual. A new pass
    // starts only when the Arnoldi estimate has reached tol but the true
    // residual has not (rounding in P^{-1} V y), i.e. as iterative refinement.
    while (true) {
        std::vector<Vector> v{r};
        for (double& t : v[0]) t /= rnorm;
        std::vector<Vector> h;  // h[j] holds column j of the rotated Hessenberg matrix
        Vector cs, sn, g{rnorm};

        // trial = x + P^{-1} V y with R y = g from the first k columns.
        const auto form_trial = [&](std::size_t k) {
            Vector y(k);
            for (std::size_t i = k; i-- > 0;) {
                double s = g[i];
                for (std::size_t l = i + 1; l < k; ++l) s -= h[l][i] * y[l];
                y[i] = s / h[i][i];
            }
            Vector u(n, 0.0);
            for (std::size_t i = 0; i < k; ++i) axpy(y[i], v[i], u);
            apply_or_copy(precon, u, trial);
            axpy(1.0, res.x, trial);
        };

        for (std::size_t j = 0;; ++j) {
            apply_or_copy(precon, v[j], z);
            a(z, w);
            Vector col(j + 2, 0.0);
            const double before = norm2(w);
            for (std::size_t i = 0; i <= j; ++i) {
                col[i] = dot(w, v[i]);
                axpy(-col[i], v[i], w);
            }
            if (norm2(w) < 0.7 * before) {
                for (std::size_t i = 0; i <= j; ++i) {
                    const double c = dot(w, v[i]);
                    col[i] += c;
                    axpy(-c, v[i], w);
                }
            }
            const double h_next = norm2(w);
            col[j + 1] = h_next;

            for (std::size_t i = 0; i < j; ++i) {
                const double t = cs[i] * col[i] + sn[i] * col[i + 1];
                col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
                col[i] = t;
            }
            const double rho = std::hypot(col[j], col[j + 1]);
            cs.push_back(rho == 0.0 ? 1.0 : col[j] / rho);
            sn.push_back(rho == 0.0 ? 0.0 : col[j + 1] / rho);
            col[j] = rho;
            col[j + 1] = 0.0;
            g.push_back(-sn[j] * g[j]);
            g[j] *= cs[j];
            h.push_back(std::move(col));

            ++it;
            const double estimate = std::abs(g[j + 1]) / bnorm;
            res.residual_history.push_back(estimate);
            res.iterations = it;

            const bool breakdown = h_next == 0.0 || rho == 0.0;
            if (estimate > opts.tol && !breakdown && it < max_it) {
                for (double& t : w) t /= h_next;
                v.push_back(w);
                continue;
            }
            if (rho == 0.0) {  // singular projected system; keep the current iterate
                res.true_relative_residual = true_residual(a, b, res.x, bnorm);
                return res;
            }
            form_trial(j + 1);
            a(trial, w);
            for (std::size_t i = 0; i < n; ++i) w[i] = b[i] - w[i];
            const double trial_norm = norm2(w);
            const bool progress = trial_norm < 0.5 * rnorm;
            if (progress || trial_norm <= opts.tol * bnorm) {
                res.x = trial;
                r = w;
                rnorm = trial_norm;
            }
            res.true_relative_residual = rnorm / bnorm;
            if (res.true_relative_residual <= opts.tol) {
                res.converged = true;
                return res;
            }
            if (!progress || it >= max_it) return res;
            break;
        }
    }
}

KrylovResult minres(const LinearOp& a, const LinearOp& precon, std::span<const double> b,
                    const KrylovOptions& opts) {
    const std::size_t n = b.size();
    const Index max_it = resolve_max_it(opts, n);

    {
        std::mt19937_64 rng(20240917);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Vector p(n), q(n), ap(n), aq(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = dist(rng);
            q[i] = dist(rng);
        }
        a(p, ap);
        a(q, aq);
        const double lhs = dot(ap, q);
        const double rhs = dot(p, aq);
        const double scale = norm2(ap) * norm2(q) + norm2(p) * norm2(aq);
        if (std::abs(lhs - rhs) > 1e-10 * scale)
            throw std::domain_error("minres: operator is not symmetric (probe mismatch " +
                                    std::to_string(std::abs(lhs - rhs)) + ")");
    }

    KrylovResult res;
    res.x.assign(n, 0.0);
    const double bnorm = norm2(b);
    res.residual_history.push_back(1.0);
    if (bnorm == 0.0) {
        res.converged = true;
        res.residual_history.back() = 0.0;
        return res;
    }

    Vector v_old(n, 0.0), v(b.begin(), b.end()), v_new(n);
    Vector w_old(n, 0.0), w(n, 0.0), w_new(n);
    Vector z(n), z_new(n), az(n);
    apply_or_copy(precon, v, z);
    const double g1sq = dot(z, v);
    if (!(g1sq > 0.0)) throw std::domain_error("minres: preconditioner is not positive definite");
    const double gamma1 = std::sqrt(g1sq);
    double gamma_old = 1.0, gamma = gamma1;
    double eta = gamma1;
    double s_old = 0.0, s = 0.0, c_old = 1.0, c = 1.0;

    for (Index it = 0; it < max_it; ++it) {
        for (double& t : z) t /= gamma;
        a(z, az);
        const double delta = dot(az, z);
        for (std::size_t i = 0; i < n; ++i)
            v_new[i] = az[i] - (delta / gamma) * v[i] - (gamma / gamma_old) * v_old[i];
        apply_or_copy(precon, v_new, z_new);
        double gsq = dot(z_new, v_new);
        if (gsq < 0.0) {
            if (-gsq > 1e-14 * g1sq)
                throw std::domain_error("minres: preconditioner is not positive definite");
            gsq = 0.0;
        }
        const double gamma_new = std::sqrt(gsq);

        const double alpha0 = c * delta - c_old * s * gamma;
        const double alpha1 = std::hypot(alpha0, gamma_new);
        const double alpha2 = s * delta + c_old * c * gamma;
        const double alpha3 = s_old * gamma;
        if (alpha1 == 0.0) break;
        const double c_new = alpha0 / alpha1;
        const double s_new = gamma_new / alpha1;
        for (std::size_t i = 0; i < n; ++i)
            w_new[i] = (z[i] - alpha3 * w_old[i] - alpha2 * w[i]) / alpha1;
        axpy(c_new * eta, w_new, res.x);
        eta = -s_new * eta;

        res.iterations = it + 1;
        const double estimate = std::abs(eta) / gamma1;
        res.residual_history.push_back(estimate);
        if (estimate <= opts.tol || gamma_new == 0.0) {
            res.converged = estimate <= opts.tol;
            break;
        }

        std::swap(v_old, v);
        std::swap(v, v_new);
        std::swap(w_old, w);
        std::swap(w, w_new);
        std::swap(z, z_new);
        gamma_old = gamma;
        gamma = gamma_new;
        c_old = c;
        c = c_new;
        s_old = s;
        s = s_new;
    }
    res.true_relative_residual = true_residual(a, b, res.x, bnorm);
    return res;
}

}  // namespace mgoc::optcontrol
