#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "kinlab/numerics.hpp"

namespace kinlab {

namespace {
std::atomic<int> thread_cap{0};
}

void set_threads(int n) { thread_cap = std::max(0, n); }

int threads() {
    int n = thread_cap.load();
    if (n > 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(threads(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    auto run = [&] {
        for (std::size_t i; (i = next++) < n;) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

double l2_norm(const CVec& v, double cell) {
    double s = 0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s * cell);
}

cplx dot(const CVec& a, const CVec& b, double cell) {
    cplx s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s * cell;
}

GmresResult gmres(const LinOp& A, const CVec& b, const LinOp* precond, double tol, int restart, int max_iter,
                  const CVec* x0) {
    const std::size_t n = b.size();
    GmresResult res;
    res.x = x0 ? *x0 : CVec(n, 0.0);
    const double bnorm = l2_norm(b);
    if (bnorm == 0) {
        res.x.assign(n, 0.0);
        res.converged = true;
        return res;
    }
    CVec r(n), w(n), z(n);
    auto residual = [&]() {
        A(res.x, w);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
        return l2_norm(r);
    };
    double rnorm = residual();
    while (res.iterations < max_iter) {
        res.residual = rnorm / bnorm;
        if (res.residual <= tol) {
            res.converged = true;
            return res;
        }
        const int m = restart;
        std::vector<CVec> V(m + 1, CVec(n)), Z(m);
        std::vector<std::vector<cplx>> H(m + 1, std::vector<cplx>(m, 0.0));
        std::vector<cplx> cs(m), sn(m), g(m + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / rnorm;
        g[0] = rnorm;
        int j = 0;
        for (; j < m && res.iterations < max_iter; ++j, ++res.iterations) {
            if (precond)
                (*precond)(V[j], Z[j]);
            else
                Z[j] = V[j];
            A(Z[j], w);
            for (int i = 0; i <= j; ++i) {
                H[i][j] = dot(V[i], w);
                for (std::size_t q = 0; q < n; ++q) w[q] -= H[i][j] * V[i][q];
            }
            double hn = l2_norm(w);
            H[j + 1][j] = hn;
            if (hn > 0)
                for (std::size_t q = 0; q < n; ++q) V[j + 1][q] = w[q] / hn;
            for (int i = 0; i < j; ++i) {
                cplx t = std::conj(cs[i]) * H[i][j] + std::conj(sn[i]) * H[i + 1][j];
                H[i + 1][j] = -sn[i] * H[i][j] + cs[i] * H[i + 1][j];
                H[i][j] = t;
            }
            double den = std::sqrt(std::norm(H[j][j]) + std::norm(H[j + 1][j]));
            cs[j] = den > 0 ? H[j][j] / den : 1.0;
            sn[j] = den > 0 ? H[j + 1][j] / den : 0.0;
            H[j][j] = den;
            H[j + 1][j] = 0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = std::conj(cs[j]) * g[j];
            if (std::abs(g[j + 1]) / bnorm <= tol || hn == 0) {
                ++j;
                ++res.iterations;
                break;
            }
        }
        std::vector<cplx> y(j);
        for (int i = j - 1; i >= 0; --i) {
            cplx s = g[i];
            for (int k = i + 1; k < j; ++k) s -= H[i][k] * y[k];
            y[i] = s / H[i][i];
        }
        for (int i = 0; i < j; ++i)
            for (std::size_t q = 0; q < n; ++q) res.x[q] += y[i] * Z[i][q];
        rnorm = residual();
    }
    res.residual = rnorm / bnorm;
    res.converged = res.residual <= tol;
    return res;
}

}  // namespace kinlab
