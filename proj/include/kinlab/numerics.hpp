#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace kinlab {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

struct Rule {
    RVec x, w;
    std::size_t size() const { return x.size(); }
};

// Gauss-Legendre on [a, b].
Rule gauss_legendre(int n, double a, double b);
// Gauss-Hermite for the weight exp(-x^2) on R.
Rule gauss_hermite(int n);
// Composite Gauss-Legendre over consecutive panels [edges[i], edges[i+1]].
Rule composite_gauss(const RVec& edges, int per_panel);
// Panels [0, t0], then geometric from t0 to t1 with the given ratio.
RVec geometric_edges(double t0, double t1, double ratio);
// Adaptive integral on [a, b] (GSL QAGS); throws on failure.
double integrate(const std::function<double(double)>& f, double a, double b, double rel = 1e-12,
                 double abs = 0.0);

// Batched complex FFT over a row-major block of the given dimensions.
// backward() includes the 1/N normalization.
class Fft {
public:
    Fft(std::vector<int> dims, int howmany = 1, int stride = 1, int dist = 0);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    void forward(cplx* data) const;
    void backward(cplx* data) const;
    int total() const { return total_; }

private:
    void* fwd_ = nullptr;
    void* bwd_ = nullptr;
    int total_ = 1;
    int howmany_ = 1;
    int stride_ = 1, dist_ = 0;
};

// Angular frequencies of an n-point periodic grid of spacing h (FFT order);
// the Nyquist entry is set to zero when zero_nyquist is true.
RVec fft_frequencies(int n, double h, bool zero_nyquist);

struct GmresResult {
    CVec x;
    int iterations = 0;
    double residual = 0;  // relative
    bool converged = false;
};

using LinOp = std::function<void(const CVec& in, CVec& out)>;

// Right-preconditioned restarted GMRES.
GmresResult gmres(const LinOp& A, const CVec& b, const LinOp* precond, double tol, int restart, int max_iter,
                  const CVec* x0 = nullptr);

double l2_norm(const CVec& v, double cell = 1.0);
// Worker cap for parallel_for (default: hardware concurrency).
void set_threads(int n);
int threads();
// Runs body(i) for i in [0, n) on up to threads() workers. Each index is
// handled by exactly one call; callers reduce results in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);
cplx dot(const CVec& a, const CVec& b, double cell = 1.0);  // conj(a) . b

}  // namespace kinlab
