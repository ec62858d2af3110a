#include "simlm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace simlm {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// out = x − γ·A(x)
void apply_shifted(const LinearOperator& A, double gamma, std::span<const double> x,
                   std::span<double> out) {
    A.apply(x, out);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - gamma * out[i];
}

Vector dense_path(const LinearOperator& A, double gamma, std::span<const double> rhs) {
    const std::size_t n = A.dim;
    std::vector<double> matrix(n * n);
    Vector unit(n, 0.0);
    Vector column(n);
    for (std::size_t k = 0; k < n; ++k) {
        unit[k] = 1.0;
        apply_shifted(A, gamma, unit, column);
        for (std::size_t i = 0; i < n; ++i) matrix[i * n + k] = column[i];
        unit[k] = 0.0;
    }
    return dense_solve(std::move(matrix), Vector(rhs.begin(), rhs.end()));
}

Vector gmres_path(const LinearOperator& A, double gamma, std::span<const double> rhs,
                  const ShiftedSolveOptions& opt, SolveReport& report) {
    const std::size_t n = A.dim;
    const int m = std::max(1, opt.restart);
    const double bnorm = norm2(rhs);

    Vector inv_diag;
    if (!opt.diagonal.empty()) {
        inv_diag.resize(n);
        for (std::size_t i = 0; i < n; ++i) inv_diag[i] = 1.0 / (1.0 - gamma * opt.diagonal[i]);
    }
    auto precondition = [&](std::span<const double> v, std::span<double> out) {
        if (inv_diag.empty()) {
            std::copy(v.begin(), v.end(), out.begin());
        } else {
            for (std::size_t i = 0; i < n; ++i) out[i] = inv_diag[i] * v[i];
        }
    };

    Vector x(n, 0.0);
    Vector r(rhs.begin(), rhs.end());
    double beta = bnorm;
    std::vector<Vector> basis(m + 1, Vector(n));
    std::vector<double> hess((m + 1) * m);
    auto H = [&](int i, int k) -> double& { return hess[i * m + k]; };
    std::vector<double> cs(m), sn(m), g(m + 1), y(m);
    Vector z(n), w(n);

    report.residual = 1.0;
    while (report.iterations < opt.maxiter) {
        for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;

        int used = 0;
        for (int k = 0; k < m && report.iterations < opt.maxiter; ++k) {
            precondition(basis[k], z);
            apply_shifted(A, gamma, z, w);
            for (int i = 0; i <= k; ++i) {
                H(i, k) = dot(w, basis[i]);
                for (std::size_t l = 0; l < n; ++l) w[l] -= H(i, k) * basis[i][l];
            }
            H(k + 1, k) = norm2(w);
            for (int i = 0; i < k; ++i) {
                const double t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
                H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
                H(i, k) = t;
            }
            const double denom = std::hypot(H(k, k), H(k + 1, k));
            cs[k] = denom == 0.0 ? 1.0 : H(k, k) / denom;
            sn[k] = denom == 0.0 ? 0.0 : H(k + 1, k) / denom;
            const double breakdown = H(k + 1, k);
            H(k, k) = denom;
            H(k + 1, k) = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];

            ++report.iterations;
            used = k + 1;
            if (std::abs(g[k + 1]) <= opt.tol * bnorm || breakdown == 0.0) break;
            for (std::size_t l = 0; l < n; ++l) basis[k + 1][l] = w[l] / breakdown;
        }

        for (int i = used; i-- > 0;) {
            double acc = g[i];
            for (int k = i + 1; k < used; ++k) acc -= H(i, k) * y[k];
            y[i] = H(i, i) == 0.0 ? 0.0 : acc / H(i, i);
        }
        std::fill(w.begin(), w.end(), 0.0);
        for (int i = 0; i < used; ++i) {
            for (std::size_t l = 0; l < n; ++l) w[l] += y[i] * basis[i][l];
        }
        precondition(w, z);
        for (std::size_t l = 0; l < n; ++l) x[l] += z[l];

        apply_shifted(A, gamma, x, w);
        for (std::size_t l = 0; l < n; ++l) r[l] = rhs[l] - w[l];
        beta = norm2(r);
        report.residual = beta / bnorm;
        if (report.residual <= opt.tol) {
            report.converged = true;
            return x;
        }
        if (!std::isfinite(beta)) break;
    }
    return x;
}

}  // namespace

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

Vector dense_solve(std::vector<double> a, Vector b) {
    const std::size_t n = b.size();
    if (a.size() != n * n) throw std::invalid_argument("dense_solve: shape mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
        }
        if (a[pivot * n + col] == 0.0) throw NumericalError("dense_solve: singular matrix");
        if (pivot != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[pivot * n + k], a[col * n + k]);
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
            b[row] -= f * b[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i * n + k] * b[k];
        b[i] = acc / a[i * n + i];
    }
    return b;
}

Vector solve_shifted(const LinearOperator& A, double gamma, std::span<const double> rhs,
                     const ShiftedSolveOptions& options, SolveReport* report_out) {
    if (rhs.size() != A.dim) throw std::invalid_argument("solve_shifted: rhs dimension mismatch");
    if (!options.diagonal.empty() && options.diagonal.size() != A.dim) {
        throw std::invalid_argument("solve_shifted: diagonal dimension mismatch");
    }
    SolveReport report;
    Vector x;
    const double bnorm = norm2(rhs);
    if (gamma == 0.0 || bnorm == 0.0) {
        x.assign(rhs.begin(), rhs.end());
        report = {true, 0, 0.0};
    } else {
        const bool dense = options.method == SolveMethod::Dense ||
                           (options.method == SolveMethod::Automatic && A.dim <= kDenseSolveMaxDim);
        if (dense) {
            x = dense_path(A, gamma, rhs);
            Vector r(A.dim);
            apply_shifted(A, gamma, x, r);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
            report = {true, 1, norm2(r) / bnorm};
            report.converged = report.residual <= options.tol;
        } else {
            x = gmres_path(A, gamma, rhs, options, report);
        }
    }
    if (report_out) *report_out = report;
    if (!report.converged) {
        std::ostringstream os;
        os << "shifted linear solve did not converge: relative residual " << report.residual
           << " after " << report.iterations << " iterations (tol " << options.tol << ")";
        throw LinearSolveError(os.str(), report);
    }
    return x;
}

ComplexPolynomial::ComplexPolynomial(std::vector<Complex> coefficients)
    : coeffs_(std::move(coefficients)) {
    double scale = 0.0;
    for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= 1e-14 * scale) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(Complex(0.0));
}

ComplexPolynomial::Complex ComplexPolynomial::operator()(Complex z) const {
    Complex acc(0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double ComplexPolynomial::magnitude_bound(Complex z) const {
    const double r = std::abs(z);
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
}

ComplexPolynomial ComplexPolynomial::derivative() const {
    if (coeffs_.size() <= 1) return ComplexPolynomial({Complex(0.0)});
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return ComplexPolynomial(std::move(d));
}

RootResult poly_roots(const ComplexPolynomial& p, double tol, int maxiter) {
    using Complex = std::complex<double>;
    RootResult result;
    if (p.degree() < 1) {
        result.degenerate = true;
        return result;
    }

    auto coeffs = p.coefficients();
    std::size_t zeros = 0;
    while (zeros < coeffs.size() - 1 && coeffs[zeros] == Complex(0.0)) ++zeros;
    result.roots.assign(zeros, Complex(0.0));
    const ComplexPolynomial q(std::vector<Complex>(coeffs.begin() + zeros, coeffs.end()));
    const int d = q.degree();
    if (d == 0) return result;

    const ComplexPolynomial dq = q.derivative();
    const auto& c = q.coefficients();
    const double radius = 1.1 * std::pow(std::abs(c.front() / c.back()), 1.0 / d);
    std::vector<Complex> z(d);
    for (int k = 0; k < d; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / d + 0.4 + std::numbers::sqrt2 * 1e-2 * k;
        z[k] = std::polar(radius, angle);
    }

    auto satisfied = [&](Complex r) { return std::abs(q(r)) <= tol * q.magnitude_bound(r); };
    auto aberth_update = [&](int i) {
        const Complex value = q(z[i]);
        if (value == Complex(0.0)) return z[i];
        Complex slope = dq(z[i]);
        Complex repulsion(0.0);
        for (int j = 0; j < d; ++j) {
            if (j != i) repulsion += 1.0 / (z[i] - z[j]);
        }
        if (slope == Complex(0.0)) slope = Complex(std::numeric_limits<double>::epsilon());
        const Complex w = value / slope;
        return z[i] - w / (1.0 - w * repulsion);
    };

    std::vector<bool> done(d, false);
    int iter = 0;
    for (; iter < maxiter; ++iter) {
        bool all = true;
        for (int i = 0; i < d; ++i) {
            if (done[i]) continue;
            const Complex next = aberth_update(i);
            if (std::isfinite(next.real()) && std::isfinite(next.imag())) z[i] = next;
            done[i] = satisfied(z[i]);
            all = all && done[i];
        }
        if (all) break;
    }
    result.iterations = iter;
    if (iter == maxiter) {
        std::vector<double> residuals(d);
        for (int i = 0; i < d; ++i) residuals[i] = std::abs(q(z[i])) / q.magnitude_bound(z[i]);
        throw RootFindingError("poly_roots: Aberth iteration did not converge", std::move(residuals));
    }

    // Polish: a few more sweeps, keeping only updates that do not increase |q|.
    for (int sweep = 0; sweep < 8; ++sweep) {
        for (int i = 0; i < d; ++i) {
            const Complex next = aberth_update(i);
            if (std::isfinite(next.real()) && std::isfinite(next.imag()) &&
                std::abs(q(next)) <= std::abs(q(z[i]))) {
                z[i] = next;
            }
        }
    }
    result.roots.insert(result.roots.end(), z.begin(), z.end());
    return result;
}

}  // namespace simlm
