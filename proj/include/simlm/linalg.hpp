#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace simlm {

using Vector = std::vector<double>;

/// Matrix-free linear map: apply(w, out) writes A·w into out.
struct LinearOperator {
    std::size_t dim = 0;
    std::function<void(std::span<const double>, std::span<double>)> apply;
};

enum class SolveMethod { Automatic, Dense, Gmres };

struct ShiftedSolveOptions {
    double tol = 1e-10;
    int maxiter = 1000;
    int restart = 30;
    SolveMethod method = SolveMethod::Automatic;
    /// Diagonal of A; enables the Jacobi preconditioner 1/(1 - γ d_i) when non-empty.
    std::span<const double> diagonal{};
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;  ///< relative residual ‖rhs − (x − γAx)‖ / ‖rhs‖
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LinearSolveError : public NumericalError {
public:
    LinearSolveError(const std::string& what, SolveReport report)
        : NumericalError(what), report_(report) {}
    [[nodiscard]] const SolveReport& report() const noexcept { return report_; }

private:
    SolveReport report_;
};

inline constexpr std::size_t kDenseSolveMaxDim = 64;

/// Solve (I − γA)x = rhs. Dense elimination for dim <= 64, restarted GMRES otherwise
/// (or as forced by options.method). Throws LinearSolveError if the relative residual
/// does not reach options.tol within options.maxiter iterations.
Vector solve_shifted(const LinearOperator& A, double gamma, std::span<const double> rhs,
                     const ShiftedSolveOptions& options = {}, SolveReport* report = nullptr);

double norm2(std::span<const double> v);

/// Dense LU with partial pivoting; matrix is row-major n×n. Throws NumericalError if singular.
Vector dense_solve(std::vector<double> matrix, Vector rhs);

/// Polynomial c_0 + c_1 ζ + ... + c_d ζ^d. Leading coefficients below 1e-14·max|c| are
/// stripped on construction.
class ComplexPolynomial {
public:
    using Complex = std::complex<double>;

    ComplexPolynomial() = default;
    explicit ComplexPolynomial(std::vector<Complex> coefficients);

    [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] const std::vector<Complex>& coefficients() const { return coeffs_; }
    [[nodiscard]] Complex operator()(Complex z) const;
    /// Σ |c_k| |z|^k, the scale used by the backward-error test.
    [[nodiscard]] double magnitude_bound(Complex z) const;
    [[nodiscard]] ComplexPolynomial derivative() const;

private:
    std::vector<Complex> coeffs_;
};

struct RootResult {
    std::vector<std::complex<double>> roots;
    bool degenerate = false;  ///< degree 0 after stripping: no finite roots
    int iterations = 0;
};

class RootFindingError : public NumericalError {
public:
    RootFindingError(const std::string& what, std::vector<double> residuals)
        : NumericalError(what), residuals_(std::move(residuals)) {}
    [[nodiscard]] const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// All roots by Aberth–Ehrlich simultaneous iteration. Each root r satisfies
/// |p(r)| <= tol·Σ|c_k||r|^k. Exact zero trailing coefficients are deflated as roots at 0.
RootResult poly_roots(const ComplexPolynomial& p, double tol = 1e-12, int maxiter = 500);

}  // namespace simlm
