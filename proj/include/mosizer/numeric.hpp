#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "mosizer/errors.hpp"

namespace mosizer {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transposed(const Matrix& a);

/// Thin QR pair: q has orthonormal columns (rows x cols of the input),
/// r is square upper triangular with positive diagonal.
struct QrFactors {
    Matrix q;
    Matrix r;
};

/// Householder QR of a matrix with rows >= cols >= 1.
/// Throws RankDeficient when any diagonal of R falls below
/// 1e-12 times the largest input magnitude.
QrFactors householder_qr(const Matrix& a);

/// Least-squares solution of x * b ~= y via the QR factorization.
std::vector<double> solve_linear_lsq(const Matrix& x, const std::vector<double>& y);

/// Scalar model f(x; theta) used by the nonlinear fitter.
using ModelFn = std::function<double(double, const std::vector<double>&)>;
/// Partial derivatives of the model with respect to each coefficient.
using JacobianFn = std::function<std::vector<double>(double, const std::vector<double>&)>;

struct FitOptions {
    std::size_t max_iterations = 100;
    double sse_rel_tol = 1e-12;
};

struct FitResult {
    std::vector<double> theta;
    double sse = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Damped Gauss-Newton least squares: each step solves the linearized
/// problem by QR and backtracks with step halving (s = 1, 1/2, ... 2^-20)
/// until the SSE decreases. Converges when the relative SSE change drops
/// below sse_rel_tol or the step norm falls below 1e-14 of the coefficient
/// norm (checked before stepping, so an exact start returns immediately).
/// Throws Diverged when no step in the schedule reduces the SSE and
/// RankDeficient when the Jacobian loses column rank.
FitResult gauss_newton_fit(const ModelFn& f, const JacobianFn& df,
                           const std::vector<double>& xs,
                           const std::vector<double>& ys,
                           std::vector<double> theta0,
                           const FitOptions& opts = {});

struct CorrelationResult {
    double r = 0.0;
    double p_two_sided = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n = 0;
};

/// Sample Pearson correlation with a two-sided t-test p-value
/// (n - 2 degrees of freedom) and a Fisher-z 95 % confidence interval
/// (z +- 1.96/sqrt(n - 3) mapped back through tanh). At |r| = 1 the
/// boundary is reported as p = 0 with a collapsed interval.
/// Throws DegenerateSeries when either series is constant.
CorrelationResult pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Regularized incomplete beta function I_x(a, b) by continued fraction.
double ibeta_reg(double a, double b, double x);

/// Two-sided tail probability of Student's t with dof degrees of freedom.
/// Uses the exact closed form at dof = 2 and the incomplete beta otherwise.
double student_t_two_sided_p(double t, std::size_t dof);

} // namespace mosizer
