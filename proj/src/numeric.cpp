#include "mosizer/numeric.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace mosizer {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// One Householder reflector per column; w carries R in its upper triangle.
struct Reflectors {
    Matrix w;
    std::vector<std::vector<double>> vs;
    std::vector<double> betas;
};

Reflectors factor(const Matrix& a) {
    const std::size_t n = a.rows();
    const std::size_t p = a.cols();
    if (p == 0 || n < p)
        throw std::invalid_argument("householder_qr: matrix must have rows >= cols >= 1");

    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            const double v = a(i, j);
            if (!std::isfinite(v))
                throw std::invalid_argument("householder_qr: entries must be finite");
            max_abs = std::max(max_abs, std::fabs(v));
        }
    if (max_abs == 0.0) throw RankDeficient("householder_qr: zero matrix has no column rank");
    const double tol = 1e-12 * max_abs;

    Reflectors f{a, {}, {}};
    f.vs.reserve(p);
    f.betas.reserve(p);
    for (std::size_t k = 0; k < p; ++k) {
        std::vector<double> v(n - k);
        for (std::size_t i = k; i < n; ++i) v[i - k] = f.w(i, k);
        const double col_norm = norm2(v);
        double beta = 0.0;
        if (col_norm > 0.0) {
            const double alpha = v[0] >= 0.0 ? -col_norm : col_norm;
            v[0] -= alpha;
            const double vtv = dot(v, v);
            if (vtv > 0.0) {
                beta = 2.0 / vtv;
                for (std::size_t j = k + 1; j < p; ++j) {
                    double s = 0.0;
                    for (std::size_t i = k; i < n; ++i) s += v[i - k] * f.w(i, j);
                    s *= beta;
                    for (std::size_t i = k; i < n; ++i) f.w(i, j) -= s * v[i - k];
                }
            }
            f.w(k, k) = alpha;
            for (std::size_t i = k + 1; i < n; ++i) f.w(i, k) = 0.0;
        }
        f.vs.push_back(std::move(v));
        f.betas.push_back(beta);
        if (std::fabs(f.w(k, k)) < tol)
            throw RankDeficient("householder_qr: column " + std::to_string(k) +
                                " is numerically dependent");
    }
    return f;
}

// Applies the reflectors in order to a length-n vector (computes Q^T y).
void apply_transposed(const Reflectors& f, std::vector<double>& y) {
    const std::size_t p = f.vs.size();
    for (std::size_t k = 0; k < p; ++k) {
        if (f.betas[k] == 0.0) continue;
        const auto& v = f.vs[k];
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * y[k + i];
        s *= f.betas[k];
        for (std::size_t i = 0; i < v.size(); ++i) y[k + i] -= s * v[i];
    }
}

std::vector<double> back_substitute(const Matrix& r, const std::vector<double>& rhs,
                                    std::size_t p) {
    std::vector<double> b(p, 0.0);
    for (std::size_t ii = p; ii-- > 0;) {
        double s = rhs[ii];
        for (std::size_t j = ii + 1; j < p; ++j) s -= r(ii, j) * b[j];
        b[ii] = s / r(ii, ii);
    }
    return b;
}

} // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix transposed(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

QrFactors householder_qr(const Matrix& a) {
    const std::size_t n = a.rows();
    const std::size_t p = a.cols();
    Reflectors f = factor(a);

    // Accumulate Q by applying the reflectors to the leading identity columns
    // in reverse order.
    Matrix q(n, p);
    for (std::size_t j = 0; j < p; ++j) q(j, j) = 1.0;
    for (std::size_t k = p; k-- > 0;) {
        if (f.betas[k] == 0.0) continue;
        const auto& v = f.vs[k];
        for (std::size_t j = 0; j < p; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * q(k + i, j);
            s *= f.betas[k];
            for (std::size_t i = 0; i < v.size(); ++i) q(k + i, j) -= s * v[i];
        }
    }

    Matrix r(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) r(i, j) = f.w(i, j);

    // Normalize to a positive diagonal so the factorization is unique.
    for (std::size_t k = 0; k < p; ++k) {
        if (r(k, k) >= 0.0) continue;
        for (std::size_t j = k; j < p; ++j) r(k, j) = -r(k, j);
        for (std::size_t i = 0; i < n; ++i) q(i, k) = -q(i, k);
    }
    return {std::move(q), std::move(r)};
}

std::vector<double> solve_linear_lsq(const Matrix& x, const std::vector<double>& y) {
    if (y.size() != x.rows())
        throw std::invalid_argument("solve_linear_lsq: right-hand side length mismatch");
    Reflectors f = factor(x);
    std::vector<double> z = y;
    apply_transposed(f, z);
    return back_substitute(f.w, z, x.cols());
}

FitResult gauss_newton_fit(const ModelFn& f, const JacobianFn& df,
                           const std::vector<double>& xs,
                           const std::vector<double>& ys,
                           std::vector<double> theta0,
                           const FitOptions& opts) {
    const std::size_t n = xs.size();
    const std::size_t p = theta0.size();
    if (n != ys.size()) throw std::invalid_argument("gauss_newton_fit: xs/ys length mismatch");
    if (p == 0 || n < p)
        throw std::invalid_argument("gauss_newton_fit: need at least as many samples as coefficients");
    if (!(opts.sse_rel_tol > 0.0))
        throw std::invalid_argument("gauss_newton_fit: tolerance must be positive");
    if (opts.max_iterations < 1)
        throw std::invalid_argument("gauss_newton_fit: iteration cap must be at least 1");

    auto sse_at = [&](const std::vector<double>& th) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = f(xs[i], th) - ys[i];
            s += r * r;
        }
        return s;
    };

    FitResult out;
    std::vector<double> theta = std::move(theta0);
    double sse = sse_at(theta);

    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        out.iterations = it;

        Matrix jac(n, p);
        std::vector<double> resid(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::vector<double> row = df(xs[i], theta);
            if (row.size() != p)
                throw std::invalid_argument("gauss_newton_fit: jacobian row length mismatch");
            for (std::size_t j = 0; j < p; ++j) jac(i, j) = row[j];
            resid[i] = ys[i] - f(xs[i], theta);
        }
        const std::vector<double> delta = solve_linear_lsq(jac, resid);

        // Step-norm convergence is checked before stepping so an exact
        // start is accepted untouched.
        if (norm2(delta) < 1e-14 * norm2(theta)) {
            out.converged = true;
            break;
        }

        double step = 1.0;
        bool accepted = false;
        double new_sse = 0.0;
        std::vector<double> cand(p);
        for (int h = 0; h <= 20; ++h, step *= 0.5) {
            for (std::size_t j = 0; j < p; ++j) cand[j] = theta[j] + step * delta[j];
            double c;
            try {
                c = sse_at(cand);
            } catch (const Error&) {
                continue; // trial point left the model domain; halve again
            }
            if (std::isfinite(c) && c < sse) {
                accepted = true;
                new_sse = c;
                break;
            }
        }
        if (!accepted) {
            if (sse == 0.0) { // already a perfect fit
                out.converged = true;
                break;
            }
            throw Diverged("gauss_newton_fit: step halving exhausted without reducing SSE");
        }

        theta = cand;
        const double rel = sse > 0.0 ? std::fabs(sse - new_sse) / sse : 0.0;
        sse = new_sse;
        if (rel < opts.sse_rel_tol) {
            out.converged = true;
            break;
        }
    }

    out.theta = std::move(theta);
    out.sse = sse;
    return out;
}

namespace {

// Continued-fraction core of the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    const int max_it = 300;
    const double eps = 3e-16;
    const double fpmin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_it; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

} // namespace

double ibeta_reg(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("ibeta_reg: parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                               a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, std::size_t dof) {
    if (dof < 1) throw std::invalid_argument("student_t_two_sided_p: dof must be >= 1");
    if (dof == 2) return 1.0 - std::fabs(t) / std::sqrt(2.0 + t * t);
    const double v = static_cast<double>(dof);
    return ibeta_reg(v / 2.0, 0.5, v / (v + t * t));
}

CorrelationResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw std::invalid_argument("pearson: series lengths differ");
    if (n < 3) throw std::invalid_argument("pearson: need at least 3 samples");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DegenerateSeries("pearson: a series is constant");

    CorrelationResult out;
    out.n = n;
    double r = sxy / std::sqrt(sxx * syy);
    r = std::min(1.0, std::max(-1.0, r));
    out.r = r;

    const double one_minus_r2 = 1.0 - r * r;
    if (one_minus_r2 <= 0.0) { // perfect correlation boundary
        out.p_two_sided = 0.0;
        out.ci_low = r;
        out.ci_high = r;
        return out;
    }

    const double t = r * std::sqrt(static_cast<double>(n - 2) / one_minus_r2);
    double p = student_t_two_sided_p(t, n - 2);
    out.p_two_sided = std::min(1.0, std::max(0.0, p));

    const double z = std::atanh(r);
    const double half = 1.96 / std::sqrt(static_cast<double>(n - 3));
    out.ci_low = std::tanh(z - half);
    out.ci_high = std::tanh(z + half);
    return out;
}

} // namespace mosizer
