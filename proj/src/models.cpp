#include "mosizer/models.hpp"

#include <cmath>
#include <stdexcept>

namespace mosizer {

namespace {

void require_theta(Family f, const std::vector<double>& theta) {
    if (theta.size() != family_coef_count(f))
        throw std::invalid_argument(std::string("family ") + family_name(f) + " takes " +
                                    std::to_string(family_coef_count(f)) + " coefficients, got " +
                                    std::to_string(theta.size()));
}

void require_positive_x(Family f, double x) {
    if (!(x > 0.0))
        throw OutOfDomain(std::string("family ") + family_name(f) +
                          ": input must be positive, got " + std::to_string(x));
}

} // namespace

std::size_t family_coef_count(Family f) {
    switch (f) {
        case Family::F1: return 5;
        case Family::F2: return 4;
        case Family::F3: return 5;
        case Family::F4: return 3;
        case Family::F5: return 2;
        case Family::F6: return 3;
        case Family::F7: return 2;
        case Family::F8: return 4;
    }
    throw std::invalid_argument("unknown family");
}

bool family_is_bivariate(Family f) { return f == Family::F6; }

const char* family_name(Family f) {
    switch (f) {
        case Family::F1: return "F1";
        case Family::F2: return "F2";
        case Family::F3: return "F3";
        case Family::F4: return "F4";
        case Family::F5: return "F5";
        case Family::F6: return "F6";
        case Family::F7: return "F7";
        case Family::F8: return "F8";
    }
    throw std::invalid_argument("unknown family");
}

Family parse_family(const std::string& name) {
    for (Family f : {Family::F1, Family::F2, Family::F3, Family::F4, Family::F5, Family::F6,
                     Family::F7, Family::F8})
        if (name == family_name(f)) return f;
    throw SchemaError("unknown model family '" + name + "'");
}

double eval_family(Family f, const std::vector<double>& theta, double x) {
    require_theta(f, theta);
    const std::vector<double>& t = theta;
    switch (f) {
        case Family::F1:
            require_positive_x(f, x);
            return t[0] - t[1] * std::exp(-t[2] * x) + t[3] * std::exp(std::pow(x, t[4]));
        case Family::F2:
            require_positive_x(f, x);
            return -t[0] * std::pow(x, -t[1]) + t[2] * std::exp(std::pow(x, -t[3]));
        case Family::F3:
            require_positive_x(f, x);
            return t[0] - t[1] * std::exp(-t[2] * x) + t[3] * std::pow(x, -t[4]);
        case Family::F4:
            require_positive_x(f, x);
            return t[0] + t[1] * std::exp(-t[2] * x);
        case Family::F5: {
            require_positive_x(f, x);
            const double den = t[1] + x;
            if (den == 0.0)
                throw OutOfDomain("family F5: input sits on the pole at " + std::to_string(-t[1]));
            return t[0] * x / den;
        }
        case Family::F6:
            throw std::invalid_argument("family F6 takes two inputs, use eval_family2");
        case Family::F7:
            return t[0] + t[1] * x;
        case Family::F8:
            require_positive_x(f, x);
            return t[0] - t[1] * std::exp(-t[2] * x) + t[3] * x;
    }
    throw std::invalid_argument("unknown family");
}

double eval_family2(Family f, const std::vector<double>& theta, double u, double v) {
    if (f != Family::F6)
        throw std::invalid_argument("eval_family2 applies to family F6 only");
    require_theta(f, theta);
    return theta[0] + theta[1] * u + theta[2] * v;
}

std::vector<double> family_jacobian(Family f, const std::vector<double>& theta, double x) {
    require_theta(f, theta);
    const std::vector<double>& t = theta;
    switch (f) {
        case Family::F1: {
            require_positive_x(f, x);
            const double e3 = std::exp(-t[2] * x);
            const double xp = std::pow(x, t[4]);
            const double ep = std::exp(xp);
            return {1.0, -e3, t[1] * x * e3, ep, t[3] * ep * xp * std::log(x)};
        }
        case Family::F2: {
            require_positive_x(f, x);
            const double lx = std::log(x);
            const double xp2 = std::pow(x, -t[1]);
            const double xp4 = std::pow(x, -t[3]);
            const double ep = std::exp(xp4);
            return {-xp2, t[0] * lx * xp2, ep, -t[2] * lx * xp4 * ep};
        }
        case Family::F3: {
            require_positive_x(f, x);
            const double e3 = std::exp(-t[2] * x);
            const double xp = std::pow(x, -t[4]);
            return {1.0, -e3, t[1] * x * e3, xp, -t[3] * std::log(x) * xp};
        }
        case Family::F4: {
            require_positive_x(f, x);
            const double e3 = std::exp(-t[2] * x);
            return {1.0, e3, -t[1] * x * e3};
        }
        case Family::F5: {
            require_positive_x(f, x);
            const double den = t[1] + x;
            if (den == 0.0)
                throw OutOfDomain("family F5: input sits on the pole at " + std::to_string(-t[1]));
            return {x / den, -t[0] * x / (den * den)};
        }
        case Family::F6:
            throw std::invalid_argument("family F6 takes two inputs, use family_jacobian2");
        case Family::F7:
            return {1.0, x};
        case Family::F8: {
            require_positive_x(f, x);
            const double e3 = std::exp(-t[2] * x);
            return {1.0, -e3, t[1] * x * e3, x};
        }
    }
    throw std::invalid_argument("unknown family");
}

std::vector<double> family_jacobian2(Family f, const std::vector<double>& theta, double u,
                                     double v) {
    if (f != Family::F6)
        throw std::invalid_argument("family_jacobian2 applies to family F6 only");
    require_theta(f, theta);
    return {1.0, u, v};
}

FitResult fit_family(Family f, const std::vector<double>& xs, const std::vector<double>& ys,
                     std::vector<double> theta0, const FitOptions& opts) {
    if (family_is_bivariate(f))
        throw std::invalid_argument("fit_family handles single-input families only");
    require_theta(f, theta0);
    auto model = [f](double x, const std::vector<double>& th) { return eval_family(f, th, x); };
    auto jac = [f](double x, const std::vector<double>& th) {
        return family_jacobian(f, th, x);
    };
    return gauss_newton_fit(model, jac, xs, ys, std::move(theta0), opts);
}

const char* input_unit_name(InputUnit u) {
    return u == InputUnit::Micrometer ? "um" : "m";
}

InputUnit parse_input_unit(const std::string& name) {
    if (name == "um") return InputUnit::Micrometer;
    if (name == "m") return InputUnit::Meter;
    throw UnitError("unknown input unit '" + name + "' (expected um or m)");
}

namespace {

double scaled_input(const ModelSpec& spec, double x_m) {
    if (!(x_m >= kGeomMinM && x_m <= kGeomMaxM))
        throw OutOfDomain("geometry " + std::to_string(x_m) +
                          " m is outside the model domain [1.8e-07, 5e-04] m");
    return spec.input_unit == InputUnit::Micrometer ? x_m * 1e6 : x_m;
}

} // namespace

double eval_model(const ModelSpec& spec, double x_m) {
    return eval_family(spec.family, spec.theta, scaled_input(spec, x_m));
}

std::vector<double> model_jacobian(const ModelSpec& spec, double x_m) {
    return family_jacobian(spec.family, spec.theta, scaled_input(spec, x_m));
}

} // namespace mosizer
