#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mosizer/errors.hpp"
#include "mosizer/numeric.hpp"

namespace mosizer {

/// Regression families. The code names double as the bundle-file tags.
///   F1  t1 - t2*exp(-t3*x) + t4*exp(x^t5)      (saturating sigmoid blend)
///   F2  -t1*x^-t2 + t3*exp(x^-t4)              (inverse-power plus exponential)
///   F3  t1 - t2*exp(-t3*x) + t4*x^-t5          (saturating plus inverse power)
///   F4  t1 + t2*exp(-t3*x)                     (exponential decay to a floor)
///   F5  t1*x/(t2 + x)                          (saturating rational)
///   F6  b0 + b1*u + b2*v                       (two-input affine combiner)
///   F7  b0 + b1*x                              (affine)
///   F8  t1 - t2*exp(-t3*x) + t4*x              (saturating plus linear tail)
enum class Family { F1, F2, F3, F4, F5, F6, F7, F8 };

std::size_t family_coef_count(Family f);
bool family_is_bivariate(Family f);
const char* family_name(Family f);
Family parse_family(const std::string& name); // throws SchemaError

/// Evaluates a single-input family at x (the family's own fitting unit).
/// Families F1-F5 and F8 require x > 0; F5 additionally rejects its pole.
double eval_family(Family f, const std::vector<double>& theta, double x);

/// Evaluates the two-input affine combiner (F6 only).
double eval_family2(Family f, const std::vector<double>& theta, double u, double v);

/// Analytic partial derivatives with respect to each coefficient.
std::vector<double> family_jacobian(Family f, const std::vector<double>& theta, double x);
std::vector<double> family_jacobian2(Family f, const std::vector<double>& theta,
                                     double u, double v);

/// Gauss-Newton fit of a single-input family to (xs, ys).
FitResult fit_family(Family f, const std::vector<double>& xs, const std::vector<double>& ys,
                     std::vector<double> theta0, const FitOptions& opts = {});

/// Input scaling applied to geometry before a model sees it.
enum class InputUnit { Micrometer, Meter };

const char* input_unit_name(InputUnit u);
InputUnit parse_input_unit(const std::string& name); // throws UnitError

/// A fitted model: family, coefficients, and the unit its x was fitted in.
struct ModelSpec {
    Family family = Family::F7;
    InputUnit input_unit = InputUnit::Micrometer;
    std::vector<double> theta;
    std::string note;
};

/// Geometry bounds (meters) the bundled models were trained on; evaluations
/// outside raise OutOfDomain rather than extrapolate.
inline constexpr double kGeomMinM = 0.18e-6;
inline constexpr double kGeomMaxM = 500e-6;

/// Evaluates a spec at a geometry given in meters: checks the domain,
/// rescales per input_unit, then applies the family formula.
double eval_model(const ModelSpec& spec, double x_m);

/// Coefficient partials of eval_model at a geometry in meters.
std::vector<double> model_jacobian(const ModelSpec& spec, double x_m);

} // namespace mosizer
