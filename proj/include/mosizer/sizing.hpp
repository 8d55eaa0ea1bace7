#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mosizer/bundle.hpp"
#include "mosizer/device.hpp"

namespace mosizer {

// Optional overrides that replace the corresponding bundle evaluation. With
// all three supplied the solver never touches the bundle at all.
struct SizingPins {
    std::optional<double> ucox;
    std::optional<double> vth_v;
    std::optional<double> ro_ohm;
};

struct SizingRequest {
    DeviceKind kind = DeviceKind::Nmos;
    double target_id_a = 0.0;
    double vgs_v = 0.0;
    double vds_v = 0.0;
    double l_m = 0.0;
    SizingPins pins;
};

struct SizingOptions {
    double tol_rel = 1e-6;
    int max_iter = 100;
    double w_lo_m = 0.2e-6;
    double w_hi_m = 500e-6;
};

enum class SizingMethod { FixedPoint, Bisection };

const char* sizing_method_name(SizingMethod m);

struct SizingResult {
    double w_m = 0.0;
    double vth_v = 0.0;
    double ucox = 0.0;
    double ro_ohm = 0.0;
    CurrentSplit split;
    Region region = Region::Saturation;
    int iterations = 0;
    SizingMethod method = SizingMethod::FixedPoint;
};

/// Isolates W from the square law: w = 2 * i_a * l / (ucox * v_ov^2).
/// Throws NotSaturated when v_ov <= 0.
double closed_form_width(double ia_a, double ucox, double l_m, double vov_v);

/// Predicts the width that hits the requested drain current. The output
/// resistance is evaluated once from L; the W-dependent threshold and gain
/// factor are resolved by a damped fixed-point iteration (d = 0.5) with a
/// bracketed bisection fallback. Throws NoBracket when the target is not
/// reachable inside [w_lo, w_hi], NotSaturated when the solution leaves the
/// saturation region, and NonConvergence when both methods are exhausted.
SizingResult predict_width(const CoefficientBundle& b, const SizingRequest& req,
                           const SizingOptions& opts = {});

struct SweepSample {
    double w_m = 0.0;
    double id_a = 0.0;
};

struct SweepResult {
    std::vector<SweepSample> samples;
    double best_w_m = 0.0;
    double step_m = 0.0;
    bool range_saturated = false;
};

/// Linear width sweep of the forward model; the independent oracle for
/// predict_width. Cutoff samples report zero current. best_w_m minimizes
/// |i_d - target| (earliest sample wins ties); range_saturated marks a target
/// outside the swept current range.
SweepResult brute_force_width(const CoefficientBundle& b, DeviceKind kind, double target_id_a,
                              double vgs_v, double vds_v, double l_m, double w_min_m,
                              double w_max_m, int steps);

enum class AdjustDirection { DecreaseW, IncreaseW, None };

const char* adjust_direction_name(AdjustDirection d);

struct Adjustment {
    AdjustDirection direction = AdjustDirection::None;
    std::string rationale;
};

/// Compares measured |v_ds| against the design value. A shortfall beyond 5%
/// asks for a narrower device (more of the current shifts into the
/// output-resistance path, raising v_ds); an overshoot asks for a wider one.
Adjustment suggest_adjustment(DeviceKind kind, double expected_vds_v, double actual_vds_v);

} // namespace mosizer
