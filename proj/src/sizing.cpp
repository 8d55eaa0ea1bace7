#include "mosizer/sizing.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mosizer {

const char* sizing_method_name(SizingMethod m) {
    return m == SizingMethod::FixedPoint ? "fixed_point" : "bisection";
}

const char* adjust_direction_name(AdjustDirection d) {
    switch (d) {
        case AdjustDirection::DecreaseW: return "decrease_w";
        case AdjustDirection::IncreaseW: return "increase_w";
        case AdjustDirection::None: return "none";
    }
    return "?";
}

double closed_form_width(double ia_a, double ucox, double l_m, double vov_v) {
    if (vov_v <= 0.0)
        throw NotSaturated("closed_form_width: overdrive must be positive, got " +
                           std::to_string(vov_v) + " V");
    if (ia_a <= 0.0 || ucox <= 0.0 || l_m <= 0.0)
        throw std::invalid_argument("closed_form_width: current, gain factor, and length "
                                    "must be positive");
    return 2.0 * ia_a * l_m / (ucox * vov_v * vov_v);
}

namespace {

struct ModelAt {
    double vth_v = 0.0;
    double ucox = 0.0;
};

ModelAt models_at(const CoefficientBundle& b, const SizingRequest& req, double w_m) {
    ModelAt m;
    m.vth_v = req.pins.vth_v ? *req.pins.vth_v : eval_vth(b, req.kind, w_m, req.l_m);
    m.ucox = req.pins.ucox ? *req.pins.ucox : eval_ucox(b, req.kind, w_m, req.l_m);
    return m;
}

// Sweep-style current: zero in cutoff, the shared formulas elsewhere.
double lenient_id(const CoefficientBundle& b, const SizingRequest& req, double ro_ohm,
                  double w_m) {
    const double vth = req.pins.vth_v ? *req.pins.vth_v : eval_vth(b, req.kind, w_m, req.l_m);
    if (saturation_check(req.kind, req.vgs_v, req.vds_v, vth) == Region::Cutoff) return 0.0;
    const double vov = overdrive(req.kind, req.vgs_v, vth);
    const double ucox = req.pins.ucox ? *req.pins.ucox : eval_ucox(b, req.kind, w_m, req.l_m);
    const double ia = 0.5 * ucox * (w_m / req.l_m) * vov * vov;
    return ia + passive_current(req.vds_v, vov, ro_ohm);
}

SizingResult finish(const CoefficientBundle& b, const SizingRequest& req, double ro_ohm,
                    double w_m, int iterations, SizingMethod method) {
    const ModelAt m = models_at(b, req, w_m);
    const Region region = saturation_check(req.kind, req.vgs_v, req.vds_v, m.vth_v);
    if (region != Region::Saturation)
        throw NotSaturated("solved width " + std::to_string(w_m * 1e6) +
                           " um leaves the device in the " + region_name(region) +
                           " region");
    const double vov = overdrive(req.kind, req.vgs_v, m.vth_v);
    const double ia = active_current(m.ucox, Geometry{w_m, req.l_m}, vov);
    const double ip = passive_current(req.vds_v, vov, ro_ohm);

    SizingResult res;
    res.w_m = w_m;
    res.vth_v = m.vth_v;
    res.ucox = m.ucox;
    res.ro_ohm = ro_ohm;
    res.split = drain_current(ia, ip);
    res.region = region;
    res.iterations = iterations;
    res.method = method;

    if (std::fabs(res.split.id_a - req.target_id_a) > 1e-3 * req.target_id_a)
        throw NonConvergence("solution does not reproduce the target current: got " +
                             std::to_string(res.split.id_a) + " A for " +
                             std::to_string(req.target_id_a) + " A");
    return res;
}

SizingResult bisect(const CoefficientBundle& b, const SizingRequest& req,
                    const SizingOptions& opts, double ro_ohm, double g_lo, double g_hi) {
    if (g_lo == 0.0) return finish(b, req, ro_ohm, opts.w_lo_m, 0, SizingMethod::Bisection);
    if (g_hi == 0.0) return finish(b, req, ro_ohm, opts.w_hi_m, 0, SizingMethod::Bisection);
    double lo = opts.w_lo_m, hi = opts.w_hi_m;
    const int cap = 200;
    for (int it = 1; it <= cap; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = lenient_id(b, req, ro_ohm, mid) - req.target_id_a;
        if (g_mid == 0.0 || (hi - lo) < opts.tol_rel * mid)
            return finish(b, req, ro_ohm, mid, it, SizingMethod::Bisection);
        if ((g_lo < 0.0) == (g_mid < 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    throw NonConvergence("bisection exhausted " + std::to_string(cap) + " iterations");
}

} // namespace

SizingResult predict_width(const CoefficientBundle& b, const SizingRequest& req,
                           const SizingOptions& opts) {
    if (req.target_id_a <= 0.0)
        throw std::invalid_argument("predict_width: target current must be positive");
    if (req.l_m <= 0.0)
        throw std::invalid_argument("predict_width: channel length must be positive");
    if (!(opts.w_lo_m > 0.0) || !(opts.w_lo_m < opts.w_hi_m))
        throw std::invalid_argument("predict_width: bad width bracket");
    if (opts.tol_rel <= 0.0 || opts.max_iter < 1)
        throw std::invalid_argument("predict_width: bad solver options");

    const bool all_pinned = req.pins.ucox && req.pins.vth_v && req.pins.ro_ohm;
    const double ro = req.pins.ro_ohm ? *req.pins.ro_ohm : eval_ro(b, req.kind, req.l_m);

    if (all_pinned) {
        // pure arithmetic: one passive-current correction, then the closed form
        const double vov = overdrive(req.kind, req.vgs_v, *req.pins.vth_v);
        if (saturation_check(req.kind, req.vgs_v, req.vds_v, *req.pins.vth_v) !=
            Region::Saturation)
            throw NotSaturated("pinned operating point is not in saturation");
        const double ip = passive_current(req.vds_v, vov, ro);
        const double ia = req.target_id_a - ip;
        if (ia <= 0.0)
            throw NoBracket("passive current alone meets or exceeds the target");
        const double w = closed_form_width(ia, *req.pins.ucox, req.l_m, vov);
        return finish(b, req, ro, w, 0, SizingMethod::FixedPoint);
    }

    // the target must be straddled by the bracket before any iteration
    const double g_lo = lenient_id(b, req, ro, opts.w_lo_m) - req.target_id_a;
    const double g_hi = lenient_id(b, req, ro, opts.w_hi_m) - req.target_id_a;
    if (g_lo * g_hi > 0.0)
        throw NoBracket("target " + std::to_string(req.target_id_a) +
                        " A not reachable in the width bracket (endpoint currents " +
                        std::to_string(g_lo + req.target_id_a) + " A and " +
                        std::to_string(g_hi + req.target_id_a) + " A)");

    double w = std::sqrt(opts.w_lo_m * opts.w_hi_m);
    for (int it = 1; it <= opts.max_iter; ++it) {
        double w_next = 0.0;
        try {
            const ModelAt m = models_at(b, req, w);
            const double vov = overdrive(req.kind, req.vgs_v, m.vth_v);
            if (vov <= 0.0) break;
            const double ip = passive_current(req.vds_v, vov, ro);
            const double ia = req.target_id_a - ip;
            if (ia <= 0.0) break;
            const double w_cf = closed_form_width(ia, m.ucox, req.l_m, vov);
            w_next = 0.5 * w + 0.5 * w_cf;
        } catch (const Error&) {
            break;
        }
        const bool done = std::fabs(w_next - w) < opts.tol_rel * w;
        w = w_next;
        if (done) return finish(b, req, ro, w, it, SizingMethod::FixedPoint);
    }

    return bisect(b, req, opts, ro, g_lo, g_hi);
}

SweepResult brute_force_width(const CoefficientBundle& b, DeviceKind kind, double target_id_a,
                              double vgs_v, double vds_v, double l_m, double w_min_m,
                              double w_max_m, int steps) {
    if (steps < 2) throw std::invalid_argument("brute_force_width: steps must be >= 2");
    if (!(w_min_m > 0.0) || !(w_min_m < w_max_m))
        throw std::invalid_argument("brute_force_width: bad sweep range");

    SweepResult out;
    out.samples.reserve(steps);
    out.step_m = (w_max_m - w_min_m) / (steps - 1);

    double best_err = 0.0;
    double id_min = 0.0, id_max = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double w = w_min_m + i * (w_max_m - w_min_m) / (steps - 1);
        const double id =
            surrogate_id_lenient(b, kind, Geometry{w, l_m}, vgs_v, vds_v).id_a;
        out.samples.push_back(SweepSample{w, id});
        const double err = std::fabs(id - target_id_a);
        if (i == 0 || err < best_err) {
            best_err = err;
            out.best_w_m = w;
        }
        if (i == 0 || id < id_min) id_min = id;
        if (i == 0 || id > id_max) id_max = id;
    }
    out.range_saturated = target_id_a < id_min || target_id_a > id_max;
    return out;
}

Adjustment suggest_adjustment(DeviceKind, double expected_vds_v, double actual_vds_v) {
    const double e = std::fabs(expected_vds_v);
    const double a = std::fabs(actual_vds_v);
    Adjustment adj;
    if (std::fabs(a - e) <= 0.05 * e) {
        adj.direction = AdjustDirection::None;
        adj.rationale = "measured |v_ds| is within 5% of the design value";
        return adj;
    }
    if (a < e) {
        adj.direction = AdjustDirection::DecreaseW;
        adj.rationale = "measured |v_ds| is low; narrowing the device moves current into "
                        "the output-resistance path and raises v_ds";
    } else {
        adj.direction = AdjustDirection::IncreaseW;
        adj.rationale = "measured |v_ds| is high; widening the device moves current into "
                        "the square-law path and lowers v_ds";
    }
    return adj;
}

} // namespace mosizer
