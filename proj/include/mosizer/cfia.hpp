#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mosizer/bundle.hpp"
#include "mosizer/numeric.hpp"
#include "mosizer/sizing.hpp"

namespace mosizer {

// Small-signal quantities of the two-stage current-feedback amplifier:
// transconductances of the input and second-stage devices, their output
// resistances, the three current-mirror load resistances, and the feedback
// divider. gmb1_s may be zero when body effect is not modeled.
struct SmallSignalParams {
    double gm1_s = 0.0;
    double gm2_s = 0.0;
    double gmb1_s = 0.0;
    double ro1_ohm = 0.0;
    double ro2_ohm = 0.0;
    double rout1_ohm = 0.0;
    double rout2_ohm = 0.0;
    double rout3_ohm = 0.0;
    double r1_ohm = 0.0;
    double r2_ohm = 0.0;
};

/// Parallel combination 1/(1/a + 1/b). The reciprocal form stays finite for
/// very large legs and returns the other leg when one is infinite.
double parallel_resistance(double a_ohm, double b_ohm);

/// Current through a bridging resistor: (v1 - v2)/rg.
double rg_current(double v1_v, double v2_v, double rg_ohm);

/// rout2 in parallel with ro1; the shorthand the gain chain is written in.
double alpha(const SmallSignalParams& p);

/// Composite feedback conductance of the amplifier loop (literal sum of the
/// divider, mirror, and transconductance terms).
double beta_factor(const SmallSignalParams& p);

/// Small-signal voltage gain from the full two-stage chain. Solves the
/// coupled node equations for v_out/v_in. Throws SingularDenominator when the
/// loop denominator vanishes or overflows.
double gain_full(const SmallSignalParams& p);

/// Ideal-loop approximation -r2/r1.
double gain_simplified(double r1_ohm, double r2_ohm);

/// Resistance looking into the input device's source:
/// (1/gm1 || 1/gmb1 || ro1) * (1 + rout2/ro1).
double rout4(const SmallSignalParams& p);

// One design inequality, evaluated as lhs >= ratio * rhs. lhs always carries
// the side that must dominate, so raising lhs can never break a passing row.
struct ConstraintRow {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
};

/// Evaluates the amplifier's "much greater than" design rules at the given
/// dominance ratio (default 10).
std::vector<ConstraintRow> check_constraints(const SmallSignalParams& p,
                                             double ratio = 10.0);

struct PlanTransistor {
    std::string name;
    DeviceKind kind = DeviceKind::Nmos;
    double id_a = 0.0;
    double vgs_v = 0.0;
    double vds_v = 0.0;
    double l_m = 0.0;
};

struct DesignPlan {
    std::vector<PlanTransistor> transistors;
    double vdd_v = 0.0;
    std::vector<double> branch_currents_a;
    double r1_ohm = 0.0;
    double r2_ohm = 0.0;
};

/// Reads a design plan: [transistor.<name>] sections plus optional [supply]
/// and [feedback]. Throws ParseError/SchemaError like the bundle loader.
DesignPlan load_plan(const std::string& path);

// Expected or measured bias summary for one transistor. Values are
// magnitudes; percent errors are computed as 100*|e - a|/|e|.
struct ErrorPoint {
    std::string name;
    double vds_v = 0.0;
    double ip_a = 0.0;
    double ia_a = 0.0;
};

struct ErrorRow {
    std::string name;
    double expected_vds_v = 0.0, actual_vds_v = 0.0, vds_err_pct = 0.0;
    double expected_ip_a = 0.0, actual_ip_a = 0.0, ip_err_pct = 0.0;
    double expected_ia_a = 0.0, actual_ia_a = 0.0, ia_err_pct = 0.0;
};

struct ErrorReport {
    std::vector<ErrorRow> rows;
    CorrelationResult ip_vs_vds;
    CorrelationResult ia_vs_vds;
    std::optional<CorrelationResult> id_vs_vds;
    std::optional<CorrelationResult> l_vs_vds;
};

/// Builds the expected-vs-actual table and correlates each error series (and
/// optionally the drive currents and channel lengths) against the v_ds error.
/// Throws DegenerateSeries when a series is constant.
ErrorReport error_report(const std::vector<ErrorPoint>& expected,
                         const std::vector<ErrorPoint>& actual,
                         const std::vector<double>& id_a = {},
                         const std::vector<double>& l_m = {});

struct TransistorReport {
    PlanTransistor plan;
    SizingResult sizing;
    double gm_s = 0.0;
};

struct DesignReport {
    std::vector<TransistorReport> transistors;
    double power_w = 0.0;
    std::optional<double> gain_simplified_vv;
    std::optional<double> gain_full_vv;
    std::vector<ConstraintRow> constraints;
    std::optional<ErrorReport> errors;
};

/// Sizes every transistor in the plan, estimates transconductances from the
/// results (gm = 2*i_a/v_ov), evaluates the feedback gain and whatever design
/// rules the plan's devices allow, and sums the supply power. When measured
/// points are supplied (matched by name), the error table is attached.
DesignReport size_cfia(const CoefficientBundle& b, const DesignPlan& plan,
                       const std::vector<ErrorPoint>& measured = {});

} // namespace mosizer
