#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mosizer/bundle.hpp"
#include "mosizer/errors.hpp"

namespace mosizer {

// Operating region of a MOS device. Everything downstream assumes saturation;
// the other two labels exist so callers can report what went wrong.
enum class Region { Cutoff, Linear, Saturation };

const char* region_name(Region r);

// Target bias for a device. PMOS entries may carry signed voltages; all the
// math below works on magnitudes and the sign is restored only for reporting.
struct OperatingPoint {
    double id_a = 0.0;
    double vgs_v = 0.0;
    double vds_v = 0.0;
    double vsb_v = 0.0;
};

struct Geometry {
    double w_m = 0.0;
    double l_m = 0.0;
};

// Split of the drain current into the square-law part and the part flowing
// through the finite output resistance. id_a is always ia_a + ip_a exactly.
struct CurrentSplit {
    double ia_a = 0.0;
    double ip_a = 0.0;
    double id_a = 0.0;
};

/// Gate overdrive |v_gs| - |v_th|. May be negative; callers check the region.
double overdrive(DeviceKind kind, double vgs_v, double vth_v);

/// Classifies the operating region from magnitudes: cutoff when
/// |v_gs| <= |v_th|, saturation when additionally |v_ds| exceeds the
/// overdrive, linear otherwise.
Region saturation_check(DeviceKind kind, double vgs_v, double vds_v, double vth_v);

/// Square-law current 0.5 * ucox * (w/l) * v_ov^2.
/// Throws NotSaturated when v_ov <= 0.
double active_current(double ucox, const Geometry& g, double vov_v);

/// Current through the output resistance, (|v_ds| - v_ov) / r_o. A negative
/// result is returned as-is and flags linear-region operation upstream.
double passive_current(double vds_v, double vov_v, double ro_ohm);

/// Sums the two components; the total is bitwise ia_a + ip_a.
CurrentSplit drain_current(double ia_a, double ip_a);

// Inputs for recovering the gain factor from a measured bias point.
struct ExtractionInput {
    double id_a = 0.0;
    double w_m = 0.0;
    double l_m = 0.0;
    double vgs_v = 0.0;
    double vth_v = 0.0;
    double vds_v = 0.0;
    double lambda_per_v = 0.0;
};

/// Inverts the square law with channel-length modulation:
/// 2 * i_d / ((w/l) * v_ov^2 * (1 + lambda * v_ds)).
/// Throws NotSaturated when the overdrive is not positive and
/// DegenerateDenominator when 1 + lambda * v_ds <= 0.
double extract_ucox(const ExtractionInput& in);

/// Convenience mode for data sets that report r_o instead of lambda.
double lambda_from_ro(double ro_ohm, double id_a);

/// Full forward model: threshold, gain factor, and output resistance come
/// from the bundle, then the current split is evaluated at (v_gs, v_ds).
/// Throws NotSaturated unless the device sits in saturation.
CurrentSplit surrogate_id(const CoefficientBundle& b, DeviceKind kind, const Geometry& g,
                          double vgs_v, double vds_v);

/// Sweep-friendly variant: cutoff yields a zero split instead of throwing and
/// linear operation keeps the same formulas (negative passive part included).
CurrentSplit surrogate_id_lenient(const CoefficientBundle& b, DeviceKind kind,
                                  const Geometry& g, double vgs_v, double vds_v);

// One row of measured (or synthesized) device data.
struct CharacterizationRow {
    DeviceKind kind = DeviceKind::Nmos;
    double w_m = 0.0;
    double l_m = 0.0;
    double vgs_v = 0.0;
    double vds_v = 0.0;
    double vsb_v = 0.0;
    double id_a = 0.0;
    double vth_v = 0.0;
    double ro_ohm = 0.0;
    std::optional<double> lambda_per_v;
};

/// Reads a characterization CSV. Header must be
///   kind,w_m,l_m,vgs_v,vds_v,vsb_v,id_a,vth_v,ro_ohm,lambda_per_v
/// with the lambda column optional; '#' lines are ignored. A header that
/// renames a column's unit suffix raises UnitError; everything else that is
/// malformed raises ParseError with the offending line number.
std::vector<CharacterizationRow> ingest_characterization(const std::string& path);

} // namespace mosizer
