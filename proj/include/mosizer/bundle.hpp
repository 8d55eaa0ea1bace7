#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mosizer/models.hpp"

namespace mosizer {

enum class DeviceKind { Nmos, Pmos };

const char* device_kind_name(DeviceKind k);
DeviceKind parse_device_kind(const std::string& s); // throws SchemaError

/// Bias and technology metadata the models were extracted at.
struct BundleMeta {
    std::string tech;
    double vgs_v = 0.0;
    double vds_v = 0.0;
    double vsb_v = 0.0;
};

/// The per-kind model quantities a complete bundle carries.
const std::vector<std::string>& bundle_quantities();

/// Full coefficient set for one technology: seven models per device kind
/// (vth_w, vth_l, vth_combo, ucox_w, ucox_l, ucox_combo, ro) plus metadata.
class CoefficientBundle {
public:
    BundleMeta meta;

    bool has_model(DeviceKind kind, const std::string& quantity) const;
    const ModelSpec& model(DeviceKind kind, const std::string& quantity) const;
    void set_model(DeviceKind kind, const std::string& quantity, ModelSpec spec);

private:
    std::map<std::string, ModelSpec> models_[2];
};

/// Parses a bundle file. Throws ParseError on malformed lines or numbers
/// (with line diagnostics), SchemaError on unknown or missing pieces, and
/// UnitError on an unknown input_unit.
CoefficientBundle load_bundle(const std::string& path);

/// Writes the canonical form: [meta] first, then nmos and pmos sections in
/// the fixed quantity order, coefficients at 17 significant digits. A saved
/// file reloads and re-saves byte-identically.
void save_bundle(const CoefficientBundle& bundle, const std::string& path);

/// Threshold voltage (V) at geometry (w, l) in meters; negative for PMOS.
double eval_vth(const CoefficientBundle& b, DeviceKind kind, double w_m, double l_m);

/// Process transconductance factor (A/V^2) at geometry (w, l) in meters.
double eval_ucox(const CoefficientBundle& b, DeviceKind kind, double w_m, double l_m);

/// Small-signal output resistance (ohm) at channel length l in meters.
double eval_ro(const CoefficientBundle& b, DeviceKind kind, double l_m);

/// A geometry point the combined model must reproduce.
struct AnchorPoint {
    double w_m = 0.0;
    double l_m = 0.0;
    double target = 0.0;
};

/// Least-squares recalibration of a combiner (quantity "vth" or "ucox")
/// against anchor points. Fixed coefficients are held and only the free
/// ones are solved; returns the full three-coefficient vector.
/// Throws RankDeficient when the anchors are collinear in (u, v) space.
std::vector<double> calibrate_combo(const CoefficientBundle& b, DeviceKind kind,
                                    const std::string& quantity,
                                    const std::vector<AnchorPoint>& anchors,
                                    std::optional<double> fix_beta0 = {},
                                    std::optional<double> fix_beta2 = {});

} // namespace mosizer
