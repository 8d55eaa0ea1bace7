// Regenerates the canonical 0.18 um coefficient bundle. The combiner slopes
// for ucox are not stored literally: they are re-solved here against the
// reference sizing anchors so the data file stays reproducible.

#include <cstdio>
#include <string>
#include <vector>

#include "mosizer/bundle.hpp"

using namespace mosizer;

namespace {

ModelSpec make(Family f, InputUnit u, std::vector<double> theta, std::string note = "") {
    ModelSpec s;
    s.family = f;
    s.input_unit = u;
    s.theta = std::move(theta);
    s.note = std::move(note);
    return s;
}

} // namespace

int main(int argc, char** argv) {
    const std::string out = argc > 1 ? argv[1] : "bundles/paper-0p18um.mdl";
    const InputUnit um = InputUnit::Micrometer;
    const InputUnit m = InputUnit::Meter;

    CoefficientBundle b;
    b.meta.tech = "0.18um";
    b.meta.vgs_v = 0.5;
    b.meta.vds_v = 0.6;
    b.meta.vsb_v = 0.0;

    b.set_model(DeviceKind::Nmos, "vth_w",
                make(Family::F1, um, {0.10471, 0.14941, 2.0794, 0.14273, -0.01878}));
    b.set_model(DeviceKind::Nmos, "vth_l",
                make(Family::F2, um, {0.42488, 0.27216, 0.28097, 0.20575}));
    b.set_model(DeviceKind::Nmos, "vth_combo",
                make(Family::F6, um, {-0.38164, 0.9422, 0.98848}));
    b.set_model(DeviceKind::Nmos, "ucox_w",
                make(Family::F3, um, {388.11e-6, 428.19e-6, 0.988351, 273.7e-6, 0.21960},
                     "leading sign flipped to keep the model positive; decay rate rescaled "
                     "to per-micrometer"));
    b.set_model(DeviceKind::Nmos, "ucox_l",
                make(Family::F4, um, {333.19e-6, 185e-6, 404.08},
                     "decay rate interpreted per micrometer"));
    b.set_model(DeviceKind::Nmos, "ro", make(Family::F7, m, {8.64e6, 1.4014e12}));

    b.set_model(DeviceKind::Pmos, "vth_w",
                make(Family::F5, um, {-414.01e-3, -35.91e-3}, "scale normalized to volts"));
    b.set_model(DeviceKind::Pmos, "vth_l",
                make(Family::F5, um, {-396.94e-3, -14.34e-3}, "scale normalized to volts"));
    b.set_model(DeviceKind::Pmos, "vth_combo", make(Family::F6, um, {1.445, 1.79, 2.81}));
    b.set_model(DeviceKind::Pmos, "ucox_w",
                make(Family::F8, um, {89.038e-6, 19.262e-6, 0.34468, 0.09278e-6},
                     "linear-term coefficient scaled to per-micrometer"));
    b.set_model(DeviceKind::Pmos, "ucox_l",
                make(Family::F4, um, {68.21e-6, 9.469e-6, 0.50698}));
    b.set_model(DeviceKind::Pmos, "ro", make(Family::F7, m, {55.9e6, 6.712e12}));

    const std::vector<double> nmos_beta =
        calibrate_combo(b, DeviceKind::Nmos, "ucox",
                        {{0.65e-6, 4e-6, 324e-6}, {22.6e-6, 80e-6, 321e-6}}, 101.06e-6);
    b.set_model(DeviceKind::Nmos, "ucox_combo",
                make(Family::F6, um, nmos_beta,
                     "slopes recalibrated against reference sizing anchors"));

    const std::vector<double> pmos_beta =
        calibrate_combo(b, DeviceKind::Pmos, "ucox",
                        {{73.2e-6, 40e-6, 84e-6}, {119.2e-6, 25e-6, 86.9e-6}}, 26.07e-6);
    b.set_model(DeviceKind::Pmos, "ucox_combo",
                make(Family::F6, um, pmos_beta,
                     "slopes recalibrated against reference sizing anchors"));

    save_bundle(b, out);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}
