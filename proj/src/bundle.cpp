#include "mosizer/bundle.hpp"

#include <fstream>

#include "sectionfile.hpp"

namespace mosizer {

const char* device_kind_name(DeviceKind k) { return k == DeviceKind::Nmos ? "nmos" : "pmos"; }

DeviceKind parse_device_kind(const std::string& s) {
    if (s == "nmos") return DeviceKind::Nmos;
    if (s == "pmos") return DeviceKind::Pmos;
    throw SchemaError("unknown device kind '" + s + "' (expected nmos or pmos)");
}

const std::vector<std::string>& bundle_quantities() {
    static const std::vector<std::string> q{"vth_w",  "vth_l",  "vth_combo", "ucox_w",
                                            "ucox_l", "ucox_combo", "ro"};
    return q;
}

bool CoefficientBundle::has_model(DeviceKind kind, const std::string& quantity) const {
    return models_[static_cast<int>(kind)].count(quantity) > 0;
}

const ModelSpec& CoefficientBundle::model(DeviceKind kind, const std::string& quantity) const {
    const auto& m = models_[static_cast<int>(kind)];
    auto it = m.find(quantity);
    if (it == m.end())
        throw SchemaError(std::string("bundle is missing ") + device_kind_name(kind) + "." +
                          quantity);
    return it->second;
}

void CoefficientBundle::set_model(DeviceKind kind, const std::string& quantity, ModelSpec spec) {
    if (spec.theta.size() != family_coef_count(spec.family))
        throw SchemaError(std::string(device_kind_name(kind)) + "." + quantity + ": family " +
                          family_name(spec.family) + " takes " +
                          std::to_string(family_coef_count(spec.family)) + " coefficients, got " +
                          std::to_string(spec.theta.size()));
    models_[static_cast<int>(kind)][quantity] = std::move(spec);
}

namespace {

bool known_quantity(const std::string& q) {
    for (const std::string& known : bundle_quantities())
        if (q == known) return true;
    return false;
}

} // namespace

CoefficientBundle load_bundle(const std::string& path) {
    using detail::Section;
    const std::vector<Section> sections = detail::read_sections(path);

    CoefficientBundle bundle;
    bool saw_meta = false;
    for (const Section& sec : sections) {
        if (sec.name == "meta") {
            if (saw_meta) throw SchemaError(path + ": duplicate [meta] section");
            saw_meta = true;
            bool saw_tech = false, saw_vgs = false, saw_vds = false, saw_vsb = false;
            for (const auto& e : sec.entries) {
                if (e.key == "tech") {
                    bundle.meta.tech = e.value;
                    saw_tech = true;
                } else if (e.key == "vgs") {
                    bundle.meta.vgs_v = detail::parse_number(e.value, e.line, "meta.vgs");
                    saw_vgs = true;
                } else if (e.key == "vds") {
                    bundle.meta.vds_v = detail::parse_number(e.value, e.line, "meta.vds");
                    saw_vds = true;
                } else if (e.key == "vsb") {
                    bundle.meta.vsb_v = detail::parse_number(e.value, e.line, "meta.vsb");
                    saw_vsb = true;
                } else {
                    throw SchemaError(path + ":" + std::to_string(e.line) +
                                      ": unknown meta key '" + e.key + "'");
                }
            }
            if (!saw_tech || !saw_vgs || !saw_vds || !saw_vsb)
                throw SchemaError(path + ": [meta] needs tech, vgs, vds, and vsb");
            continue;
        }

        const std::size_t dot = sec.name.find('.');
        if (dot == std::string::npos)
            throw SchemaError(path + ":" + std::to_string(sec.line) + ": unknown section [" +
                              sec.name + "]");
        const DeviceKind kind = parse_device_kind(sec.name.substr(0, dot));
        const std::string quantity = sec.name.substr(dot + 1);
        if (!known_quantity(quantity))
            throw SchemaError(path + ":" + std::to_string(sec.line) + ": unknown model '" +
                              quantity + "'");
        if (bundle.has_model(kind, quantity))
            throw SchemaError(path + ":" + std::to_string(sec.line) + ": duplicate section [" +
                              sec.name + "]");

        ModelSpec spec;
        bool saw_family = false, saw_unit = false, saw_theta = false;
        for (const auto& e : sec.entries) {
            if (e.key == "family") {
                spec.family = parse_family(e.value);
                saw_family = true;
            } else if (e.key == "input_unit") {
                spec.input_unit = parse_input_unit(e.value);
                saw_unit = true;
            } else if (e.key == "theta") {
                spec.theta = detail::parse_number_list(e.value, e.line, sec.name + ".theta");
                saw_theta = true;
            } else if (e.key == "note") {
                spec.note = e.value;
            } else {
                throw SchemaError(path + ":" + std::to_string(e.line) + ": unknown key '" +
                                  e.key + "' in [" + sec.name + "]");
            }
        }
        if (!saw_family || !saw_unit || !saw_theta)
            throw SchemaError(path + ": [" + sec.name +
                              "] needs family, input_unit, and theta");
        bundle.set_model(kind, quantity, std::move(spec));
    }

    if (!saw_meta) throw SchemaError(path + ": missing [meta] section");
    for (DeviceKind kind : {DeviceKind::Nmos, DeviceKind::Pmos})
        for (const std::string& q : bundle_quantities())
            if (!bundle.has_model(kind, q))
                throw SchemaError(path + ": missing " + std::string(device_kind_name(kind)) +
                                  "." + q);
    return bundle;
}

void save_bundle(const CoefficientBundle& bundle, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << "[meta]\n";
    out << "tech = " << bundle.meta.tech << "\n";
    out << "vgs = " << detail::format_exact(bundle.meta.vgs_v) << "\n";
    out << "vds = " << detail::format_exact(bundle.meta.vds_v) << "\n";
    out << "vsb = " << detail::format_exact(bundle.meta.vsb_v) << "\n";
    for (DeviceKind kind : {DeviceKind::Nmos, DeviceKind::Pmos}) {
        for (const std::string& q : bundle_quantities()) {
            const ModelSpec& spec = bundle.model(kind, q);
            out << "\n[" << device_kind_name(kind) << "." << q << "]\n";
            out << "family = " << family_name(spec.family) << "\n";
            out << "input_unit = " << input_unit_name(spec.input_unit) << "\n";
            out << "theta = " << detail::join_numbers(spec.theta) << "\n";
            if (!spec.note.empty()) out << "note = " << spec.note << "\n";
        }
    }
    if (!out) throw ParseError("failed writing '" + path + "'");
}

namespace {

double eval_combined(const CoefficientBundle& b, DeviceKind kind, const std::string& prefix,
                     double w_m, double l_m) {
    const double u = eval_model(b.model(kind, prefix + "_w"), w_m);
    const double v = eval_model(b.model(kind, prefix + "_l"), l_m);
    const ModelSpec& combo = b.model(kind, prefix + "_combo");
    if (!family_is_bivariate(combo.family))
        throw SchemaError(std::string(device_kind_name(kind)) + "." + prefix +
                          "_combo must be a two-input family");
    return eval_family2(combo.family, combo.theta, u, v);
}

} // namespace

double eval_vth(const CoefficientBundle& b, DeviceKind kind, double w_m, double l_m) {
    return eval_combined(b, kind, "vth", w_m, l_m);
}

double eval_ucox(const CoefficientBundle& b, DeviceKind kind, double w_m, double l_m) {
    return eval_combined(b, kind, "ucox", w_m, l_m);
}

double eval_ro(const CoefficientBundle& b, DeviceKind kind, double l_m) {
    return eval_model(b.model(kind, "ro"), l_m);
}

std::vector<double> calibrate_combo(const CoefficientBundle& b, DeviceKind kind,
                                    const std::string& quantity,
                                    const std::vector<AnchorPoint>& anchors,
                                    std::optional<double> fix_beta0,
                                    std::optional<double> fix_beta2) {
    if (quantity != "vth" && quantity != "ucox")
        throw std::invalid_argument("calibrate_combo: quantity must be vth or ucox");
    const std::size_t unknowns = 3 - (fix_beta0 ? 1 : 0) - (fix_beta2 ? 1 : 0);
    if (anchors.size() < unknowns)
        throw std::invalid_argument("calibrate_combo: need at least " +
                                    std::to_string(unknowns) + " anchors");

    const ModelSpec& mw = b.model(kind, quantity + "_w");
    const ModelSpec& ml = b.model(kind, quantity + "_l");

    Matrix design(anchors.size(), unknowns);
    std::vector<double> rhs(anchors.size());
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const double u = eval_model(mw, anchors[i].w_m);
        const double v = eval_model(ml, anchors[i].l_m);
        std::size_t col = 0;
        double target = anchors[i].target;
        if (fix_beta0)
            target -= *fix_beta0;
        else
            design(i, col++) = 1.0;
        design(i, col++) = u;
        if (fix_beta2)
            target -= *fix_beta2 * v;
        else
            design(i, col++) = v;
        rhs[i] = target;
    }
    const std::vector<double> solved = solve_linear_lsq(design, rhs);

    std::vector<double> beta(3, 0.0);
    std::size_t col = 0;
    beta[0] = fix_beta0 ? *fix_beta0 : solved[col++];
    beta[1] = solved[col++];
    beta[2] = fix_beta2 ? *fix_beta2 : solved[col++];
    return beta;
}

} // namespace mosizer
