#include "mosizer/device.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sectionfile.hpp"

namespace mosizer {

const char* region_name(Region r) {
    switch (r) {
        case Region::Cutoff: return "cutoff";
        case Region::Linear: return "linear";
        case Region::Saturation: return "saturation";
    }
    return "?";
}

double overdrive(DeviceKind, double vgs_v, double vth_v) {
    return std::fabs(vgs_v) - std::fabs(vth_v);
}

Region saturation_check(DeviceKind kind, double vgs_v, double vds_v, double vth_v) {
    const double vov = overdrive(kind, vgs_v, vth_v);
    if (vov <= 0.0) return Region::Cutoff;
    if (std::fabs(vds_v) > vov) return Region::Saturation;
    return Region::Linear;
}

double active_current(double ucox, const Geometry& g, double vov_v) {
    if (g.w_m <= 0.0 || g.l_m <= 0.0)
        throw std::invalid_argument("active_current: geometry must be positive");
    if (vov_v <= 0.0)
        throw NotSaturated("active current needs a positive overdrive, got " +
                           std::to_string(vov_v) + " V");
    return 0.5 * ucox * (g.w_m / g.l_m) * vov_v * vov_v;
}

double passive_current(double vds_v, double vov_v, double ro_ohm) {
    if (ro_ohm <= 0.0)
        throw std::invalid_argument("passive_current: r_o must be positive");
    return (std::fabs(vds_v) - vov_v) / ro_ohm;
}

CurrentSplit drain_current(double ia_a, double ip_a) {
    CurrentSplit s;
    s.ia_a = ia_a;
    s.ip_a = ip_a;
    s.id_a = ia_a + ip_a;
    return s;
}

double extract_ucox(const ExtractionInput& in) {
    if (in.w_m <= 0.0 || in.l_m <= 0.0)
        throw std::invalid_argument("extract_ucox: geometry must be positive");
    const double vov = std::fabs(in.vgs_v) - std::fabs(in.vth_v);
    if (vov <= 0.0)
        throw NotSaturated("extract_ucox: overdrive must be positive, got " +
                           std::to_string(vov) + " V");
    const double den = 1.0 + in.lambda_per_v * in.vds_v;
    if (den <= 0.0)
        throw DegenerateDenominator("extract_ucox: 1 + lambda*v_ds = " +
                                    std::to_string(den));
    return 2.0 * in.id_a / ((in.w_m / in.l_m) * vov * vov * den);
}

double lambda_from_ro(double ro_ohm, double id_a) {
    if (ro_ohm <= 0.0 || id_a <= 0.0)
        throw std::invalid_argument("lambda_from_ro: r_o and i_d must be positive");
    return 1.0 / (ro_ohm * id_a);
}

namespace {

CurrentSplit surrogate_eval(const CoefficientBundle& b, DeviceKind kind, const Geometry& g,
                            double vgs_v, double vds_v, bool lenient) {
    const double vth = eval_vth(b, kind, g.w_m, g.l_m);
    const Region region = saturation_check(kind, vgs_v, vds_v, vth);
    if (region == Region::Cutoff) {
        if (lenient) return CurrentSplit{};
        throw NotSaturated("device is in cutoff (|v_gs| <= |v_th|)");
    }
    if (region == Region::Linear && !lenient)
        throw NotSaturated("device is in the linear region (|v_ds| <= overdrive)");
    const double vov = overdrive(kind, vgs_v, vth);
    const double ucox = eval_ucox(b, kind, g.w_m, g.l_m);
    const double ro = eval_ro(b, kind, g.l_m);
    const double ia = 0.5 * ucox * (g.w_m / g.l_m) * vov * vov;
    const double ip = passive_current(vds_v, vov, ro);
    return drain_current(ia, ip);
}

} // namespace

CurrentSplit surrogate_id(const CoefficientBundle& b, DeviceKind kind, const Geometry& g,
                          double vgs_v, double vds_v) {
    return surrogate_eval(b, kind, g, vgs_v, vds_v, false);
}

CurrentSplit surrogate_id_lenient(const CoefficientBundle& b, DeviceKind kind,
                                  const Geometry& g, double vgs_v, double vds_v) {
    return surrogate_eval(b, kind, g, vgs_v, vds_v, true);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= line.size()) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(detail::trim(line.substr(start)));
            break;
        }
        out.push_back(detail::trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

const std::vector<std::string>& expected_columns() {
    static const std::vector<std::string> cols = {
        "kind", "w_m", "l_m", "vgs_v", "vds_v", "vsb_v", "id_a", "vth_v", "ro_ohm",
        "lambda_per_v"};
    return cols;
}

void check_header(const std::string& path, const std::vector<std::string>& fields,
                  std::size_t lineno) {
    const auto& want = expected_columns();
    if (fields.size() != want.size() && fields.size() != want.size() - 1)
        throw ParseError(path + ":" + std::to_string(lineno) + ": header has " +
                         std::to_string(fields.size()) + " columns, expected " +
                         std::to_string(want.size() - 1) + " or " +
                         std::to_string(want.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == want[i]) continue;
        const std::size_t got_us = fields[i].rfind('_');
        const std::size_t want_us = want[i].rfind('_');
        if (got_us != std::string::npos && want_us != std::string::npos &&
            fields[i].substr(0, got_us) == want[i].substr(0, want_us))
            throw UnitError(path + ":" + std::to_string(lineno) + ": column '" + fields[i] +
                            "' should carry unit suffix '" + want[i].substr(want_us + 1) +
                            "'");
        throw ParseError(path + ":" + std::to_string(lineno) + ": unexpected column '" +
                         fields[i] + "' (expected '" + want[i] + "')");
    }
}

void require_row(bool ok, const std::string& path, std::size_t lineno,
                 const std::string& what) {
    if (!ok) throw ParseError(path + ":" + std::to_string(lineno) + ": " + what);
}

} // namespace

std::vector<CharacterizationRow> ingest_characterization(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");

    std::vector<CharacterizationRow> rows;
    std::string raw;
    std::size_t lineno = 0;
    bool saw_header = false;
    bool has_lambda = false;

    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> fields = split_csv(line);

        if (!saw_header) {
            check_header(path, fields, lineno);
            has_lambda = fields.size() == expected_columns().size();
            saw_header = true;
            continue;
        }

        const std::size_t want = has_lambda ? 10 : 9;
        require_row(fields.size() == want, path, lineno,
                    "expected " + std::to_string(want) + " fields, got " +
                        std::to_string(fields.size()));

        CharacterizationRow row;
        if (fields[0] == "nmos")
            row.kind = DeviceKind::Nmos;
        else if (fields[0] == "pmos")
            row.kind = DeviceKind::Pmos;
        else
            require_row(false, path, lineno, "unknown kind '" + fields[0] + "'");

        row.w_m = detail::parse_number(fields[1], lineno, "w_m");
        row.l_m = detail::parse_number(fields[2], lineno, "l_m");
        row.vgs_v = detail::parse_number(fields[3], lineno, "vgs_v");
        row.vds_v = detail::parse_number(fields[4], lineno, "vds_v");
        row.vsb_v = detail::parse_number(fields[5], lineno, "vsb_v");
        row.id_a = detail::parse_number(fields[6], lineno, "id_a");
        row.vth_v = detail::parse_number(fields[7], lineno, "vth_v");
        row.ro_ohm = detail::parse_number(fields[8], lineno, "ro_ohm");
        if (has_lambda) row.lambda_per_v = detail::parse_number(fields[9], lineno, "lambda_per_v");

        require_row(row.w_m > 0.0, path, lineno, "w_m must be positive");
        require_row(row.l_m > 0.0, path, lineno, "l_m must be positive");
        require_row(row.id_a >= 0.0, path, lineno, "id_a must be a magnitude");
        require_row(row.ro_ohm > 0.0, path, lineno, "ro_ohm must be positive");
        rows.push_back(row);
    }

    if (!saw_header) throw ParseError(path + ": missing header row");
    return rows;
}

} // namespace mosizer
