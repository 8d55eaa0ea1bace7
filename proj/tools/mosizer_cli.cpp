// Command-line front end. Data goes to stdout, diagnostics to stderr.
// Exit codes: 0 ok, 2 usage/parse, 3 fit divergence, 4 domain, 5 solver.

#include <CLI11.hpp>

#include <cmath>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mosizer/bundle.hpp"
#include "mosizer/cfia.hpp"
#include "mosizer/device.hpp"
#include "mosizer/errors.hpp"
#include "mosizer/models.hpp"
#include "mosizer/numeric.hpp"
#include "mosizer/sizing.hpp"
#include "sectionfile.hpp"

namespace {

using namespace mosizer;

struct Globals {
    std::string bundle_path = "bundles/paper-0p18um.mdl";
    std::string format = "text";
    int precision = 6;
};

std::string fmt(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", precision, v);
    return buf;
}

bool csv_mode(const Globals& g) { return g.format == "csv"; }

void print_kv(const Globals& g, std::initializer_list<std::pair<const char*, std::string>> kvs) {
    if (csv_mode(g)) {
        std::string header, row;
        for (const auto& [k, v] : kvs) {
            if (!header.empty()) {
                header += ',';
                row += ',';
            }
            header += k;
            row += v;
        }
        std::cout << header << '\n' << row << '\n';
    } else {
        for (const auto& [k, v] : kvs) std::cout << k << '=' << v << '\n';
    }
}

void require_arg(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        item = detail::trim(item);
        if (item.empty()) throw std::invalid_argument(std::string(what) + ": empty element");
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end != item.c_str() + item.size() || !std::isfinite(v))
            throw std::invalid_argument(std::string(what) + ": bad number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(detail::trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

// Plain x,y sample file for cmd_fit: no header, '#' comments allowed.
void read_xy(const std::string& path, std::vector<double>& xs, std::vector<double>& ys) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto fields = split_csv_line(t);
        if (fields.size() != 2) {
            std::ostringstream os;
            os << path << ":" << lineno << ": expected 'x,y', got " << fields.size()
               << " fields";
            throw ParseError(os.str());
        }
        xs.push_back(detail::parse_number(fields[0], lineno, "x"));
        ys.push_back(detail::parse_number(fields[1], lineno, "y"));
    }
    if (xs.empty()) throw ParseError(path + ": no data rows");
}

// Measured bias points for cmd_cfia: fixed header, one row per transistor.
std::vector<ErrorPoint> read_measured(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string line;
    std::size_t lineno = 0;
    bool saw_header = false;
    std::vector<ErrorPoint> pts;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!saw_header) {
            if (t != "name,vds_v,ip_a,ia_a") {
                std::ostringstream os;
                os << path << ":" << lineno << ": expected header 'name,vds_v,ip_a,ia_a'";
                throw ParseError(os.str());
            }
            saw_header = true;
            continue;
        }
        const auto fields = split_csv_line(t);
        if (fields.size() != 4) {
            std::ostringstream os;
            os << path << ":" << lineno << ": expected 4 fields, got " << fields.size();
            throw ParseError(os.str());
        }
        ErrorPoint p;
        p.name = fields[0];
        if (p.name.empty()) {
            std::ostringstream os;
            os << path << ":" << lineno << ": empty transistor name";
            throw ParseError(os.str());
        }
        p.vds_v = detail::parse_number(fields[1], lineno, "vds_v");
        p.ip_a = detail::parse_number(fields[2], lineno, "ip_a");
        p.ia_a = detail::parse_number(fields[3], lineno, "ia_a");
        pts.push_back(std::move(p));
    }
    if (!saw_header) throw ParseError(path + ": missing header");
    return pts;
}

// "start:stop:count" linear grid, in meters. count 0 is an empty grid.
std::vector<double> parse_grid(const std::string& text, const char* what) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream ss(text);
    while (std::getline(ss, part, ':')) parts.push_back(detail::trim(part));
    if (parts.size() != 3)
        throw std::invalid_argument(std::string(what) + ": expected 'start:stop:count'");
    char* end = nullptr;
    const double start = std::strtod(parts[0].c_str(), &end);
    require_arg(end == parts[0].c_str() + parts[0].size(),
                std::string(what) + ": bad start '" + parts[0] + "'");
    const double stop = std::strtod(parts[1].c_str(), &end);
    require_arg(end == parts[1].c_str() + parts[1].size(),
                std::string(what) + ": bad stop '" + parts[1] + "'");
    const long count = std::strtol(parts[2].c_str(), &end, 10);
    require_arg(end == parts[2].c_str() + parts[2].size() && count >= 0,
                std::string(what) + ": bad count '" + parts[2] + "'");
    std::vector<double> grid;
    if (count == 0) return grid;
    if (count == 1) {
        grid.push_back(start);
        return grid;
    }
    for (long i = 0; i < count; ++i)
        grid.push_back(start + (stop - start) * static_cast<double>(i) /
                                   static_cast<double>(count - 1));
    return grid;
}

struct FitArgs {
    std::string family, data, init;
    double tol = 1e-12;
    int max_iter = 100;
};

int cmd_fit(const Globals& g, const FitArgs& a) {
    std::string fam_name = a.family;
    for (char& c : fam_name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const Family fam = parse_family(fam_name);
    require_arg(!family_is_bivariate(fam),
                "family " + a.family + " is bivariate; the x,y data file carries one abscissa");
    require_arg(a.max_iter > 0, "max-iter must be positive");
    require_arg(a.tol > 0.0, "tol must be positive");
    std::vector<double> theta0 = parse_list(a.init, "init");
    const std::size_t want = family_coef_count(fam);
    if (theta0.size() != want) {
        std::ostringstream os;
        os << "family " << family_name(fam) << " expects " << want << " coefficients, got "
           << theta0.size();
        throw std::invalid_argument(os.str());
    }
    std::vector<double> xs, ys;
    read_xy(a.data, xs, ys);

    FitOptions opts;
    opts.max_iterations = static_cast<std::size_t>(a.max_iter);
    opts.sse_rel_tol = a.tol;
    const FitResult res = fit_family(fam, xs, ys, theta0, opts);

    if (csv_mode(g)) {
        std::cout << "key,value\n";
        for (std::size_t i = 0; i < res.theta.size(); ++i)
            std::cout << "theta" << i << ',' << detail::format_exact(res.theta[i]) << '\n';
        std::cout << "sse," << fmt(res.sse, g.precision) << '\n';
        std::cout << "iterations," << res.iterations << '\n';
        std::cout << "converged," << (res.converged ? 1 : 0) << '\n';
    } else {
        std::cout << "theta=" << detail::join_numbers(res.theta) << '\n';
        std::cout << "sse=" << fmt(res.sse, g.precision) << '\n';
        std::cout << "iterations=" << res.iterations << '\n';
        std::cout << "converged=" << (res.converged ? "true" : "false") << '\n';
    }
    return 0;
}

struct EvalArgs {
    std::string device, quantity;
    double w = 0.0;
    double l = 0.0;
    bool has_w = false;
};

int cmd_eval(const Globals& g, const EvalArgs& a) {
    const CoefficientBundle b = load_bundle(g.bundle_path);
    const DeviceKind kind = parse_device_kind(a.device);
    require_arg(a.l > 0.0, "--l must be positive (meters)");
    double value = 0.0;
    const char* key = nullptr;
    if (a.quantity == "vth") {
        require_arg(a.has_w, "quantity vth requires --w");
        require_arg(a.w > 0.0, "--w must be positive (meters)");
        value = eval_vth(b, kind, a.w, a.l);
        key = "vth_v";
    } else if (a.quantity == "ucox") {
        require_arg(a.has_w, "quantity ucox requires --w");
        require_arg(a.w > 0.0, "--w must be positive (meters)");
        value = eval_ucox(b, kind, a.w, a.l);
        key = "ucox";
    } else if (a.quantity == "ro") {
        value = eval_ro(b, kind, a.l);
        key = "ro_ohm";
    } else {
        throw std::invalid_argument("unknown quantity '" + a.quantity +
                                    "' (expected vth, ucox, or ro)");
    }
    if (csv_mode(g))
        print_kv(g, {{"quantity", a.quantity}, {"value", fmt(value, g.precision)}});
    else
        std::cout << key << '=' << fmt(value, g.precision) << '\n';
    return 0;
}

struct SizeArgs {
    std::string device;
    double id = 0.0, vgs = 0.0, vds = 0.0, l = 0.0;
    double pin_ucox = 0.0, pin_vth = 0.0, pin_ro = 0.0;
    bool has_pin_ucox = false, has_pin_vth = false, has_pin_ro = false;
};

int cmd_size(const Globals& g, const SizeArgs& a) {
    const DeviceKind kind = parse_device_kind(a.device);
    require_arg(a.id > 0.0, "--id must be positive (amperes)");
    require_arg(a.l > 0.0, "--l must be positive (meters)");
    SizingRequest req;
    req.kind = kind;
    req.target_id_a = a.id;
    req.vgs_v = a.vgs;
    req.vds_v = a.vds;
    req.l_m = a.l;
    if (a.has_pin_ucox) req.pins.ucox = a.pin_ucox;
    if (a.has_pin_vth) req.pins.vth_v = a.pin_vth;
    if (a.has_pin_ro) req.pins.ro_ohm = a.pin_ro;

    // A fully pinned request never touches the bundle, so only load it when
    // some quantity still needs evaluating.
    CoefficientBundle b;
    if (!(a.has_pin_ucox && a.has_pin_vth && a.has_pin_ro)) b = load_bundle(g.bundle_path);
    const SizingResult res = predict_width(b, req);

    print_kv(g, {{"w_m", fmt(res.w_m, g.precision)},
                 {"vth_v", fmt(res.vth_v, g.precision)},
                 {"ucox", fmt(res.ucox, g.precision)},
                 {"ro_ohm", fmt(res.ro_ohm, g.precision)},
                 {"ia_a", fmt(res.split.ia_a, g.precision)},
                 {"ip_a", fmt(res.split.ip_a, g.precision)},
                 {"id_a", fmt(res.split.id_a, g.precision)},
                 {"region", region_name(res.region)},
                 {"iterations", std::to_string(res.iterations)},
                 {"method", sizing_method_name(res.method)}});
    return 0;
}

struct SweepArgs {
    std::string device;
    double id = 0.0, vgs = 0.0, vds = 0.0, l = 0.0;
    double w_min = 0.0, w_max = 0.0;
    int steps = 1000;
};

int cmd_sweep(const Globals& g, const SweepArgs& a) {
    const CoefficientBundle b = load_bundle(g.bundle_path);
    const DeviceKind kind = parse_device_kind(a.device);
    require_arg(a.id > 0.0, "--id must be positive (amperes)");
    require_arg(a.l > 0.0, "--l must be positive (meters)");
    require_arg(a.steps >= 2, "--steps must be at least 2");
    require_arg(a.w_min < a.w_max, "--w-min must be below --w-max");
    const SweepResult res =
        brute_force_width(b, kind, a.id, a.vgs, a.vds, a.l, a.w_min, a.w_max, a.steps);
    std::cout << "w_m,id_a\n";
    for (const SweepSample& s : res.samples)
        std::cout << fmt(s.w_m, g.precision) << ',' << fmt(s.id_a, g.precision) << '\n';
    std::cout << "best_w_m," << fmt(res.best_w_m, g.precision) << '\n';
    if (res.range_saturated)
        std::cerr << "mosizer: warning: target current lies outside the swept range\n";
    return 0;
}

struct CfiaArgs {
    std::string plan;
    std::string measured;
};

int cmd_cfia(const Globals& g, const CfiaArgs& a) {
    const CoefficientBundle b = load_bundle(g.bundle_path);
    const DesignPlan plan = load_plan(a.plan);
    std::vector<ErrorPoint> measured;
    if (!a.measured.empty()) measured = read_measured(a.measured);
    const DesignReport rep = size_cfia(b, plan, measured);
    const int p = g.precision;

    std::cout << "[sizing]\n";
    for (const TransistorReport& t : rep.transistors) {
        std::cout << "name=" << t.plan.name << " kind=" << device_kind_name(t.plan.kind)
                  << " w_m=" << fmt(t.sizing.w_m, p) << " vth_v=" << fmt(t.sizing.vth_v, p)
                  << " ucox=" << fmt(t.sizing.ucox, p)
                  << " ro_ohm=" << fmt(t.sizing.ro_ohm, p)
                  << " ia_a=" << fmt(t.sizing.split.ia_a, p)
                  << " ip_a=" << fmt(t.sizing.split.ip_a, p)
                  << " gm_s=" << fmt(t.gm_s, p) << " region=" << region_name(t.sizing.region)
                  << " iterations=" << t.sizing.iterations
                  << " method=" << sizing_method_name(t.sizing.method) << '\n';
    }
    std::cout << "[supply]\npower_w=" << fmt(rep.power_w, p) << '\n';
    std::cout << "[gain]\n";
    if (rep.gain_simplified_vv)
        std::cout << "gain_simplified_vv=" << fmt(*rep.gain_simplified_vv, p) << '\n';
    if (rep.gain_full_vv) std::cout << "gain_full_vv=" << fmt(*rep.gain_full_vv, p) << '\n';
    std::cout << "[constraints]\n";
    for (const ConstraintRow& row : rep.constraints)
        std::cout << "name=" << row.name << " lhs=" << fmt(row.lhs, p)
                  << " rhs=" << fmt(row.rhs, p) << " satisfied=" << (row.satisfied ? 1 : 0)
                  << '\n';
    if (rep.errors) {
        std::cout << "[errors]\n";
        for (const ErrorRow& row : rep.errors->rows)
            std::cout << "name=" << row.name << " vds_err_pct=" << fmt(row.vds_err_pct, p)
                      << " ip_err_pct=" << fmt(row.ip_err_pct, p)
                      << " ia_err_pct=" << fmt(row.ia_err_pct, p) << '\n';
        std::cout << "[correlations]\n";
        auto corr_line = [&](const char* name, const CorrelationResult& c) {
            std::cout << "name=" << name << " r=" << fmt(c.r, p)
                      << " p=" << fmt(c.p_two_sided, p) << " ci_low=" << fmt(c.ci_low, p)
                      << " ci_high=" << fmt(c.ci_high, p) << '\n';
        };
        corr_line("ip_vs_vds", rep.errors->ip_vs_vds);
        corr_line("ia_vs_vds", rep.errors->ia_vs_vds);
        if (rep.errors->id_vs_vds) corr_line("id_vs_vds", *rep.errors->id_vs_vds);
        if (rep.errors->l_vs_vds) corr_line("l_vs_vds", *rep.errors->l_vs_vds);
    }
    return 0;
}

struct CharacterizeArgs {
    std::string device;
    std::string w_grid, l_grid;
};

int cmd_characterize(const Globals& g, const CharacterizeArgs& a) {
    const CoefficientBundle b = load_bundle(g.bundle_path);
    const DeviceKind kind = parse_device_kind(a.device);
    const std::vector<double> ws = parse_grid(a.w_grid, "--w-grid");
    const std::vector<double> ls = parse_grid(a.l_grid, "--l-grid");
    const double sign = kind == DeviceKind::Pmos ? -1.0 : 1.0;
    const double vgs = sign * b.meta.vgs_v;
    const double vds = sign * b.meta.vds_v;

    std::cout << "kind,w_m,l_m,vgs_v,vds_v,vsb_v,id_a,vth_v,ro_ohm,lambda_per_v\n";
    for (double l : ls) {
        for (double w : ws) {
            const double vth = eval_vth(b, kind, w, l);
            const double ro = eval_ro(b, kind, l);
            const CurrentSplit split = surrogate_id(b, kind, {w, l}, vgs, vds);
            const double lambda = lambda_from_ro(ro, split.id_a);
            std::cout << device_kind_name(kind) << ',' << detail::format_exact(w) << ','
                      << detail::format_exact(l) << ',' << detail::format_exact(vgs) << ','
                      << detail::format_exact(vds) << ','
                      << detail::format_exact(b.meta.vsb_v) << ','
                      << detail::format_exact(split.id_a) << ',' << detail::format_exact(vth)
                      << ',' << detail::format_exact(ro) << ',' << detail::format_exact(lambda)
                      << '\n';
        }
    }
    return 0;
}

struct StatsArgs {
    std::string x, y;
};

int cmd_stats_pearson(const Globals& g, const StatsArgs& a) {
    const std::vector<double> xs = parse_list(a.x, "--x");
    const std::vector<double> ys = parse_list(a.y, "--y");
    if (xs.size() != ys.size()) {
        std::ostringstream os;
        os << "--x has " << xs.size() << " values but --y has " << ys.size();
        throw std::invalid_argument(os.str());
    }
    require_arg(xs.size() >= 3, "need at least 3 points");
    const CorrelationResult c = pearson(xs, ys);
    print_kv(g, {{"r", fmt(c.r, g.precision)},
                 {"p", fmt(c.p_two_sided, g.precision)},
                 {"ci_low", fmt(c.ci_low, g.precision)},
                 {"ci_high", fmt(c.ci_high, g.precision)}});
    return 0;
}

template <class F>
int run_guarded(F&& f) {
    try {
        return f();
    } catch (const ParseError& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 2;
    } catch (const UnitError& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 2;
    } catch (const Diverged& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 3;
    } catch (const RankDeficient& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 3;
    } catch (const OutOfDomain& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 4;
    } catch (const DegenerateSeries& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 4;
    } catch (const DegenerateDenominator& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 4;
    } catch (const SingularDenominator& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 4;
    } catch (const NoBracket& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 5;
    } catch (const NonConvergence& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 5;
    } catch (const NotSaturated& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 5;
    } catch (const std::invalid_argument& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "mosizer: " << e.what() << '\n';
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    Globals g;
    CLI::App app{"MOSFET sizing and amplifier design calculator"};
    app.require_subcommand(1);
    app.add_option("--bundle", g.bundle_path, "coefficient bundle path");
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"text", "csv"}));
    app.add_option("--precision", g.precision, "significant digits after the point")
        ->check(CLI::Range(0, 17));

    FitArgs fit_args;
    CLI::App* fit = app.add_subcommand("fit", "fit a model family to x,y samples");
    fit->fallthrough();
    fit->add_option("--family", fit_args.family, "model family name")->required();
    fit->add_option("--data", fit_args.data, "csv file of x,y rows")->required();
    fit->add_option("--init", fit_args.init, "comma-separated starting coefficients")
        ->required();
    fit->add_option("--tol", fit_args.tol, "relative SSE convergence tolerance");
    fit->add_option("--max-iter", fit_args.max_iter, "iteration cap");

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "evaluate a bundle quantity");
    eval->fallthrough();
    eval->add_option("--device", eval_args.device, "nmos or pmos")->required();
    eval->add_option("--quantity", eval_args.quantity, "vth, ucox, or ro")->required();
    CLI::Option* eval_w = eval->add_option("--w", eval_args.w, "width in meters");
    eval->add_option("--l", eval_args.l, "length in meters")->required();

    SizeArgs size_args;
    CLI::App* size = app.add_subcommand("size", "solve the width for a drain current");
    size->fallthrough();
    size->add_option("--device", size_args.device, "nmos or pmos")->required();
    size->add_option("--id", size_args.id, "target drain current in amperes")->required();
    size->add_option("--vgs", size_args.vgs, "gate-source voltage in volts")->required();
    size->add_option("--vds", size_args.vds, "drain-source voltage in volts")->required();
    size->add_option("--l", size_args.l, "channel length in meters")->required();
    CLI::Option* pin_ucox = size->add_option("--pin-ucox", size_args.pin_ucox,
                                             "override the gain factor (A/V^2)");
    CLI::Option* pin_vth = size->add_option("--pin-vth", size_args.pin_vth,
                                            "override the threshold voltage (V)");
    CLI::Option* pin_ro = size->add_option("--pin-ro", size_args.pin_ro,
                                           "override the output resistance (ohms)");

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "brute-force width sweep");
    sweep->fallthrough();
    sweep->add_option("--device", sweep_args.device, "nmos or pmos")->required();
    sweep->add_option("--id", sweep_args.id, "target drain current in amperes")->required();
    sweep->add_option("--vgs", sweep_args.vgs, "gate-source voltage in volts")->required();
    sweep->add_option("--vds", sweep_args.vds, "drain-source voltage in volts")->required();
    sweep->add_option("--l", sweep_args.l, "channel length in meters")->required();
    sweep->add_option("--w-min", sweep_args.w_min, "sweep start in meters")->required();
    sweep->add_option("--w-max", sweep_args.w_max, "sweep end in meters")->required();
    sweep->add_option("--steps", sweep_args.steps, "sample count (default 1000)");

    CfiaArgs cfia_args;
    CLI::App* cfia = app.add_subcommand("cfia", "run a full design plan");
    cfia->fallthrough();
    cfia->add_option("--plan", cfia_args.plan, "design plan file")->required();
    cfia->add_option("--measured", cfia_args.measured, "measured bias csv");

    CharacterizeArgs ch_args;
    CLI::App* characterize =
        app.add_subcommand("characterize", "emit synthetic characterization data");
    characterize->fallthrough();
    characterize->add_option("--device", ch_args.device, "nmos or pmos")->required();
    characterize->add_option("--w-grid", ch_args.w_grid, "width grid start:stop:count (m)")
        ->required();
    characterize->add_option("--l-grid", ch_args.l_grid, "length grid start:stop:count (m)")
        ->required();

    StatsArgs stats_args;
    CLI::App* stats = app.add_subcommand("stats", "statistics helpers");
    stats->fallthrough();
    stats->require_subcommand(1);
    CLI::App* pearson_cmd = stats->add_subcommand("pearson", "correlate two series");
    pearson_cmd->fallthrough();
    pearson_cmd->add_option("--x", stats_args.x, "comma-separated values")->required();
    pearson_cmd->add_option("--y", stats_args.y, "comma-separated values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    eval_args.has_w = eval_w->count() > 0;
    size_args.has_pin_ucox = pin_ucox->count() > 0;
    size_args.has_pin_vth = pin_vth->count() > 0;
    size_args.has_pin_ro = pin_ro->count() > 0;

    return run_guarded([&]() -> int {
        if (app.got_subcommand(fit)) return cmd_fit(g, fit_args);
        if (app.got_subcommand(eval)) return cmd_eval(g, eval_args);
        if (app.got_subcommand(size)) return cmd_size(g, size_args);
        if (app.got_subcommand(sweep)) return cmd_sweep(g, sweep_args);
        if (app.got_subcommand(cfia)) return cmd_cfia(g, cfia_args);
        if (app.got_subcommand(characterize)) return cmd_characterize(g, ch_args);
        if (app.got_subcommand(stats)) return cmd_stats_pearson(g, stats_args);
        return 2;
    });
}
