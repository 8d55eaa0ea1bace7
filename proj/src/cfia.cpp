#include "mosizer/cfia.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mosizer/errors.hpp"
#include "sectionfile.hpp"

namespace mosizer {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) {
        std::ostringstream os;
        os << what << " must be positive, got " << v;
        throw std::invalid_argument(os.str());
    }
}

void require_params(const SmallSignalParams& p) {
    require_positive(p.gm1_s, "gm1");
    require_positive(p.gm2_s, "gm2");
    require_positive(p.ro1_ohm, "ro1");
    require_positive(p.ro2_ohm, "ro2");
    require_positive(p.rout1_ohm, "rout1");
    require_positive(p.rout2_ohm, "rout2");
    require_positive(p.rout3_ohm, "rout3");
    require_positive(p.r1_ohm, "r1");
    require_positive(p.r2_ohm, "r2");
}

ConstraintRow make_row(const char* name, double lhs, double rhs, double ratio) {
    return {name, lhs, rhs, lhs >= ratio * rhs};
}

double percent_error(double expected, double actual) {
    return 100.0 * std::fabs(expected - actual) / std::fabs(expected);
}

} // namespace

double parallel_resistance(double a_ohm, double b_ohm) {
    return 1.0 / (1.0 / a_ohm + 1.0 / b_ohm);
}

double rg_current(double v1_v, double v2_v, double rg_ohm) {
    require_positive(rg_ohm, "rg");
    return (v1_v - v2_v) / rg_ohm;
}

double alpha(const SmallSignalParams& p) {
    return parallel_resistance(p.rout2_ohm, p.ro1_ohm);
}

double beta_factor(const SmallSignalParams& p) {
    const double a = alpha(p);
    const double t1 = 1.0 / p.r1_ohm;
    const double t2 = (a / p.rout2_ohm) * (p.gm1_s + 1.0 / p.ro1_ohm);
    const double t3 = a * p.gm1_s * p.gm2_s;
    const double t4 = a * p.gm2_s / p.ro1_ohm;
    const double t5 = 1.0 / p.ro2_ohm;
    const double t6 = 1.0 / p.rout1_ohm;
    return t1 + t2 + t3 + t4 + t5 + t6;
}

double gain_full(const SmallSignalParams& p) {
    require_positive(p.ro1_ohm, "ro1");
    require_positive(p.ro2_ohm, "ro2");
    require_positive(p.rout1_ohm, "rout1");
    require_positive(p.rout2_ohm, "rout2");
    require_positive(p.rout3_ohm, "rout3");
    require_positive(p.r1_ohm, "r1");
    // Dead transconductances and a shorted r2 are meaningful limits, so only
    // negative values are rejected here.
    if (p.gm1_s < 0.0 || p.gm2_s < 0.0) throw std::invalid_argument("gm must be non-negative");
    if (p.r2_ohm < 0.0) throw std::invalid_argument("r2 must be non-negative");
    const double a = alpha(p);
    // The loop conductance seen by the divider node carries the r1 leg twice
    // over: once inside beta_factor and once for the source-side branch.
    const double beta_loop = beta_factor(p) + 1.0 / p.r1_ohm;

    // Node equations: i2 = va*v_d2 - vb*v_in - vc*v_out with v_d2 resolved
    // through the loop, then v_out = i2 * (rout3 || r2/2).
    const double va =
        a * p.gm2_s * (p.gm1_s + 1.0 / p.ro1_ohm + 1.0 / (a * p.gm2_s * p.ro2_ohm));
    const double vb = a * p.gm1_s * p.gm2_s;
    const double vc = p.gm2_s + 1.0 / p.ro2_ohm;
    const double vd = 2.0 * a * p.gm1_s / p.rout2_ohm + a * p.gm1_s * p.gm2_s;
    const double k = parallel_resistance(p.rout3_ohm, 0.5 * p.r2_ohm);

    const double num = k * (va * vd - beta_loop * vb);
    const double den = beta_loop * (1.0 + k * vc) - k * va * vc;
    if (den == 0.0 || !std::isfinite(den)) {
        std::ostringstream os;
        os << "gain denominator is " << den << "; the loop equations are singular";
        throw SingularDenominator(os.str());
    }
    return num / den;
}

double gain_simplified(double r1_ohm, double r2_ohm) {
    require_positive(r1_ohm, "r1");
    if (r2_ohm < 0.0) throw std::invalid_argument("r2 must be non-negative");
    return -r2_ohm / r1_ohm;
}

double rout4(const SmallSignalParams& p) {
    require_positive(p.gm1_s, "gm1");
    require_positive(p.ro1_ohm, "ro1");
    require_positive(p.rout2_ohm, "rout2");
    if (p.gmb1_s < 0.0) throw std::invalid_argument("gmb1 must be non-negative");
    const double looking_in = 1.0 / (p.gm1_s + p.gmb1_s + 1.0 / p.ro1_ohm);
    return looking_in * (1.0 + p.rout2_ohm / p.ro1_ohm);
}

std::vector<ConstraintRow> check_constraints(const SmallSignalParams& p, double ratio) {
    if (!(ratio > 1.0)) throw std::invalid_argument("dominance ratio must exceed 1");
    require_params(p);
    std::vector<ConstraintRow> rows;
    rows.push_back(make_row("rout3_gg_r2", p.rout3_ohm, p.r2_ohm, ratio));
    rows.push_back(make_row("ro1_gg_rout2", p.ro1_ohm, p.rout2_ohm, ratio));
    rows.push_back(make_row("ro2_gg_rout2", p.ro2_ohm, p.rout2_ohm, ratio));
    rows.push_back(make_row("r2_ll_rout3", p.rout3_ohm, p.r2_ohm, ratio));
    rows.push_back(make_row("inv_gm1_ll_rout2", p.rout2_ohm, 1.0 / p.gm1_s, ratio));
    rows.push_back(make_row("ro1_gg_rout1", p.ro1_ohm, p.rout1_ohm, ratio));
    rows.push_back(make_row("ro2_gg_rout1", p.ro2_ohm, p.rout1_ohm, ratio));
    return rows;
}

namespace {

using detail::Section;
using detail::SectionEntry;

const SectionEntry* find_entry(const Section& s, const std::string& key) {
    for (const auto& e : s.entries) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

double required_number(const Section& s, const std::string& key) {
    const SectionEntry* e = find_entry(s, key);
    if (!e) {
        std::ostringstream os;
        os << "line " << s.line << ": section [" << s.name << "] is missing " << key;
        throw SchemaError(os.str());
    }
    return detail::parse_number(e->value, e->line, key);
}

void reject_unknown_keys(const Section& s, std::initializer_list<const char*> known) {
    for (const auto& e : s.entries) {
        if (std::find_if(known.begin(), known.end(), [&](const char* k) {
                return e.key == k;
            }) == known.end()) {
            std::ostringstream os;
            os << "line " << e.line << ": unknown key '" << e.key << "' in section ["
               << s.name << "]";
            throw SchemaError(os.str());
        }
    }
}

} // namespace

DesignPlan load_plan(const std::string& path) {
    DesignPlan plan;
    bool saw_supply = false;
    bool saw_feedback = false;
    for (const Section& s : detail::read_sections(path)) {
        if (s.name.rfind("transistor.", 0) == 0) {
            PlanTransistor t;
            t.name = s.name.substr(std::string("transistor.").size());
            if (t.name.empty()) {
                std::ostringstream os;
                os << "line " << s.line << ": transistor section has no name";
                throw SchemaError(os.str());
            }
            for (const auto& existing : plan.transistors) {
                if (existing.name == t.name) {
                    std::ostringstream os;
                    os << "line " << s.line << ": duplicate transistor '" << t.name << "'";
                    throw SchemaError(os.str());
                }
            }
            reject_unknown_keys(s, {"kind", "id_a", "vgs_v", "vds_v", "l_m"});
            const SectionEntry* kind = find_entry(s, "kind");
            if (!kind) {
                std::ostringstream os;
                os << "line " << s.line << ": section [" << s.name << "] is missing kind";
                throw SchemaError(os.str());
            }
            t.kind = parse_device_kind(kind->value);
            t.id_a = required_number(s, "id_a");
            t.vgs_v = required_number(s, "vgs_v");
            t.vds_v = required_number(s, "vds_v");
            t.l_m = required_number(s, "l_m");
            if (!(t.id_a > 0.0)) {
                std::ostringstream os;
                os << "line " << s.line << ": transistor '" << t.name
                   << "' needs a positive id_a, got " << t.id_a;
                throw SchemaError(os.str());
            }
            if (!(t.l_m > 0.0)) {
                std::ostringstream os;
                os << "line " << s.line << ": transistor '" << t.name
                   << "' needs a positive l_m, got " << t.l_m;
                throw SchemaError(os.str());
            }
            plan.transistors.push_back(std::move(t));
        } else if (s.name == "supply") {
            if (saw_supply) {
                std::ostringstream os;
                os << "line " << s.line << ": duplicate [supply] section";
                throw SchemaError(os.str());
            }
            saw_supply = true;
            reject_unknown_keys(s, {"vdd_v", "branch_currents_a"});
            plan.vdd_v = required_number(s, "vdd_v");
            if (const SectionEntry* e = find_entry(s, "branch_currents_a")) {
                plan.branch_currents_a =
                    detail::parse_number_list(e->value, e->line, "branch_currents_a");
                for (double i : plan.branch_currents_a) {
                    if (!(i > 0.0)) {
                        std::ostringstream os;
                        os << "line " << e->line << ": branch currents must be positive, got "
                           << i;
                        throw SchemaError(os.str());
                    }
                }
            }
        } else if (s.name == "feedback") {
            if (saw_feedback) {
                std::ostringstream os;
                os << "line " << s.line << ": duplicate [feedback] section";
                throw SchemaError(os.str());
            }
            saw_feedback = true;
            reject_unknown_keys(s, {"r1_ohm", "r2_ohm"});
            plan.r1_ohm = required_number(s, "r1_ohm");
            plan.r2_ohm = required_number(s, "r2_ohm");
            if (!(plan.r1_ohm > 0.0) || !(plan.r2_ohm > 0.0)) {
                std::ostringstream os;
                os << "line " << s.line << ": feedback resistors must be positive";
                throw SchemaError(os.str());
            }
        } else {
            std::ostringstream os;
            os << "line " << s.line << ": unknown section [" << s.name << "]";
            throw SchemaError(os.str());
        }
    }
    return plan;
}

ErrorReport error_report(const std::vector<ErrorPoint>& expected,
                         const std::vector<ErrorPoint>& actual,
                         const std::vector<double>& id_a,
                         const std::vector<double>& l_m) {
    if (expected.size() != actual.size())
        throw std::invalid_argument("expected and actual point counts differ");
    if (expected.size() < 3)
        throw std::invalid_argument("need at least three transistors to correlate errors");
    if (!id_a.empty() && id_a.size() != expected.size())
        throw std::invalid_argument("id series length does not match the point count");
    if (!l_m.empty() && l_m.size() != expected.size())
        throw std::invalid_argument("length series does not match the point count");

    ErrorReport rep;
    std::vector<double> vds_err, ip_err, ia_err;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const ErrorPoint& e = expected[i];
        const ErrorPoint& a = actual[i];
        if (e.name != a.name) {
            std::ostringstream os;
            os << "point " << i << " names differ: '" << e.name << "' vs '" << a.name << "'";
            throw std::invalid_argument(os.str());
        }
        ErrorRow row;
        row.name = e.name;
        row.expected_vds_v = e.vds_v;
        row.actual_vds_v = a.vds_v;
        row.vds_err_pct = percent_error(e.vds_v, a.vds_v);
        row.expected_ip_a = e.ip_a;
        row.actual_ip_a = a.ip_a;
        row.ip_err_pct = percent_error(e.ip_a, a.ip_a);
        row.expected_ia_a = e.ia_a;
        row.actual_ia_a = a.ia_a;
        row.ia_err_pct = percent_error(e.ia_a, a.ia_a);
        vds_err.push_back(row.vds_err_pct);
        ip_err.push_back(row.ip_err_pct);
        ia_err.push_back(row.ia_err_pct);
        rep.rows.push_back(std::move(row));
    }
    rep.ip_vs_vds = pearson(ip_err, vds_err);
    rep.ia_vs_vds = pearson(ia_err, vds_err);
    if (!id_a.empty()) rep.id_vs_vds = pearson(id_a, vds_err);
    if (!l_m.empty()) rep.l_vs_vds = pearson(l_m, vds_err);
    return rep;
}

namespace {

template <class E>
[[noreturn]] void rethrow_named(const std::string& name, const E& e) {
    throw E(name + ": " + e.what());
}

const TransistorReport* find_report(const std::vector<TransistorReport>& ts,
                                    const std::string& name) {
    for (const auto& t : ts) {
        if (t.plan.name == name) return &t;
    }
    return nullptr;
}

} // namespace

DesignReport size_cfia(const CoefficientBundle& b, const DesignPlan& plan,
                       const std::vector<ErrorPoint>& measured) {
    DesignReport rep;
    for (const PlanTransistor& t : plan.transistors) {
        SizingRequest req;
        req.kind = t.kind;
        req.target_id_a = t.id_a;
        req.vgs_v = t.vgs_v;
        req.vds_v = t.vds_v;
        req.l_m = t.l_m;
        TransistorReport tr;
        tr.plan = t;
        try {
            tr.sizing = predict_width(b, req);
        } catch (const NoBracket& e) {
            rethrow_named(t.name, e);
        } catch (const NotSaturated& e) {
            rethrow_named(t.name, e);
        } catch (const NonConvergence& e) {
            rethrow_named(t.name, e);
        } catch (const OutOfDomain& e) {
            rethrow_named(t.name, e);
        }
        const double vov = overdrive(t.kind, t.vgs_v, tr.sizing.vth_v);
        tr.gm_s = 2.0 * tr.sizing.split.ia_a / vov;
        rep.transistors.push_back(std::move(tr));
    }

    double branch_sum = 0.0;
    for (double i : plan.branch_currents_a) branch_sum += i;
    rep.power_w = plan.vdd_v * branch_sum;

    const bool feedback = plan.r1_ohm > 0.0;
    if (feedback) rep.gain_simplified_vv = gain_simplified(plan.r1_ohm, plan.r2_ohm);

    // Role lookup by conventional transistor names: m1/m2 are the two gain
    // devices, m5/m6/m7 the mirror loads of the three internal nodes.
    const TransistorReport* m1 = find_report(rep.transistors, "m1");
    const TransistorReport* m2 = find_report(rep.transistors, "m2");
    const TransistorReport* m5 = find_report(rep.transistors, "m5");
    const TransistorReport* m6 = find_report(rep.transistors, "m6");
    const TransistorReport* m7 = find_report(rep.transistors, "m7");

    const double ratio = 10.0;
    if (m7 && feedback)
        rep.constraints.push_back(
            make_row("rout3_gg_r2", m7->sizing.ro_ohm, plan.r2_ohm, ratio));
    if (m1 && m6)
        rep.constraints.push_back(
            make_row("ro1_gg_rout2", m1->sizing.ro_ohm, m6->sizing.ro_ohm, ratio));
    if (m2 && m6)
        rep.constraints.push_back(
            make_row("ro2_gg_rout2", m2->sizing.ro_ohm, m6->sizing.ro_ohm, ratio));
    if (m7 && feedback)
        rep.constraints.push_back(
            make_row("r2_ll_rout3", m7->sizing.ro_ohm, plan.r2_ohm, ratio));
    if (m1 && m6)
        rep.constraints.push_back(
            make_row("inv_gm1_ll_rout2", m6->sizing.ro_ohm, 1.0 / m1->gm_s, ratio));
    if (m1 && m5)
        rep.constraints.push_back(
            make_row("ro1_gg_rout1", m1->sizing.ro_ohm, m5->sizing.ro_ohm, ratio));
    if (m2 && m5)
        rep.constraints.push_back(
            make_row("ro2_gg_rout1", m2->sizing.ro_ohm, m5->sizing.ro_ohm, ratio));

    if (m1 && m2 && m5 && m6 && m7 && feedback) {
        SmallSignalParams p;
        p.gm1_s = m1->gm_s;
        p.gm2_s = m2->gm_s;
        p.gmb1_s = 0.0;
        p.ro1_ohm = m1->sizing.ro_ohm;
        p.ro2_ohm = m2->sizing.ro_ohm;
        p.rout1_ohm = m5->sizing.ro_ohm;
        p.rout2_ohm = m6->sizing.ro_ohm;
        p.rout3_ohm = m7->sizing.ro_ohm;
        p.r1_ohm = plan.r1_ohm;
        p.r2_ohm = plan.r2_ohm;
        rep.gain_full_vv = gain_full(p);
    }

    if (!measured.empty()) {
        if (measured.size() != plan.transistors.size())
            throw std::invalid_argument(
                "measured point count does not match the plan's transistor count");
        std::vector<ErrorPoint> expected, actual;
        std::vector<double> ids, lengths;
        for (const TransistorReport& tr : rep.transistors) {
            const ErrorPoint* m = nullptr;
            for (const ErrorPoint& cand : measured) {
                if (cand.name == tr.plan.name) {
                    m = &cand;
                    break;
                }
            }
            if (!m) {
                std::ostringstream os;
                os << "no measured point for transistor '" << tr.plan.name << "'";
                throw std::invalid_argument(os.str());
            }
            ErrorPoint e;
            e.name = tr.plan.name;
            e.vds_v = std::fabs(tr.plan.vds_v);
            e.ip_a = std::fabs(tr.sizing.split.ip_a);
            e.ia_a = std::fabs(tr.sizing.split.ia_a);
            expected.push_back(e);
            ErrorPoint a;
            a.name = m->name;
            a.vds_v = std::fabs(m->vds_v);
            a.ip_a = std::fabs(m->ip_a);
            a.ia_a = std::fabs(m->ia_a);
            actual.push_back(a);
            ids.push_back(tr.plan.id_a);
            lengths.push_back(tr.plan.l_m);
        }
        rep.errors = error_report(expected, actual, ids, lengths);
    }
    return rep;
}

} // namespace mosizer
