#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mosizer/bundle.hpp"
#include "mosizer/cfia.hpp"
#include "mosizer/errors.hpp"

using namespace mosizer;

namespace {

const std::string kShipped = std::string(MOSIZER_ROOT) + "/bundles/paper-0p18um.mdl";
const std::string kPlan = std::string(MOSIZER_ROOT) + "/plans/paper-cfia.plan";

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(bool(out));
    out << content;
}

SmallSignalParams nominal_params() {
    SmallSignalParams p;
    p.gm1_s = 1e-3;
    p.gm2_s = 1e-3;
    p.gmb1_s = 1e-4;
    p.ro1_ohm = 1e12;
    p.ro2_ohm = 1e12;
    p.rout1_ohm = 1e12;
    p.rout2_ohm = 1e7;
    p.rout3_ohm = 1e12;
    p.r1_ohm = 10.0;
    p.r2_ohm = 100.0;
    return p;
}

// Measured operating points of the reference design (bias bench data for the
// four sized devices), as magnitudes.
std::vector<ErrorPoint> bench_actuals() {
    return {
        {"m1", 1.08, 11e-9, 0.577e-6},
        {"m5", 0.092, 30e-9, 0.552e-6},
        {"m6", 0.618, 37e-9, 1.50e-6},
        {"m7", 0.161, 20e-9, 1.08e-6},
    };
}

} // namespace

TEST_CASE("parallel_resistance basics and huge legs") {
    CHECK(parallel_resistance(2e6, 2e6) == 1e6);
    CHECK(std::isfinite(parallel_resistance(1e300, 1e300)));
    CHECK(parallel_resistance(1e300, 1e300) == doctest::Approx(5e299).epsilon(1e-12));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(parallel_resistance(inf, 5.0) == 5.0);
    CHECK(parallel_resistance(5.0, inf) == 5.0);
    CHECK(parallel_resistance(3.0, 6.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("rg_current follows Ohm's law with sign") {
    CHECK(rg_current(1.0, 0.5, 1000.0) == 0.0005);
    CHECK(rg_current(0.7, 0.7, 1000.0) == 0.0);
    CHECK(rg_current(0.5, 1.0, 1000.0) == -0.0005);
    CHECK_THROWS_AS(rg_current(1.0, 0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rg_current(1.0, 0.5, -10.0), std::invalid_argument);
}

TEST_CASE("alpha is the rout2 || ro1 combination") {
    SmallSignalParams p = nominal_params();
    p.rout2_ohm = 2e6;
    p.ro1_ohm = 2e6;
    CHECK(alpha(p) == 1e6);

    p.rout2_ohm = 1e6;
    p.ro1_ohm = 1e18;
    CHECK(alpha(p) == doctest::Approx(1e6).epsilon(1e-6));

    p.rout2_ohm = 1.0;
    p.ro1_ohm = 1e12;
    CHECK(alpha(p) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("beta_factor collapses to the dominant loop terms") {
    SmallSignalParams p;
    p.gm1_s = 1e-4;
    p.gm2_s = 1e-4;
    p.ro1_ohm = 1e15;
    p.ro2_ohm = 1e15;
    p.rout1_ohm = 1e15;
    p.rout2_ohm = 1e6;
    p.r1_ohm = 1e4;
    p.r2_ohm = 1e5;
    const double approx = 1.0 / p.r1_ohm + p.rout2_ohm * p.gm1_s * p.gm2_s;
    CHECK(std::fabs(beta_factor(p) - approx) / approx < 0.01);
}

TEST_CASE("beta_factor with zero transconductance is the plain reciprocal sum") {
    SmallSignalParams p;
    p.gm1_s = 0.0;
    p.gm2_s = 0.0;
    p.ro1_ohm = 3e6;
    p.ro2_ohm = 7e6;
    p.rout1_ohm = 9e6;
    p.rout2_ohm = 2e6;
    p.r1_ohm = 1e4;
    p.r2_ohm = 1e5;
    const double a = 1.0 / (1.0 / p.rout2_ohm + 1.0 / p.ro1_ohm);
    const double expect =
        1.0 / p.r1_ohm + (a / p.rout2_ohm) * (1.0 / p.ro1_ohm) + 1.0 / p.ro2_ohm +
        1.0 / p.rout1_ohm;
    CHECK(beta_factor(p) == expect);
}

TEST_CASE("beta_factor r1 sensitivity is exactly the single-term difference") {
    SmallSignalParams p;
    p.gm1_s = 0.0;
    p.gm2_s = 0.0;
    p.ro1_ohm = 1e300;
    p.ro2_ohm = 1e300;
    p.rout1_ohm = 1e300;
    p.rout2_ohm = 1e300;
    p.r1_ohm = 1024.0;
    p.r2_ohm = 1e5;
    const double b1 = beta_factor(p);
    p.r1_ohm = 2048.0;
    const double b2 = beta_factor(p);
    CHECK(b1 - b2 == 1.0 / 1024.0 - 1.0 / 2048.0);
}

TEST_CASE("gain_full approaches -r2/r1 when the loop dominates") {
    const SmallSignalParams p = nominal_params();
    const double g = gain_full(p);
    CHECK(std::fabs(g - (-10.0)) / 10.0 < 0.05);
    CHECK(g == doctest::Approx(-9.744).epsilon(1e-3));
}

TEST_CASE("gain_full is dead without forward transconductance") {
    SmallSignalParams p = nominal_params();
    p.gm1_s = 0.0;
    CHECK(std::fabs(gain_full(p)) < 1e-3 * p.r2_ohm / p.r1_ohm);
}

TEST_CASE("gain_full vanishes with a shorted feedback output") {
    SmallSignalParams p = nominal_params();
    p.r2_ohm = 0.0;
    CHECK(gain_full(p) == 0.0);
}

TEST_CASE("gain_full rejects non-positive resistances") {
    SmallSignalParams p = nominal_params();
    p.ro1_ohm = 0.0;
    CHECK_THROWS_AS(gain_full(p), std::invalid_argument);
    p = nominal_params();
    p.r1_ohm = -5.0;
    CHECK_THROWS_AS(gain_full(p), std::invalid_argument);
}

TEST_CASE("gain_full tracks the ideal divider over random dominated loops") {
    std::mt19937 rng(20260817u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto logdraw = [&](double lo, double hi) { return std::pow(10.0, lo + (hi - lo) * u(rng)); };
    for (int i = 0; i < 200; ++i) {
        SmallSignalParams p;
        p.gm1_s = logdraw(-3.0, -2.5);
        p.gm2_s = logdraw(-3.0, -2.5);
        p.rout2_ohm = logdraw(8.0, 9.0);
        p.r1_ohm = logdraw(0.0, 1.0);
        p.r2_ohm = p.r1_ohm * logdraw(0.3, 1.3);
        p.ro1_ohm = p.rout2_ohm * logdraw(3.0, 4.0);
        p.ro2_ohm = p.rout2_ohm * logdraw(3.0, 4.0);
        p.rout3_ohm = p.r2_ohm * logdraw(3.0, 4.0);
        p.rout1_ohm = logdraw(12.0, 13.0);
        const double ideal = -p.r2_ohm / p.r1_ohm;
        const double g = gain_full(p);
        INFO("draw ", i, ": gain ", g, " ideal ", ideal);
        CHECK(g < 0.0);
        CHECK(std::fabs(g - ideal) / std::fabs(ideal) < 0.05);
    }
}

TEST_CASE("doubling r2 doubles the gain magnitude when rout3 dominates") {
    SmallSignalParams p = nominal_params();
    p.rout2_ohm = 1e9;
    p.ro1_ohm = 1e13;
    p.ro2_ohm = 1e13;
    const double g1 = gain_full(p);
    p.r2_ohm *= 2.0;
    const double g2 = gain_full(p);
    CHECK(std::fabs(g2 / g1 - 2.0) < 0.01);
}

TEST_CASE("gain_simplified is the resistor ratio") {
    CHECK(gain_simplified(10e3, 100e3) == -10.0);
    CHECK(gain_simplified(4.7e3, 4.7e3) == -1.0);
    CHECK(gain_simplified(10e3, 0.0) == 0.0);
    CHECK_THROWS_AS(gain_simplified(0.0, 1e3), std::invalid_argument);
    CHECK_THROWS_AS(gain_simplified(-1e3, 1e3), std::invalid_argument);
    CHECK_THROWS_AS(gain_simplified(1e3, -1.0), std::invalid_argument);
}

TEST_CASE("rout4 limits") {
    SmallSignalParams p = nominal_params();
    p.gm1_s = 1e-3;
    p.gmb1_s = 1e-15;
    p.ro1_ohm = 1e15;
    p.rout2_ohm = 1e3;
    CHECK(rout4(p) == doctest::Approx(1.0 / p.gm1_s).epsilon(1e-6));

    p.gmb1_s = p.gm1_s;
    p.rout2_ohm = 1.0;
    CHECK(rout4(p) == doctest::Approx(1.0 / (2.0 * p.gm1_s)).epsilon(1e-6));

    p.gm1_s = 1e-3;
    p.gmb1_s = 5e-4;
    p.ro1_ohm = 1e6;
    p.rout2_ohm = 1e6;
    const double leg = 1.0 / (p.gm1_s + p.gmb1_s + 1.0 / p.ro1_ohm);
    CHECK(rout4(p) == doctest::Approx(2.0 * leg).epsilon(1e-15));
}

TEST_CASE("check_constraints evaluates every dominance rule") {
    SmallSignalParams p = nominal_params();
    const auto rows = check_constraints(p);
    REQUIRE(rows.size() == 7);
    const char* names[] = {"rout3_gg_r2",      "ro1_gg_rout2", "ro2_gg_rout2",
                           "r2_ll_rout3",      "inv_gm1_ll_rout2", "ro1_gg_rout1",
                           "ro2_gg_rout1"};
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].name == names[i]);

    // rout3 = 1e12 against r2 = 100: satisfied by a mile.
    CHECK(rows[0].satisfied);
    CHECK(rows[0].lhs == p.rout3_ohm);
    CHECK(rows[0].rhs == p.r2_ohm);
}

TEST_CASE("check_constraints flags a 5x margin at ratio 10") {
    SmallSignalParams p = nominal_params();
    p.rout2_ohm = 1e6;
    p.ro1_ohm = 5e6;
    const auto rows = check_constraints(p);
    CHECK(rows[1].name == "ro1_gg_rout2");
    CHECK_FALSE(rows[1].satisfied);
    CHECK(rows[1].lhs == 5e6);
    CHECK(rows[1].rhs == 1e6);
}

TEST_CASE("check_constraints with all terms equal violates everything") {
    SmallSignalParams p;
    p.gm1_s = 1.0;
    p.gm2_s = 1.0;
    p.gmb1_s = 1.0;
    p.ro1_ohm = 1.0;
    p.ro2_ohm = 1.0;
    p.rout1_ohm = 1.0;
    p.rout2_ohm = 1.0;
    p.rout3_ohm = 1.0;
    p.r1_ohm = 1.0;
    p.r2_ohm = 1.0;
    for (const auto& row : check_constraints(p)) {
        INFO("row ", row.name);
        CHECK_FALSE(row.satisfied);
    }
}

TEST_CASE("check_constraints is monotone in each lhs") {
    SmallSignalParams p = nominal_params();
    const auto before = check_constraints(p);
    SmallSignalParams bigger = p;
    bigger.ro1_ohm *= 8.0;
    bigger.ro2_ohm *= 8.0;
    bigger.rout3_ohm *= 8.0;
    bigger.rout2_ohm *= 8.0;
    // rout2 sits on the lhs of inv_gm1_ll_rout2 and on the rhs of the ro1/ro2
    // rows; those got scaled up in lockstep so no satisfied row may flip.
    bigger.gm1_s *= 8.0;
    const auto after = check_constraints(bigger);
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
        if (before[i].satisfied) CHECK(after[i].satisfied);
    }
    CHECK_THROWS_AS(check_constraints(p, 1.0), std::invalid_argument);
}

TEST_CASE("load_plan reads the shipped design targets") {
    const DesignPlan plan = load_plan(kPlan);
    REQUIRE(plan.transistors.size() == 4);
    CHECK(plan.transistors[0].name == "m1");
    CHECK(plan.transistors[0].kind == DeviceKind::Pmos);
    CHECK(plan.transistors[0].id_a == 0.6e-6);
    CHECK(plan.transistors[0].vgs_v == -0.5);
    CHECK(plan.transistors[0].vds_v == -0.6);
    CHECK(plan.transistors[0].l_m == 40e-6);
    CHECK(plan.transistors[1].name == "m5");
    CHECK(plan.transistors[1].kind == DeviceKind::Nmos);
    CHECK(plan.transistors[1].l_m == 4e-6);
    CHECK(plan.transistors[2].name == "m6");
    CHECK(plan.transistors[2].id_a == 1.6e-6);
    CHECK(plan.transistors[3].name == "m7");
    CHECK(plan.transistors[3].l_m == 80e-6);
    CHECK(plan.vdd_v == 1.8);
    REQUIRE(plan.branch_currents_a.size() == 2);
    CHECK(plan.branch_currents_a[0] == 1.6e-6);
    CHECK(plan.branch_currents_a[1] == 1.6e-6);
    CHECK(plan.r1_ohm == 10e3);
    CHECK(plan.r2_ohm == 100e3);
}

TEST_CASE("load_plan rejects malformed plans") {
    const std::string good =
        "[transistor.mx]\nkind = nmos\nid_a = 1e-6\nvgs_v = 0.5\nvds_v = 0.6\nl_m = 4e-6\n";

    write_file("tmp_plan_bad_section.plan", good + "[mystery]\nkey = 1\n");
    CHECK_THROWS_AS(load_plan("tmp_plan_bad_section.plan"), SchemaError);
    std::remove("tmp_plan_bad_section.plan");

    write_file("tmp_plan_missing.plan",
               "[transistor.mx]\nkind = nmos\nid_a = 1e-6\nvgs_v = 0.5\nvds_v = 0.6\n");
    CHECK_THROWS_WITH_AS(load_plan("tmp_plan_missing.plan"),
                         doctest::Contains("missing l_m"), SchemaError);
    std::remove("tmp_plan_missing.plan");

    write_file("tmp_plan_dup.plan", good + good);
    CHECK_THROWS_WITH_AS(load_plan("tmp_plan_dup.plan"),
                         doctest::Contains("duplicate transistor"), SchemaError);
    std::remove("tmp_plan_dup.plan");

    write_file("tmp_plan_kind.plan",
               "[transistor.mx]\nkind = npn\nid_a = 1e-6\nvgs_v = 0.5\nvds_v = 0.6\nl_m = 4e-6\n");
    CHECK_THROWS_AS(load_plan("tmp_plan_kind.plan"), SchemaError);
    std::remove("tmp_plan_kind.plan");

    write_file("tmp_plan_id.plan",
               "[transistor.mx]\nkind = nmos\nid_a = 0\nvgs_v = 0.5\nvds_v = 0.6\nl_m = 4e-6\n");
    CHECK_THROWS_WITH_AS(load_plan("tmp_plan_id.plan"),
                         doctest::Contains("positive id_a"), SchemaError);
    std::remove("tmp_plan_id.plan");

    write_file("tmp_plan_branch.plan",
               good + "[supply]\nvdd_v = 1.8\nbranch_currents_a = 1e-6,-1e-6\n");
    CHECK_THROWS_WITH_AS(load_plan("tmp_plan_branch.plan"),
                         doctest::Contains("branch currents"), SchemaError);
    std::remove("tmp_plan_branch.plan");

    write_file("tmp_plan_key.plan", good + "[feedback]\nr1_ohm = 1e4\nr2_ohm = 1e5\nr3_ohm = 1\n");
    CHECK_THROWS_WITH_AS(load_plan("tmp_plan_key.plan"),
                         doctest::Contains("unknown key"), SchemaError);
    std::remove("tmp_plan_key.plan");

    write_file("tmp_plan_number.plan",
               "[transistor.mx]\nkind = nmos\nid_a = abc\nvgs_v = 0.5\nvds_v = 0.6\nl_m = 4e-6\n");
    CHECK_THROWS_AS(load_plan("tmp_plan_number.plan"), ParseError);
    std::remove("tmp_plan_number.plan");

    write_file("tmp_plan_noeq.plan", "[transistor.mx]\nkind nmos\n");
    CHECK_THROWS_AS(load_plan("tmp_plan_noeq.plan"), ParseError);
    std::remove("tmp_plan_noeq.plan");

    CHECK_THROWS_AS(load_plan("no_such_file.plan"), ParseError);
}

TEST_CASE("size_cfia reproduces the reference widths and power") {
    const CoefficientBundle b = load_bundle(kShipped);
    const DesignPlan plan = load_plan(kPlan);
    const DesignReport rep = size_cfia(b, plan);

    REQUIRE(rep.transistors.size() == 4);
    const double reference_um[] = {73.2, 0.650, 119.2, 22.6};
    const double frozen_m[] = {73.955612e-6, 0.59353143413329867e-6, 119.601993e-6,
                               22.585247e-6};
    for (int i = 0; i < 4; ++i) {
        const double w = rep.transistors[i].sizing.w_m;
        INFO("transistor ", rep.transistors[i].plan.name, " width ", w);
        CHECK(std::fabs(w - reference_um[i] * 1e-6) / (reference_um[i] * 1e-6) < 0.10);
        CHECK(w == doctest::Approx(frozen_m[i]).epsilon(1e-5));
        CHECK(rep.transistors[i].gm_s > 0.0);
    }

    CHECK(rep.power_w == 5.76e-6);
    REQUIRE(rep.gain_simplified_vv.has_value());
    CHECK(*rep.gain_simplified_vv == -10.0);
    // No second-stage device in the plan, so the full-loop gain is undefined.
    CHECK_FALSE(rep.gain_full_vv.has_value());
    CHECK_FALSE(rep.errors.has_value());

    const char* names[] = {"rout3_gg_r2", "ro1_gg_rout2", "r2_ll_rout3",
                           "inv_gm1_ll_rout2", "ro1_gg_rout1"};
    const bool flags[] = {true, false, true, true, true};
    REQUIRE(rep.constraints.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(rep.constraints[i].name == names[i]);
        INFO("row ", names[i], " lhs ", rep.constraints[i].lhs, " rhs ", rep.constraints[i].rhs);
        CHECK(rep.constraints[i].satisfied == flags[i]);
    }
}

TEST_CASE("size_cfia with a full five-device loop reports gain_full") {
    const CoefficientBundle b = load_bundle(kShipped);
    DesignPlan plan = load_plan(kPlan);
    PlanTransistor m2;
    m2.name = "m2";
    m2.kind = DeviceKind::Nmos;
    m2.id_a = 1.6e-6;
    m2.vgs_v = 0.5;
    m2.vds_v = 0.6;
    m2.l_m = 10e-6;
    plan.transistors.push_back(m2);
    const DesignReport rep = size_cfia(b, plan);
    REQUIRE(rep.gain_full_vv.has_value());
    CHECK(std::isfinite(*rep.gain_full_vv));
    CHECK(rep.constraints.size() == 7);
}

TEST_CASE("size_cfia on an empty plan is an empty report") {
    const CoefficientBundle b = load_bundle(kShipped);
    const DesignReport rep = size_cfia(b, DesignPlan{});
    CHECK(rep.transistors.empty());
    CHECK(rep.power_w == 0.0);
    CHECK_FALSE(rep.gain_simplified_vv.has_value());
    CHECK_FALSE(rep.gain_full_vv.has_value());
    CHECK(rep.constraints.empty());
    CHECK_FALSE(rep.errors.has_value());
}

TEST_CASE("size_cfia annotates solver errors with the transistor name") {
    const CoefficientBundle b = load_bundle(kShipped);
    DesignPlan plan;
    PlanTransistor t;
    t.name = "mx";
    t.kind = DeviceKind::Nmos;
    t.id_a = 1.0;
    t.vgs_v = 0.5;
    t.vds_v = 0.6;
    t.l_m = 4e-6;
    plan.transistors.push_back(t);
    CHECK_THROWS_WITH_AS(size_cfia(b, plan), doctest::Contains("mx:"), NoBracket);
}

TEST_CASE("size_cfia attaches the measured-error table") {
    const CoefficientBundle b = load_bundle(kShipped);
    const DesignPlan plan = load_plan(kPlan);
    const DesignReport rep = size_cfia(b, plan, bench_actuals());
    REQUIRE(rep.errors.has_value());
    const ErrorReport& er = *rep.errors;
    REQUIRE(er.rows.size() == 4);

    const double vds_err[] = {80.0, 84.0 + 2.0 / 3.0, 3.0, 73.0 + 1.0 / 6.0};
    for (int i = 0; i < 4; ++i) {
        INFO("row ", er.rows[i].name);
        CHECK(er.rows[i].expected_vds_v == 0.6);
        CHECK(er.rows[i].vds_err_pct == doctest::Approx(vds_err[i]).epsilon(1e-9));
    }

    REQUIRE(er.id_vs_vds.has_value());
    CHECK(er.id_vs_vds->r == doctest::Approx(-0.954865).epsilon(1e-4));
    CHECK(er.id_vs_vds->p_two_sided == doctest::Approx(0.045135).epsilon(1e-3));
    REQUIRE(er.l_vs_vds.has_value());
    CHECK(std::fabs(er.l_vs_vds->r) <= 1.0);
    CHECK(std::fabs(er.ip_vs_vds.r) <= 1.0);
    CHECK(std::fabs(er.ia_vs_vds.r) <= 1.0);

    // Bench currents never reproduce the solved split exactly.
    for (const auto& row : er.rows) {
        CHECK(row.ip_err_pct >= 0.0);
        CHECK(row.ia_err_pct >= 0.0);
    }
}

TEST_CASE("size_cfia validates the measured set") {
    const CoefficientBundle b = load_bundle(kShipped);
    const DesignPlan plan = load_plan(kPlan);
    auto pts = bench_actuals();
    pts.pop_back();
    CHECK_THROWS_AS(size_cfia(b, plan, pts), std::invalid_argument);
    pts = bench_actuals();
    pts[2].name = "m9";
    CHECK_THROWS_AS(size_cfia(b, plan, pts), std::invalid_argument);
}

TEST_CASE("error_report reproduces the bias-error table") {
    std::vector<ErrorPoint> expected = {
        {"m1", 0.6, 14e-9, 0.586e-6},
        {"m5", 0.6, 30e-9, 0.570e-6},
        {"m6", 0.6, 39e-9, 1.56e-6},
        {"m7", 0.6, 18e-9, 0.981e-6},
    };
    const std::vector<double> id = {0.6e-6, 0.6e-6, 1.6e-6, 1.0e-6};
    const std::vector<double> l = {40e-6, 4e-6, 25e-6, 80e-6};
    const ErrorReport er = error_report(expected, bench_actuals(), id, l);

    REQUIRE(er.rows.size() == 4);
    CHECK(er.rows[0].vds_err_pct == doctest::Approx(80.0).epsilon(1e-12));
    CHECK(er.rows[1].vds_err_pct == doctest::Approx(84.0 + 2.0 / 3.0).epsilon(1e-12));
    CHECK(er.rows[2].vds_err_pct == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(er.rows[3].vds_err_pct == doctest::Approx(73.0 + 1.0 / 6.0).epsilon(1e-12));

    CHECK(er.rows[0].ip_err_pct == doctest::Approx(100.0 * 3.0 / 14.0).epsilon(1e-12));
    CHECK(er.rows[1].ip_err_pct == 0.0);
    CHECK(er.rows[2].ip_err_pct == doctest::Approx(100.0 * 2.0 / 39.0).epsilon(1e-12));
    CHECK(er.rows[3].ip_err_pct == doctest::Approx(100.0 * 2.0 / 18.0).epsilon(1e-12));

    CHECK(er.rows[0].ia_err_pct == doctest::Approx(100.0 * 0.009 / 0.586).epsilon(1e-9));
    CHECK(er.rows[3].ia_err_pct == doctest::Approx(100.0 * 0.099 / 0.981).epsilon(1e-9));

    REQUIRE(er.id_vs_vds.has_value());
    CHECK(er.id_vs_vds->r == doctest::Approx(-0.954865).epsilon(1e-4));
    CHECK(er.id_vs_vds->p_two_sided == doctest::Approx(0.045135).epsilon(1e-3));
    CHECK(er.id_vs_vds->n == 4);
    REQUIRE(er.l_vs_vds.has_value());
    CHECK(er.l_vs_vds->r > -1.0);
    CHECK(er.l_vs_vds->r < 1.0);
}

TEST_CASE("error_report without extra series skips those correlations") {
    std::vector<ErrorPoint> expected = {
        {"a", 0.6, 14e-9, 0.586e-6},
        {"b", 0.6, 30e-9, 0.570e-6},
        {"c", 0.6, 39e-9, 1.56e-6},
    };
    std::vector<ErrorPoint> actual = {
        {"a", 0.5, 11e-9, 0.6e-6},
        {"b", 0.4, 33e-9, 0.5e-6},
        {"c", 0.3, 35e-9, 1.4e-6},
    };
    const ErrorReport er = error_report(expected, actual);
    CHECK_FALSE(er.id_vs_vds.has_value());
    CHECK_FALSE(er.l_vs_vds.has_value());
    CHECK(er.ip_vs_vds.n == 3);
}

TEST_CASE("error_report input validation") {
    std::vector<ErrorPoint> three = {
        {"a", 0.6, 1e-9, 1e-6},
        {"b", 0.6, 2e-9, 2e-6},
        {"c", 0.6, 3e-9, 3e-6},
    };
    std::vector<ErrorPoint> two(three.begin(), three.begin() + 2);
    CHECK_THROWS_AS(error_report(three, two), std::invalid_argument);
    CHECK_THROWS_AS(error_report(two, two), std::invalid_argument);

    auto renamed = three;
    renamed[1].name = "z";
    CHECK_THROWS_AS(error_report(three, renamed), std::invalid_argument);

    CHECK_THROWS_AS(error_report(three, three, {1.0, 2.0}, {}), std::invalid_argument);
    CHECK_THROWS_AS(error_report(three, three, {}, {1.0}), std::invalid_argument);
}

TEST_CASE("error_report on identical data degenerates") {
    std::vector<ErrorPoint> pts = {
        {"a", 0.6, 14e-9, 0.586e-6},
        {"b", 0.6, 30e-9, 0.570e-6},
        {"c", 0.6, 39e-9, 1.56e-6},
        {"d", 0.6, 18e-9, 0.981e-6},
    };
    CHECK_THROWS_AS(error_report(pts, pts), DegenerateSeries);
}
