#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mosizer/bundle.hpp"
#include "mosizer/errors.hpp"

using namespace mosizer;

namespace {

const std::string kShipped = std::string(MOSIZER_ROOT) + "/bundles/paper-0p18um.mdl";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(bool(out));
    out << content;
}

std::string replace_first(std::string s, const std::string& from, const std::string& to) {
    const std::size_t pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

std::string set_section_theta(std::string s, const std::string& header,
                              const std::string& value) {
    const std::size_t sec = s.find(header);
    REQUIRE(sec != std::string::npos);
    const std::size_t key = s.find("theta = ", sec);
    REQUIRE(key != std::string::npos);
    const std::size_t eol = s.find('\n', key);
    REQUIRE(eol != std::string::npos);
    return s.replace(key, eol - key, "theta = " + value);
}

std::string drop_section(std::string s, const std::string& header) {
    const std::size_t pos = s.find(header);
    REQUIRE(pos != std::string::npos);
    std::size_t next = s.find("\n[", pos);
    if (next == std::string::npos)
        s.erase(pos);
    else
        s.erase(pos, next + 1 - pos);
    return s;
}

bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

} // namespace

TEST_CASE("shipped bundle loads with expected metadata and shape") {
    const CoefficientBundle b = load_bundle(kShipped);
    CHECK(b.meta.tech == "0.18um");
    CHECK(b.meta.vgs_v == 0.5);
    CHECK(b.meta.vds_v == 0.6);
    CHECK(b.meta.vsb_v == 0.0);
    for (DeviceKind kind : {DeviceKind::Nmos, DeviceKind::Pmos})
        for (const std::string& q : bundle_quantities()) CHECK(b.has_model(kind, q));

    CHECK(b.model(DeviceKind::Nmos, "vth_w").family == Family::F1);
    CHECK(b.model(DeviceKind::Nmos, "vth_w").input_unit == InputUnit::Micrometer);
    CHECK(b.model(DeviceKind::Nmos, "ro").family == Family::F7);
    CHECK(b.model(DeviceKind::Nmos, "ro").input_unit == InputUnit::Meter);
    CHECK(b.model(DeviceKind::Pmos, "vth_combo").family == Family::F6);
    CHECK_THROWS_AS(b.model(DeviceKind::Nmos, "bogus"), SchemaError);
}

TEST_CASE("threshold surface matches reference points") {
    const CoefficientBundle b = load_bundle(kShipped);

    // per-axis pieces first
    CHECK(eval_model(b.model(DeviceKind::Nmos, "vth_w"), 0.65e-6) ==
          doctest::Approx(0.4571839547767833).epsilon(1e-12));
    CHECK(eval_model(b.model(DeviceKind::Nmos, "vth_l"), 4e-6) ==
          doctest::Approx(0.30456332121544827).epsilon(1e-12));

    // combined surface at the reference operating points
    CHECK(eval_vth(b, DeviceKind::Nmos, 0.65e-6, 4e-6) ==
          doctest::Approx(0.35017347394573156).epsilon(1e-12));
    CHECK(eval_vth(b, DeviceKind::Nmos, 22.6e-6, 80e-6) ==
          doctest::Approx(0.35171632194050045).epsilon(1e-12));
    CHECK(eval_vth(b, DeviceKind::Pmos, 73.2e-6, 40e-6) ==
          doctest::Approx(-0.41224304662412836).epsilon(1e-12));
    CHECK(eval_vth(b, DeviceKind::Pmos, 119.2e-6, 25e-6) ==
          doctest::Approx(-0.4123427846521046).epsilon(1e-12));

    // engineering-level agreement with the nominal 0.35 / -0.41 values
    CHECK(std::fabs(eval_vth(b, DeviceKind::Nmos, 0.65e-6, 4e-6) - 0.350) < 1e-3);
    CHECK(std::fabs(eval_vth(b, DeviceKind::Pmos, 73.2e-6, 40e-6) + 0.411) < 2e-3);
}

TEST_CASE("pmos thresholds stay negative across the geometry window") {
    const CoefficientBundle b = load_bundle(kShipped);
    for (double w_um : {1.0, 10.0, 100.0, 400.0}) {
        for (double l_um : {1.0, 10.0, 40.0, 80.0}) {
            const double v = eval_vth(b, DeviceKind::Pmos, w_um * 1e-6, l_um * 1e-6);
            CHECK(v < 0.0);
            CHECK(std::fabs(v) > 0.2);
            CHECK(std::fabs(v) < 0.7);
        }
    }
}

TEST_CASE("gain-factor surface reproduces its calibration anchors") {
    const CoefficientBundle b = load_bundle(kShipped);
    CHECK(close_rel(eval_ucox(b, DeviceKind::Nmos, 0.65e-6, 4e-6), 324e-6, 1e-9));
    CHECK(close_rel(eval_ucox(b, DeviceKind::Nmos, 22.6e-6, 80e-6), 321e-6, 1e-9));
    CHECK(close_rel(eval_ucox(b, DeviceKind::Pmos, 73.2e-6, 40e-6), 84e-6, 1e-9));
    CHECK(close_rel(eval_ucox(b, DeviceKind::Pmos, 119.2e-6, 25e-6), 86.9e-6, 1e-9));

    // stored combiner coefficients agree with re-running the calibration
    const std::vector<double> nb =
        calibrate_combo(b, DeviceKind::Nmos, "ucox",
                        {{0.65e-6, 4e-6, 324e-6}, {22.6e-6, 80e-6, 321e-6}}, 101.06e-6);
    const std::vector<double>& stored = b.model(DeviceKind::Nmos, "ucox_combo").theta;
    REQUIRE(nb.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(nb[i] == doctest::Approx(stored[i]).epsilon(1e-14));

    const std::vector<double> pb =
        calibrate_combo(b, DeviceKind::Pmos, "ucox",
                        {{73.2e-6, 40e-6, 84e-6}, {119.2e-6, 25e-6, 86.9e-6}}, 26.07e-6);
    CHECK(pb[0] == doctest::Approx(26.07e-6));
    CHECK(pb[1] == doctest::Approx(0.6795).epsilon(2e-4));
    CHECK(pb[2] == doctest::Approx(-0.1053).epsilon(2e-3));
}

TEST_CASE("output-resistance lines match reference points") {
    const CoefficientBundle b = load_bundle(kShipped);
    CHECK(eval_ro(b, DeviceKind::Nmos, 4e-6) == doctest::Approx(14245600.0).epsilon(1e-12));
    CHECK(eval_ro(b, DeviceKind::Nmos, 80e-6) == doctest::Approx(120752000.0).epsilon(1e-12));
    CHECK(eval_ro(b, DeviceKind::Pmos, 40e-6) == doctest::Approx(324380000.0).epsilon(1e-12));
    CHECK(eval_ro(b, DeviceKind::Pmos, 25e-6) == doctest::Approx(223700000.0).epsilon(1e-12));

    // nominal values quoted to three digits
    CHECK(close_rel(eval_ro(b, DeviceKind::Nmos, 4e-6), 14.25e6, 1e-2));
    CHECK(close_rel(eval_ro(b, DeviceKind::Nmos, 80e-6), 120.8e6, 1e-2));
    CHECK(close_rel(eval_ro(b, DeviceKind::Pmos, 40e-6), 324.4e6, 1e-2));
    CHECK(close_rel(eval_ro(b, DeviceKind::Pmos, 25e-6), 223.7e6, 1e-2));
}

TEST_CASE("monotone trends across the geometry window") {
    const CoefficientBundle b = load_bundle(kShipped);

    for (DeviceKind kind : {DeviceKind::Nmos, DeviceKind::Pmos}) {
        double prev = eval_ro(b, kind, 0.5e-6);
        for (int i = 1; i <= 50; ++i) {
            const double l = (0.5 + i * (400.0 - 0.5) / 50.0) * 1e-6;
            const double r = eval_ro(b, kind, l);
            CHECK(r > prev);
            prev = r;
        }
    }

    // nmos threshold falls as channels get longer at fixed width
    double prev = eval_vth(b, DeviceKind::Nmos, 10e-6, 1e-6);
    for (int i = 1; i <= 20; ++i) {
        const double l = (1.0 + i * (80.0 - 1.0) / 20.0) * 1e-6;
        const double v = eval_vth(b, DeviceKind::Nmos, 10e-6, l);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("identity line gives back the raw input") {
    CoefficientBundle b = load_bundle(kShipped);
    ModelSpec ident;
    ident.family = Family::F7;
    ident.input_unit = InputUnit::Meter;
    ident.theta = {0.0, 1.0};
    b.set_model(DeviceKind::Nmos, "ro", ident);
    CHECK(eval_ro(b, DeviceKind::Nmos, 12.5e-6) == 12.5e-6);
}

TEST_CASE("calibration handles fixed coefficients and degenerate anchors") {
    const CoefficientBundle b = load_bundle(kShipped);

    // single anchor with the offset and second slope pinned
    const double target = eval_vth(b, DeviceKind::Nmos, 0.65e-6, 4e-6);
    const std::vector<double> beta =
        calibrate_combo(b, DeviceKind::Nmos, "vth", {{0.65e-6, 4e-6, target}}, -0.38164,
                        0.98848);
    CHECK(beta[0] == -0.38164);
    CHECK(beta[2] == 0.98848);
    CHECK(beta[1] == doctest::Approx(0.9422).epsilon(1e-9));

    // repeated anchor location cannot pin two slopes
    CHECK_THROWS_AS(calibrate_combo(b, DeviceKind::Nmos, "ucox",
                                    {{1e-6, 4e-6, 300e-6}, {1e-6, 4e-6, 310e-6}},
                                    101.06e-6),
                    RankDeficient);

    CHECK_THROWS_AS(calibrate_combo(b, DeviceKind::Nmos, "ro", {{1e-6, 1e-6, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(calibrate_combo(b, DeviceKind::Nmos, "ucox", {{1e-6, 1e-6, 1.0}}),
                    std::invalid_argument);
}

TEST_CASE("saving is canonical and round-trips byte for byte") {
    const CoefficientBundle b = load_bundle(kShipped);
    save_bundle(b, "tmp_roundtrip_a.mdl");
    CHECK(read_file("tmp_roundtrip_a.mdl") == read_file(kShipped));

    const CoefficientBundle again = load_bundle("tmp_roundtrip_a.mdl");
    save_bundle(again, "tmp_roundtrip_b.mdl");
    CHECK(read_file("tmp_roundtrip_b.mdl") == read_file("tmp_roundtrip_a.mdl"));
    std::remove("tmp_roundtrip_a.mdl");
    std::remove("tmp_roundtrip_b.mdl");
}

TEST_CASE("comments and spacing are tolerated on load") {
    std::string text = read_file(kShipped);
    text = "# generated file\n\n" + replace_first(text, "[meta]", "  [meta]  \n# inline note");
    write_file("tmp_spaced.mdl", text);
    const CoefficientBundle b = load_bundle("tmp_spaced.mdl");
    CHECK(b.meta.tech == "0.18um");
    std::remove("tmp_spaced.mdl");
}

TEST_CASE("structural problems raise parse errors") {
    CHECK_THROWS_AS(load_bundle("does_not_exist.mdl"), ParseError);

    write_file("tmp_bad.mdl", "key = 1\n");
    CHECK_THROWS_AS(load_bundle("tmp_bad.mdl"), ParseError);

    write_file("tmp_bad.mdl", "[meta\ntech = x\n");
    CHECK_THROWS_AS(load_bundle("tmp_bad.mdl"), ParseError);

    write_file("tmp_bad.mdl", "[meta]\njust words\n");
    CHECK_THROWS_AS(load_bundle("tmp_bad.mdl"), ParseError);

    const std::string base = read_file(kShipped);
    write_file("tmp_bad.mdl", replace_first(base, "vgs = 0.5", "vgs = zz"));
    try {
        load_bundle("tmp_bad.mdl");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("zz") != std::string::npos);
    }
    std::remove("tmp_bad.mdl");
}

TEST_CASE("schema problems raise schema errors") {
    const std::string base = read_file(kShipped);

    write_file("tmp_schema.mdl", drop_section(base, "[nmos.ro]"));
    try {
        load_bundle("tmp_schema.mdl");
        FAIL("expected a schema error");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("nmos.ro") != std::string::npos);
    }

    write_file("tmp_schema.mdl", replace_first(base, "[meta]\n", "[meta]\nbogus = 3\n"));
    CHECK_THROWS_AS(load_bundle("tmp_schema.mdl"), SchemaError);

    write_file("tmp_schema.mdl",
               base + "\n[nmos.bogus]\nfamily = F7\ninput_unit = m\ntheta = 1,2\n");
    CHECK_THROWS_AS(load_bundle("tmp_schema.mdl"), SchemaError);

    write_file("tmp_schema.mdl",
               base + "\n[nmos.ro]\nfamily = F7\ninput_unit = m\ntheta = 1,2\n");
    CHECK_THROWS_AS(load_bundle("tmp_schema.mdl"), SchemaError);

    write_file("tmp_schema.mdl", replace_first(base, "family = F1", "family = F9"));
    CHECK_THROWS_AS(load_bundle("tmp_schema.mdl"), SchemaError);

    write_file("tmp_schema.mdl", replace_first(base, "input_unit = um", "input_unit = nm"));
    CHECK_THROWS_AS(load_bundle("tmp_schema.mdl"), UnitError);

    // five-coefficient family handed four coefficients
    write_file("tmp_schema.mdl", set_section_theta(base, "[nmos.vth_w]", "0.1,0.2,0.3,0.4"));
    CHECK_THROWS_AS(load_bundle("tmp_schema.mdl"), SchemaError);

    // model section without its family line
    write_file("tmp_schema.mdl", replace_first(base, "family = F1\n", ""));
    CHECK_THROWS_AS(load_bundle("tmp_schema.mdl"), SchemaError);

    std::remove("tmp_schema.mdl");
}

TEST_CASE("set_model enforces coefficient counts") {
    CoefficientBundle b;
    ModelSpec s;
    s.family = Family::F4;
    s.input_unit = InputUnit::Micrometer;
    s.theta = {1.0, 2.0};
    CHECK_THROWS_AS(b.set_model(DeviceKind::Nmos, "ucox_l", s), SchemaError);
    s.theta = {1.0, 2.0, 3.0};
    CHECK_NOTHROW(b.set_model(DeviceKind::Nmos, "ucox_l", s));
}
