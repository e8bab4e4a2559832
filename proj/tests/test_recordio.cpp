#include "snstf/recordio.hpp"

#include "fixture_path.hpp"

#include <doctest.h>

#include <string>

using namespace snstf;

TEST_CASE("ini parsing") {
    const auto doc = parse_ini("# comment\n[a]\nx = 1\ny = two\n\n[b]\nx = 3\n", "t");
    REQUIRE(doc.sections.size() == 2);
    CHECK(doc.find("a") != nullptr);
    CHECK(doc.find("missing") == nullptr);
    CHECK(doc.find("a")->entries[1].value == "two");
    CHECK(doc.find("b")->entries[0].line == 7);

    CHECK_THROWS_AS(parse_ini("x = 1\n", "t"), ParseError);         // before section
    CHECK_THROWS_AS(parse_ini("[a]\nx = 1\nx = 2\n", "t"), ParseError);  // dup key
    CHECK_THROWS_AS(parse_ini("[a]\n[a]\n", "t"), ParseError);      // dup section
    CHECK_THROWS_AS(parse_ini("[a]\nnot a pair\n", "t"), ParseError);
    CHECK_THROWS_AS(parse_ini("[]\n", "t"), ParseError);
}

TEST_CASE("parse errors carry file and line") {
    try {
        parse_ini("[a]\nkey_without_value\n", "conf.ini");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("conf.ini:2:") != std::string::npos);
    }
}

TEST_CASE("record files round trip byte for byte") {
    for (const char* name : {"1002km.rec", "202km_short.rec", "499km.rec"}) {
        const std::string text = read_file(fixture_path(name));
        const auto rf = parse_record_file(text, name);
        CHECK(serialize_record(rf) == text);
    }
}

TEST_CASE("record validation and unknown content") {
    const std::string base = read_file(fixture_path("952km.rec"));

    SUBCASE("unknown key is rejected with location") {
        const std::string text = base + "\n[aopp2]\nz = 1\n";
        CHECK_THROWS_AS(parse_record_file(text, "t"), ParseError);
    }
    SUBCASE("unknown key inside a known section") {
        std::string text = base;
        text.replace(text.find("n_total"), 7, "m_total");
        CHECK_THROWS_WITH_AS(parse_record_file(text, "t"),
                             doctest::Contains("unknown key 'm_total'"), ParseError);
    }
    SUBCASE("missing record section") {
        CHECK_THROWS_AS(parse_record_file("[source]\nmu_x = 0.1\n", "t"), ParseError);
    }
    SUBCASE("non-numeric value") {
        std::string text = base;
        const auto pos = text.find("ds_deg = ");
        text.replace(pos, text.find('\n', pos) - pos, "ds_deg = wide");
        CHECK_THROWS_AS(parse_record_file(text, "t"), ParseError);
    }
}

TEST_CASE("full precision formatting") {
    CHECK(format_full(0.0) == "0");
    CHECK(format_full(10.0) == "10");
    CHECK(format_full(-3.0) == "-3");
    CHECK(format_full(0.08) == "0.08");
    CHECK(format_full(351e6) == "351000000");
    // shortest representation that round trips
    CHECK(std::stod(format_full(9.53e-12)) == 9.53e-12);
    CHECK(std::stod(format_full(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("digest is stable and content sensitive") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    const auto a = fnv1a_hex("abc");
    CHECK(a == fnv1a_hex("abc"));
    CHECK(a != fnv1a_hex("abd"));
    CHECK(a.size() == 16);
}

TEST_CASE("csv emission") {
    const auto csv = to_csv({"a", "b"}, {{"1", "2"}, {"3", "4"}});
    CHECK(csv == "a,b\n1,2\n3,4\n");
    CHECK_THROWS_AS(to_csv({"a"}, {{"1", "2"}}), std::invalid_argument);
}

TEST_CASE("sim config parsing") {
    const std::string text =
        "[source]\nmu_x = 0.1\nmu_y = 0.5\np_v = 0.5\np_x = 0.3\np_y = 0.2\n"
        "[link]\natten_ac_db = 12\natten_bc_db = 13\n"
        "[sim]\nn_total = 1000\nseed = 7\nds_deg = 12\n";
    const auto cfg = parse_sim_config(text, "t");
    CHECK(cfg.src.mu_x == 0.1);
    CHECK(cfg.link.atten_bc_db == 13.0);
    CHECK(cfg.n_total == 1000);
    CHECK(cfg.seed == 7);
    CHECK(cfg.ds_deg == 12.0);
    // untouched keys keep their defaults
    CHECK(cfg.link.det_eff_1 == 0.6);
    CHECK(cfg.phase_noise_sigma_deg == 4.3);

    CHECK_THROWS_AS(parse_sim_config("[link]\nloss = 3\n", "t"), ParseError);
    // config-level validation still applies
    CHECK_THROWS_AS(parse_sim_config("[sim]\nn_total = 0\n", "t"),
                    std::invalid_argument);
}

TEST_CASE("drift config parsing") {
    const auto cfg = parse_drift_config(
        "[drift]\ndrift_deg_per_window = 5\nn_windows = 100\noffset_deg = 10\n", "t");
    CHECK(cfg.drift_deg_per_window == 5.0);
    CHECK(cfg.n_windows == 100);
    CHECK(cfg.offset_deg == 10.0);
    CHECK(cfg.lambda1_nm == 1548.51);

    CHECK_THROWS_AS(parse_drift_config("[drip]\nx = 1\n", "t"), ParseError);
    CHECK_THROWS_AS(parse_drift_config("[drift]\nn_windows = -5\n", "t"),
                    std::invalid_argument);
}

TEST_CASE("report serialization carries the pipeline intermediates") {
    KeyRateReport rep;
    rep.mode = RateMode::Finite;
    rep.r_per_pulse = 1.5e-11;
    rep.positive = true;
    rep.decoy.n01_lb = 10.0;
    rep.decoy.n10_lb = 12.0;
    const auto text = serialize_report(rep, "deadbeefdeadbeef");
    CHECK(text.find("mode = finite") != std::string::npos);
    CHECK(text.find("input_digest = deadbeefdeadbeef") != std::string::npos);
    CHECK(text.find("r_per_pulse = 1.5e-11") != std::string::npos);
    CHECK(text.find("n1_lb = 22") != std::string::npos);
    CHECK(text.find("s_vv = ") != std::string::npos);
    // the report is itself a well-formed ini document
    const auto doc = parse_ini(text, "report");
    CHECK(doc.find("report") != nullptr);
    CHECK(doc.find("decoy") != nullptr);
    CHECK(doc.find("aopp") != nullptr);
}
