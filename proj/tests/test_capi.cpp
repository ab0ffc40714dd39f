#include <doctest.h>

#include "report.hpp"
#include "weylkit.h"

#include <json.hpp>

#include <cmath>
#include <random>
#include <string>

using nlohmann::json;

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    wk_string_free(s);
    return out;
}

struct Handle {
    wk_problem* p = nullptr;
    ~Handle() { wk_problem_free(p); }
};

} // namespace

TEST_CASE("C API: catalog problem round trip") {
    Handle h;
    REQUIRE(wk_problem_from_catalog("power-r2x", &h.p) == WK_OK);
    char* text = nullptr;
    REQUIRE(wk_problem_to_json(h.p, &text) == WK_OK);
    const std::string a = take(text);

    Handle g;
    REQUIRE(wk_problem_from_json(a.c_str(), &g.p) == WK_OK);
    REQUIRE(wk_problem_to_json(g.p, &text) == WK_OK);
    CHECK(take(text) == a);

    REQUIRE(wk_catalog_names(&text) == WK_OK);
    const json names = json::parse(take(text));
    CHECK(names.size() >= 10);
    REQUIRE(wk_command_names(&text) == WK_OK);
    const json cmds = json::parse(take(text));
    CHECK(std::find(cmds.begin(), cmds.end(), "help check") != cmds.end());
    CHECK(std::string(wk_version()) == wk::kToolVersion);
}

TEST_CASE("C API: m evaluation") {
    Handle h;
    REQUIRE(wk_problem_from_catalog("hardy-littlewood", &h.p) == WK_OK);
    double re = 0, im = 0, enc = 0;
    REQUIRE(wk_m_eval(h.p, 0.0, 1.0, &re, &im, &enc) == WK_OK);
    const std::complex<double> exact = std::pow(std::complex<double>(0.0, -1.0), -0.5);
    CHECK(std::abs(std::complex<double>(re, im) - exact) < 1e-6);
    CHECK(enc >= 0.0);
    CHECK(wk_m_eval(h.p, 1.0, 0.0, &re, &im, &enc) == WK_ERR_DOMAIN);
    CHECK(std::string(wk_last_error()).size() > 0);
}

TEST_CASE("C API: error statuses") {
    wk_problem* p = nullptr;
    CHECK(wk_problem_from_json("{not json", &p) == WK_ERR_PARSE);
    CHECK(p == nullptr);
    CHECK(wk_problem_from_catalog("no-such-problem", &p) != WK_OK);
    CHECK(wk_problem_from_catalog("hardy-littlewood", nullptr) == WK_ERR_ARGUMENT);
    CHECK(wk_m_eval(nullptr, 0.0, 1.0, nullptr, nullptr, nullptr) == WK_ERR_ARGUMENT);
    CHECK(std::string(wk_status_string(WK_ERR_NUMERIC)).size() > 0);

    Handle h;
    REQUIRE(wk_problem_from_catalog("hardy-littlewood", &h.p) == WK_OK);
    char* report = nullptr;
    int verdict = -1;
    CHECK(wk_run("help check", h.p, R"({"bogus_option": 1})", &report, &verdict) == WK_ERR_PARSE);
    const json err = json::parse(take(report));
    CHECK(err["error"]["kind"] == "parse");
    CHECK(err["error"]["message"].get<std::string>().find("bogus_option") != std::string::npos);

    CHECK(wk_run("no such command", h.p, nullptr, &report, &verdict) == WK_ERR_PARSE);
    take(report);
}

TEST_CASE("C API: run produces a report with provenance") {
    Handle h;
    REQUIRE(wk_problem_from_catalog("hardy-littlewood", &h.p) == WK_OK);
    char* report = nullptr;
    int verdict = -1;
    REQUIRE(wk_run("help check", h.p, nullptr, &report, &verdict) == WK_OK);
    const std::string text = take(report);
    CHECK(verdict == WK_VERDICT_POSITIVE);
    const json j = json::parse(text);
    CHECK(j["command"] == "help check");
    CHECK(j["provenance"]["tool"] == "weylkit");
    CHECK(j["provenance"]["version"] == wk::kToolVersion);

    char* csv = nullptr;
    REQUIRE(wk_report_csv(text.c_str(), &csv) == WK_OK);
    const std::string table = take(csv);
    CHECK(table.find('\n') != std::string::npos);

    // Same input, same bytes.
    REQUIRE(wk_run("help check", h.p, nullptr, &report, &verdict) == WK_OK);
    CHECK(take(report) == text);
}

TEST_CASE("C API: negative verdict") {
    Handle h;
    REQUIRE(wk_problem_from_catalog("factorial-weight", &h.p) == WK_OK);
    char* report = nullptr;
    int verdict = -1;
    REQUIRE(wk_run("sim check", h.p, nullptr, &report, &verdict) == WK_OK);
    take(report);
    CHECK(verdict == WK_VERDICT_NEGATIVE);
}

TEST_CASE("property: complex numbers survive format and parse exactly") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> e(-300.0, 300.0), s(-1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const wk::cplx z(s(rng) * std::pow(10.0, e(rng)), s(rng) * std::pow(10.0, e(rng)));
        const wk::cplx back = wk::parse_complex(wk::format_complex(z));
        CHECK(back == z);
    }
    CHECK(wk::parse_complex("i") == wk::cplx(0.0, 1.0));
    CHECK(wk::parse_complex("-2i") == wk::cplx(0.0, -2.0));
    CHECK(wk::parse_complex("1.5") == wk::cplx(1.5, 0.0));
    CHECK(wk::parse_complex("1e-3+2e-3i") == wk::cplx(1e-3, 2e-3));
    CHECK_THROWS_AS(wk::parse_complex("1+"), wk::Error);
}
