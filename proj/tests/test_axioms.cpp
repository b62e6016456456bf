#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "catstream/laws.hpp"

using namespace catstream;

namespace {

std::map<std::string, law_report> by_name(const std::vector<law_report>& reports) {
    std::map<std::string, law_report> m;
    for (const law_report& r : reports) m[r.name] = r;
    return m;
}

law_options quick(std::size_t instances, std::uint64_t seed = 0) {
    law_options o;
    o.instances = instances;
    o.seed = seed;
    return o;
}

}  // namespace

TEST_CASE("all five loop axioms hold on random instances") {
    law_options opt = quick(200);
    std::vector<law_report> reports = check_feedback_axioms(opt);
    REQUIRE(reports.size() == 5);
    auto m = by_name(reports);
    for (const char* name : {"tightening", "joining", "vanishing", "strength", "sliding"}) {
        REQUIRE(m.count(name) == 1);
        CHECK(m[name].instances == 200);
        CHECK(m[name].failures == 0);
        CHECK(m[name].counterexample.empty());
    }
    CHECK(all_passed(reports));
}

TEST_CASE("the loop axioms are seed-independent") {
    for (std::uint64_t seed : {1ull, 42ull, 12345ull})
        CHECK(all_passed(check_feedback_axioms(quick(50, seed))));
}

TEST_CASE("a lagged loop implementation is caught by the sliding axiom") {
    law_options opt = quick(200);
    auto m = by_name(check_feedback_axioms(opt, corrupted_feedback()));

    CHECK(m["sliding"].failures > 0);
    CHECK_FALSE(m["sliding"].counterexample.empty());
    // tightening composes around the outside of the loop, so the extra lag
    // cancels and the law still holds
    CHECK(m["tightening"].failures == 0);
}

TEST_CASE("category and comonoid laws hold extensionally on arbitrary kernels") {
    std::vector<law_report> reports = check_stream_laws(quick(100));
    CHECK(reports.size() >= 10);
    for (const law_report& r : reports) {
        INFO(r.name);
        CHECK(r.instances >= 100);
        CHECK(r.failures == 0);
    }
    CHECK(all_passed(reports));
}

TEST_CASE("the same laws hold on wiring diagrams of random terms") {
    std::vector<law_report> reports = check_diagram_laws(quick(100));
    CHECK(reports.size() >= 10);
    for (const law_report& r : reports) {
        INFO(r.name);
        CHECK(r.instances >= 100);
        CHECK(r.failures == 0);
    }
}

TEST_CASE("parallel and serial law runs produce identical reports") {
    law_options par = quick(60);
    law_options ser = par;
    ser.parallel = false;

    auto check_pair = [](const std::vector<law_report>& a, const std::vector<law_report>& b) {
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].name == b[i].name);
            CHECK(a[i].instances == b[i].instances);
            CHECK(a[i].failures == b[i].failures);
            CHECK(a[i].counterexample == b[i].counterexample);
        }
    };
    check_pair(check_feedback_axioms(par), check_feedback_axioms(ser));
    check_pair(check_stream_laws(par), check_stream_laws(ser));
    check_pair(check_diagram_laws(par), check_diagram_laws(ser));
}

TEST_CASE("law reports render with counts and verdicts") {
    std::vector<law_report> reports = check_feedback_axioms(quick(25));
    std::string text = format_reports(reports);
    CHECK(text.find("sliding") != std::string::npos);
    CHECK(text.find("25/25") != std::string::npos);
    CHECK(text.find(": ok") != std::string::npos);
    CHECK(text.find("FAIL") == std::string::npos);

    auto failing = check_feedback_axioms(quick(25), corrupted_feedback());
    std::string bad = format_reports(failing);
    CHECK(bad.find("FAIL") != std::string::npos);
    CHECK(bad.find("counterexample") != std::string::npos);
    CHECK_FALSE(all_passed(failing));
}

TEST_CASE("law runs are reproducible for a fixed seed") {
    auto a = check_feedback_axioms(quick(40, 7));
    auto b = check_feedback_axioms(quick(40, 7));
    CHECK(format_reports(a) == format_reports(b));
}
