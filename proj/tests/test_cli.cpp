#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "common.hpp"

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI from the source directory; stderr is discarded unless `merge` is set.
Run seb_run(const std::string& args, bool merge = false) {
    std::string cmd = "cd '" + std::string(SEB_SOURCE_DIR) + "' && '" + std::string(SEB_CLI) + "' " + args +
                      (merge ? " 2>&1" : " 2>/dev/null");
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("cli::validate exit codes") {
    CHECK(seb_run("validate corpus/quotecomparer.seb").code == 0);
    auto dup = seb_run("validate fixtures/dup_link.seb");
    CHECK(dup.code == 1);
    CHECK(dup.out.find("DUP_LINK") != std::string::npos);
    CHECK(seb_run("validate missing.seb").code == 2);
    CHECK(seb_run("validate corpus/pingpong.cfg").code == 2);
    CHECK(seb_run("validate corpus/pingpong.seb fixtures/cycle.seb").code == 1);
    CHECK(seb_run("frobnicate").code == 2);
}

TEST_CASE("cli::validate reports variables") {
    auto r = seb_run("validate --report-vars corpus/pingpong_client.seb");
    CHECK(r.code == 0);
    CHECK(r.out.find("  binding: s y\n") != std::string::npos);
    CHECK(r.out.find("  free: p x\n") != std::string::npos);
}

TEST_CASE("cli::compile outputs") {
    auto raw = seb_run("compile fixtures/atomic_inv.seb --stage raw");
    CHECK(raw.code == 0);
    CHECK(raw.out == "des (0, 1, 2)\n(0, \"s!op(x)\", 1)\n");

    auto dot = seb_run("compile corpus/quotecomparer.seb --stage rtc --format dot");
    CHECK(dot.code == 0);
    CHECK(count(dot.out, "doublecircle") == 5);

    auto aut = seb_run("compile corpus/quotecomparer.seb --stage min --format aut");
    CHECK(aut.code == 0);
    auto g = seb::from_aut(aut.out);
    CHECK(g.sinks().size() == 1);

    auto min_dot = seb_run("compile corpus/quotecomparer.seb --stage min --format dot");
    CHECK(count(min_dot.out, " -> ") - 1 == g.num_transitions());
    CHECK(count(min_dot.out, "shape=") - 1 == g.num_states());
}

TEST_CASE("cli::compile flags and errors") {
    CHECK(seb_run("compile corpus/quotecomparer.seb --stage raw --max-states 1000").code == 3);
    CHECK(seb_run("compile fixtures/cycle.seb").code == 1);
    CHECK(seb_run("compile missing.seb").code == 2);
    CHECK(seb_run("compile corpus/pingpong.seb --stage bogus").code == 2);
    CHECK(seb_run("compile corpus/quotecomparer.seb --check-properties --stage min").code == 0);
    auto a = seb_run("compile corpus/quotecomparer.seb --stage min");
    auto b = seb_run("compile corpus/quotecomparer.seb --stage min --rtc-before-compress");
    CHECK(seb::from_aut(a.out).num_states() == seb::from_aut(b.out).num_states());
    auto payload = seb_run("compile corpus/pingpong.seb --stage rtc --format dot --payloads");
    CHECK(payload.out.find("xlabel") != std::string::npos);

    std::string path = std::string(SEB_BINARY_DIR) + "/cli_out.aut";
    CHECK(seb_run("compile fixtures/atomic_inv.seb -o '" + path + "'").code == 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().rfind("des (0, 1, 2)", 0) == 0);
}

TEST_CASE("cli::check verdicts") {
    auto ok = seb_run("check corpus/pingpong.cfg");
    CHECK(ok.code == 0);
    CHECK(ok.out.rfind("Verified (", 0) == 0);
    auto bad = seb_run("check fixtures/mismatch.cfg --trace");
    CHECK(bad.code == 1);
    CHECK(bad.out.rfind("UNSAFE", 0) == 0);
    CHECK(bad.out.find("1: SES1 client s@p") != std::string::npos);
    auto ex = seb_run("check corpus/looping.cfg --max-configs 10");
    CHECK(ex.code == 4);
    CHECK(ex.out.rfind("Exhausted", 0) == 0);
    CHECK(seb_run("check missing.cfg").code == 2);
    CHECK(seb_run("check corpus/pingpong.seb").code == 2);
}

TEST_CASE("cli::simulate") {
    auto r = seb_run("simulate corpus/pingpong.cfg --steps 6 --seed 1");
    CHECK(r.code == 0);
    CHECK(r.out.find("SES1") != std::string::npos);
    CHECK(r.out.find("SES2") != std::string::npos);
    CHECK(r.out.find("INV") != std::string::npos);
    CHECK(r.out.find("REC") != std::string::npos);
    CHECK(r.out == seb_run("simulate corpus/pingpong.cfg --steps 6 --seed 1").out);
    auto zero = seb_run("simulate corpus/pingpong.cfg --steps 0");
    CHECK(zero.out.rfind("instances:\n", 0) == 0);
}
