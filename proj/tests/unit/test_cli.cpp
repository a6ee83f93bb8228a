#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("wavephase_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Result {
    int code;
    std::string out;
};

Result run(const std::string& args) {
    const auto log = scratch() / "stdout.txt";
    const std::string cmd = std::string("\"") + WAVEPHASE_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 2") {
    CHECK(run("bogus").code == 2);
    CHECK(run("domain-check --h 1").code == 2);
    CHECK(run("roots --model lotka").code == 2);

    const auto cfg = scratch() / "bad.json";
    std::ofstream(cfg) << R"({"model": {"name": "nicholson"}, "gird": {}})";
    const auto r = run("roots --config \"" + cfg.string() + "\"");
    CHECK(r.code == 2);
    CHECK(r.out.find("gird") != std::string::npos);
}

TEST_CASE("domain check") {
    const auto in = run("domain-check --h 0 --c 3");
    CHECK(in.code == 0);
    CHECK(in.out.find("inside") != std::string::npos);
    const auto out = run("domain-check --h 1 --c 2.1");
    CHECK(out.code == 0);
    CHECK(out.out.find("outside") != std::string::npos);
}

TEST_CASE("roots table parses") {
    const auto r = run("roots --complex 4");
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0][0] == "kind");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() >= 5);
        CHECK(std::stod(rows[i][4]) < 1e-10);
    }
    CHECK(std::stod(rows[1][2]) == doctest::Approx(0.31251423456288243).epsilon(1e-12));
}

TEST_CASE("outputs are deterministic") {
    const auto a = scratch() / "a.csv", b = scratch() / "b.csv";
    REQUIRE(run("dde-run --q 19 --A0 linear:-1:1 --dt 0.0078125 --T 3 --out \"" + a.string() + "\"").code == 0);
    REQUIRE(run("dde-run --q 19 --A0 linear:-1:1 --dt 0.0078125 --T 3 --out \"" + b.string() + "\"").code == 0);
    const auto text = slurp(a);
    CHECK(text == slurp(b));
    const auto rows = csv(text);
    REQUIRE(rows.size() > 10);
    CHECK(rows[0] == std::vector<std::string>{"t", "A", "alpha", "envelope"});

    const auto c = scratch() / "curve.csv";
    REQUIRE(run("domain-curve --h-min 0 --h-max 2 --n 10 --out \"" + c.string() + "\"").code == 0);
    const auto curve = csv(slurp(c));
    REQUIRE(curve.size() == 12);
    CHECK(std::stod(curve[1][1]) == doctest::Approx(2.8284271247461903));
}

TEST_CASE("reproduce boundary curve") {
    const auto dir = scratch() / "repro";
    const auto r = run("reproduce fig1-right --out \"" + dir.string() + "\"");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(fs::exists(dir / "fig1-right_summary.txt"));
}

}  // TEST_SUITE
