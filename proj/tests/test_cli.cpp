#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

namespace {

#ifndef PWLAB_BIN_PATH
#error "PWLAB_BIN_PATH must point at the pwlab binary"
#endif

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(PWLAB_BIN_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    return RunResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/pwlab_test_") + std::to_string(getpid()) + "_" + name;
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    return lines;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("bell table dump") {
    const auto r = run_cli("bell --n 5");
    CHECK(r.exit_code == 0);
    const auto lines = data_lines(r.output);
    REQUIRE(lines.size() == 16);  // header + 15 triangle entries
    CHECK(lines[0] == "N,k,log_f,f");
    // diagonal entry F(5,5) = 1
    bool saw_diagonal = false;
    for (const auto& l : lines)
        if (l.rfind("5,5,", 0) == 0) {
            saw_diagonal = true;
            CHECK(l == "5,5,0,1");
        }
    CHECK(saw_diagonal);
}

TEST_CASE("invert on a single point prints the classical value") {
    const auto r = run_cli("invert --oracle exp:1 --curve real --N 4 --x-grid 1:1:1");
    CHECK(r.exit_code == 0);
    const auto lines = data_lines(r.output);
    REQUIRE(lines.size() == 2);
    double x = 0, re = 0, im = 0;
    REQUIRE(std::sscanf(lines[1].c_str(), "%lf,%lf,%lf", &x, &re, &im) == 3);
    CHECK(x == 1.0);
    CHECK(re == doctest::Approx(0.32768).epsilon(1e-12));
    CHECK(im == 0.0);
}

TEST_CASE("kernel grid emits consistent magnitude column") {
    const auto r = run_cli("kernel --curve mixture --mu 0.1 --sigma 1 --N 12 --x 1 --grid 0.5:1.5:5");
    CHECK(r.exit_code == 0);
    const auto lines = data_lines(r.output);
    REQUIRE(lines.size() == 6);
    for (size_t i = 1; i < lines.size(); ++i) {
        double t, re, im, mag;
        REQUIRE(std::sscanf(lines[i].c_str(), "%lf,%lf,%lf,%lf", &t, &re, &im, &mag) == 4);
        CHECK(std::sqrt(re * re + im * im) == doctest::Approx(mag).epsilon(1e-12));
    }
}

TEST_CASE("missing required flag is a usage error") {
    const auto r = run_cli("estimate --N 5 --x-grid 1:2:3");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("--samples") != std::string::npos);
}

TEST_CASE("unknown flag is a usage error") {
    const auto r = run_cli("bell --n 5 --frobnicate");
    CHECK(r.exit_code == 1);
}

TEST_CASE("simulate then estimate round trip with reproducible bytes") {
    const std::string samples = temp_path("samples.txt");
    const std::string est1 = temp_path("est1.json");
    const std::string est2 = temp_path("est2.json");

    auto sim = run_cli("simulate --mu 0.1 --sigma 1 --mixing exp:1 --n 500 --seed 42 --out " +
                       samples);
    REQUIRE(sim.exit_code == 0);
    const std::string first = read_file(samples);
    CHECK(data_lines(first).size() == 500);
    CHECK(first.rfind("# {", 0) == 0);

    sim = run_cli("simulate --mu 0.1 --sigma 1 --mixing exp:1 --n 500 --seed 42 --out " + samples);
    REQUIRE(sim.exit_code == 0);
    CHECK(read_file(samples) == first);  // byte-identical re-run

    auto est = run_cli("estimate --samples " + samples +
                       " --mu 0.1 --sigma 1 --N 8 --x-grid 0.5:2:4 --out " + est1);
    REQUIRE(est.exit_code == 0);
    est = run_cli("estimate --samples " + samples +
                  " --mu 0.1 --sigma 1 --N 8 --x-grid 0.5:2:4 --out " + est2);
    REQUIRE(est.exit_code == 0);

    auto doc1 = nlohmann::json::parse(read_file(est1));
    auto doc2 = nlohmann::json::parse(read_file(est2));
    REQUIRE(doc1.contains("x"));
    REQUIRE(doc1.contains("p_real"));
    REQUIRE(doc1.contains("p_imag"));
    CHECK(doc1["N"] == 8);
    CHECK(doc1["n"] == 500);
    CHECK(doc1["x"].size() == 4);
    CHECK(doc1["p_real"].size() == 4);
    CHECK(doc1["meta"]["tool"] == "pwlab");
    CHECK(doc1["meta"]["config"]["N"] == 8);

    // identical modulo wall time
    doc1["meta"].erase("wall_time_seconds");
    doc2["meta"].erase("wall_time_seconds");
    CHECK(doc1.dump() == doc2.dump());

    std::remove(samples.c_str());
    std::remove(est1.c_str());
    std::remove(est2.c_str());
}

TEST_CASE("estimate csv output and thread-count independence") {
    const std::string samples = temp_path("samples_t.txt");
    auto sim = run_cli("simulate --mu 0.1 --mixing exp:1 --n 400 --seed 9 --out " + samples);
    REQUIRE(sim.exit_code == 0);

    const auto one = run_cli("estimate --samples " + samples +
                             " --mu 0.1 --N 6 --x-grid 0.5:2:5 --format csv --threads 1");
    const auto four = run_cli("estimate --samples " + samples +
                              " --mu 0.1 --N 6 --x-grid 0.5:2:5 --format csv --threads 4");
    REQUIRE(one.exit_code == 0);
    REQUIRE(four.exit_code == 0);
    // identical modulo the header (configs differ only in the threads value)
    const auto rows1 = data_lines(one.output);
    const auto rows4 = data_lines(four.output);
    REQUIRE(rows1.size() == 6);
    CHECK(rows1[0] == "x,p_real,p_imag");
    CHECK(rows1 == rows4);
    std::remove(samples.c_str());
}

TEST_CASE("config file supplies defaults but flags win") {
    const std::string cfg = temp_path("cfg.json");
    {
        std::ofstream out(cfg);
        out << R"({"n": 6, "out": ""})" << "\n";
    }
    // config provides --n 6; command line overrides nothing else
    auto r = run_cli("bell --config " + cfg);
    CHECK(r.exit_code == 0);
    CHECK(data_lines(r.output).size() == 22);  // header + 21 entries

    // explicit flag beats the file
    r = run_cli("bell --config " + cfg + " --n 3");
    CHECK(r.exit_code == 0);
    CHECK(data_lines(r.output).size() == 7);  // header + 6 entries

    std::remove(cfg.c_str());
}

TEST_CASE("numerical failure exits with code 2") {
    const std::string samples = temp_path("overflow.txt");
    {
        std::ofstream out(samples);
        out << "20.0\n";
    }
    const auto r = run_cli("estimate --samples " + samples +
                           " --mu 0 --sigma 1 --N 100 --x-grid 0.000001:0.000001:1");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("numerical failure") != std::string::npos);
    std::remove(samples.c_str());
}

TEST_CASE("malformed sample file is a usage error") {
    const std::string samples = temp_path("bad.txt");
    {
        std::ofstream out(samples);
        out << "1.0\nnot-a-number\n";
    }
    const auto r = run_cli("estimate --samples " + samples + " --mu 0 --N 3 --x-grid 1:1:1");
    CHECK(r.exit_code == 1);
    std::remove(samples.c_str());
}

TEST_CASE("benchmark emits point and aggregate rows deterministically") {
    const auto r = run_cli(
        "benchmark --mixing exp:1 --mu 0.1 --sigma 1 --n-list 100,200 --N-list 2,3 "
        "--x-grid 1:2:3 --replicates 3 --seed 5");
    CHECK(r.exit_code == 0);
    const auto lines = data_lines(r.output);
    // header + 4 cells * (3 points + 1 aggregate)
    REQUIRE(lines.size() == 17);
    CHECK(lines[0] == "kind,n,N,x,mean_re,rmse,mc_var");
    int points = 0, aggregates = 0;
    for (const auto& l : lines) {
        if (l.rfind("point,", 0) == 0) ++points;
        if (l.rfind("aggregate,", 0) == 0) ++aggregates;
    }
    CHECK(points == 12);
    CHECK(aggregates == 4);

    const auto rerun = run_cli(
        "benchmark --mixing exp:1 --mu 0.1 --sigma 1 --n-list 100,200 --N-list 2,3 "
        "--x-grid 1:2:3 --replicates 3 --seed 5");
    CHECK(rerun.output == r.output);
}

TEST_CASE("grid parsing rejects nonsense") {
    CHECK(run_cli("invert --oracle exp:1 --N 2 --x-grid 1:2").exit_code == 1);
    CHECK(run_cli("invert --oracle exp:1 --N 2 --x-grid 1:2:0").exit_code == 1);
    CHECK(run_cli("invert --oracle bogus:1 --N 2 --x-grid 1:1:1").exit_code == 1);
}

TEST_SUITE_END();
