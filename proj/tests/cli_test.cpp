#include "cli.hpp"

#include "anscombe/error.hpp"
#include "anscombe/io.hpp"

#include "doctest.h"

#include <filesystem>
#include <sstream>

using namespace anscombe;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "anscombe");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "anscombe_cli_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        io::write_file_atomic(file(name), text);
        return file(name);
    }
};

std::string last_row(const std::string& csv) {
    const auto end = csv.find_last_not_of('\n');
    const auto start = csv.rfind('\n', end);
    return csv.substr(start + 1, end - start);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("boundary writes a terminal-collapse CSV and is byte-identical on rerun") {
    TempDir tmp;
    const auto prior = tmp.write("two_point.json", R"({"family": "two_point", "delta0": 1})");
    const auto out = tmp.file("b.csv");
    const auto svg = tmp.file("b.svg");
    auto r = run_cli({"boundary", "--prior", prior, "--grid", "300", "--out", out, "--plot", svg});
    REQUIRE(r.code == 0);
    const std::string first = io::read_file(out);
    CHECK(first.rfind("r,b_upper,b_lower\n", 0) == 0);
    CHECK(last_row(first) == "1,0,");
    const auto meta = nlohmann::json::parse(io::read_file(out + ".json"));
    CHECK(meta.at("grid") == 300);
    CHECK(meta.at("residual").get<double>() <= 1e-8);
    const std::string first_svg = io::read_file(svg);
    REQUIRE(run_cli({"boundary", "--prior", prior, "--grid", "300", "--out", out, "--plot", svg}).code == 0);
    CHECK(io::read_file(out) == first);
    CHECK(io::read_file(svg) == first_svg);
}

TEST_CASE("boundary output feeds simulate") {
    TempDir tmp;
    const auto prior = tmp.write("tp.json", R"({"family": "two_point", "delta0": 1})");
    const auto out = tmp.file("b.csv");
    REQUIRE(run_cli({"boundary", "--prior", prior, "--grid", "200", "--q", "1", "--out", out}).code == 0);
    const auto r = run_cli({"simulate", "--prior", prior, "--boundary", out, "--q", "1", "--paths", "500",
                            "--step", "1e-3", "--seed", "4"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("policy_value").at("n_paths") == 500);
    CHECK(j.at("q") == 1.0);
    const auto again = run_cli({"simulate", "--prior", prior, "--boundary", out, "--q", "1", "--paths", "500",
                                "--step", "1e-3", "--seed", "4"});
    CHECK(again.out == r.out);
}

TEST_CASE("normal prior: c(s), transform to p-values, plot") {
    TempDir tmp;
    const auto prior = tmp.write("normal.json", R"({"family": "normal", "m0": 0, "r0": 1})");
    const auto c = tmp.file("c.csv");
    REQUIRE(run_cli({"boundary", "--prior", prior, "--grid", "300", "--smin", "-1e4", "--out", c}).code == 0);
    CHECK(last_row(io::read_file(c)) == "-1,0,");
    std::vector<std::string> curves;
    for (const std::string r0 : {"0", "0.1", "1"}) {
        const auto out = tmp.file("bp_r0_" + r0 + ".csv");
        const auto r = run_cli({"transform", "--c", c, "--m0", "0", "--r0", r0, "--target", "pvalue", "--out", out});
        REQUIRE(r.code == 0);
        const auto meta = nlohmann::json::parse(io::read_file(out + ".json"));
        CHECK(meta.at("r0") == std::stod(r0));
        CHECK(meta.contains("s_min"));
        const auto b = io::boundary_from_csv(io::read_file(out));
        for (std::size_t i = 1; i < b.grid.size(); ++i) CHECK(b.upper[i] <= b.upper[i - 1]);
        curves.push_back(out);
    }
    std::vector<std::string> args = {"plot"};
    args.insert(args.end(), curves.begin(), curves.end());
    args.insert(args.end(), {"--log-x", "--out", tmp.file("fig.svg")});
    REQUIRE(run_cli(args).code == 0);
    const std::string svg = io::read_file(tmp.file("fig.svg"));
    CHECK(svg.find("bp_r0_0.1") != std::string::npos);

    const auto sim = run_cli({"simulate", "--prior", prior, "--boundary", c, "--grid", "200", "--paths", "300",
                              "--step", "1e-3"});
    CHECK(sim.code == 0);
}

TEST_CASE("compare-classical reports alpha squared and orderings") {
    const auto r = run_cli({"compare-classical", "--alpha", "0.025", "--r", "1e-5"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("ordering") == "classical_accepts_more");
    CHECK(j.at("classical_threshold").get<double>() == doctest::Approx(0.000625).epsilon(1e-15));
    const auto later = nlohmann::json::parse(run_cli({"compare-classical", "--alpha", "0.025", "--r", "1e-3"}).out);
    CHECK(later.at("ordering") == "optimal_accepts_more");
}

TEST_CASE("explicit and asymptotic reports") {
    const auto lomax = nlohmann::json::parse(run_cli({"explicit", "--kind", "lomax", "--r0", "1"}).out);
    CHECK(lomax.at("threshold").get<double>() == doctest::Approx(0.76422590101316823).epsilon(1e-12));
    const auto one = nlohmann::json::parse(run_cli({"explicit", "--kind", "one-sided", "--delta0", "1"}).out);
    CHECK(one.at("numeric_root").get<double>() == doctest::Approx(one.at("threshold").get<double>()));
    const auto asym = nlohmann::json::parse(run_cli({"asymptotic", "--q", "inf", "--s", "-100", "-1000"}).out);
    CHECK(asym.at("q") == "inf");
    CHECK(asym.at("values").size() == 2);
}

TEST_CASE("oracle writes a boundary in the volterra schema") {
    TempDir tmp;
    const auto prior = tmp.write("tp.json", R"({"family": "two_point", "delta0": 1})");
    const auto out = tmp.file("vi.csv");
    const auto r = run_cli({"oracle", "--prior", prior, "--step", "1e-2", "--out", out});
    REQUIRE(r.code == 0);
    CHECK(io::read_file(out).rfind("r,b_upper,b_lower\n", 0) == 0);
    const auto meta = nlohmann::json::parse(io::read_file(out + ".json"));
    CHECK(meta.at("near_top") == false);
}

TEST_CASE("errors map to exit codes with JSON on stderr") {
    TempDir tmp;
    auto r = run_cli({"plot", "--out", tmp.file("e.svg")});
    CHECK(r.code == cli::kValidation);
    const auto e = nlohmann::json::parse(r.err);
    CHECK(e.at("error").at("exit_code") == 2);
    CHECK(e.at("error").at("kind") == "input");

    CHECK(run_cli({"boundary", "--prior", tmp.file("missing.json"), "--out", tmp.file("x.csv")}).code == cli::kIo);
    CHECK(run_cli({"boundary"}).code == cli::kValidation);
    CHECK(run_cli({"frobnicate"}).code == cli::kValidation);

    const auto bad = tmp.write("bad.json", R"({"family": "two_point", "delta0": -1})");
    CHECK(run_cli({"boundary", "--prior", bad, "--out", tmp.file("x.csv")}).code == cli::kValidation);
    const auto junk = tmp.write("junk.json", "{not json");
    CHECK(run_cli({"boundary", "--prior", junk, "--out", tmp.file("x.csv")}).code == cli::kValidation);
    const auto broken = tmp.write("broken.csv", "r,b_upper,b_lower\n0.5,zz,\n1,0,\n");
    CHECK(run_cli({"plot", broken, "--out", tmp.file("p.svg")}).code == cli::kValidation);

    const auto prior = tmp.write("tp.json", R"({"family": "two_point", "delta0": 1})");
    const auto fp = run_cli({"boundary", "--prior", prior, "--grid", "50", "--method", "fixed-point", "--q", "1",
                             "--out", tmp.file("x.csv")});
    CHECK(fp.code == cli::kValidation);
    CHECK(run_cli({"boundary", "--prior", prior, "--out", (tmp.path / "nodir" / "x.csv").string(), "--grid", "50"})
              .code == cli::kIo);
    CHECK(run_cli({"--help"}).code == 0);
}

}
