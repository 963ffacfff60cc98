#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "cli.hpp"
#include "defect_cert/io.hpp"
#include "defect_cert/prony.hpp"

using namespace dcert;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch() {
    auto dir = std::filesystem::temp_directory_path() / "defect_cert_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors") {
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(run({"--help"}).code == cli::kOk);
    CHECK(run({"windows", "--W", "8"}).code == cli::kUsage);
    CHECK(run({"--mode", "weird", "windows", "--W", "8", "--params", "1,1,1"}).code == cli::kUsage);
}

TEST_CASE("windows") {
    auto r = run({"--mode", "exact", "windows", "--W", "8", "--K", "7", "--params", "1,1,5,1,2,2,-2"});
    REQUIRE(r.code == cli::kOk);
    auto j = Json::parse(r.out);
    const std::vector<std::string> want{"-16", "-5160", "-975168", "-169890432", "-27959752704", "-4399334572032",
                                        "-665805326548992"};
    CHECK(j["exact_sums"].get<std::vector<std::string>>() == want);

    const auto dir = scratch();
    std::ofstream(dir / "zeros.txt") << "0\n0\n0\n0\n0\n0\n0\n0\n";
    r = run({"windows", "--W", "4", "--sequence", (dir / "zeros.txt").string()});
    REQUIRE(r.code == cli::kOk);
    CHECK(Json::parse(r.out)["sums"] == Json::array({0.0, 0.0}));

    r = run({"windows", "--preset", "case-a", "--format", "csv"});
    REQUIRE(r.code == cli::kOk);
    const auto w = window_data_from_csv(r.out, 8);
    CHECK(w.count() == 12);
    CHECK(std::fabs(w.sums[0] - 4.791914) < 5e-6);

    r = run({"--mode", "modular", "--prime", "7", "windows", "--W", "8", "--params", "1,1,5,1,2,2,-2"});
    REQUIRE(r.code == cli::kOk);
    CHECK(Json::parse(r.out)["residues"][0] == "5");  // -16 mod 7

    CHECK(run({"windows", "--W", "4", "--sequence", (dir / "nope.txt").string()}).code == cli::kUsage);
}

TEST_CASE("witness") {
    auto r = run({"witness", "--d", "3", "--W", "8", "--pi0", "1,1,5,1,2,2,-2"});
    REQUIRE(r.code == cli::kOk);
    auto j = Json::parse(r.out);
    validate_certificate_json(j);
    CHECK(j["det_mod_p"] == 972226939);

    CHECK(run({"witness", "--W", "8", "--pi0", "0,0,0,0,0,0,0"}).code == cli::kNegative);
    CHECK(run({"witness", "--W", "8", "--pi0", "1,1,5,1,2,2,-2", "--prime", "15"}).code == cli::kUsage);

    r = run({"witness", "--d", "3", "--W", "8", "--search", "--bound", "5", "--seed", "9"});
    REQUIRE(r.code == cli::kOk);
    CHECK(Json::parse(r.out)["nonzero"] == true);
    CHECK(run({"witness", "--d", "3", "--W", "8", "--search", "--max-trials", "0"}).code == cli::kUnresolved);
}

TEST_CASE("reconstruct and round trip") {
    const auto dir = scratch();
    auto r = run({"--out", (dir / "a.json").string(), "windows", "--preset", "case-a"});
    REQUIRE(r.code == cli::kOk);
    r = run({"reconstruct", "--d", "3", "--windows", (dir / "a.json").string()});
    REQUIRE(r.code == cli::kOk);
    const auto model_json = Json::parse(r.out);
    validate_model_json(model_json);
    PronyModel model;
    for (const auto& z : model_json["nodes"]) model.nodes.emplace_back(z[0].get<double>(), z[1].get<double>());
    for (const auto& z : model_json["amplitudes"]) model.amplitudes.emplace_back(z[0].get<double>(), z[1].get<double>());
    const auto input = load_windows((dir / "a.json").string(), 0);
    const auto again = model.synthesize(input.count());
    for (std::size_t k = 0; k < input.count(); ++k) CHECK(std::fabs(again[k] / input.sums[k] - 1.0) <= 1e-6);

    std::ofstream(dir / "z.json") << R"({"W":8,"K":4,"sums":[0,0,0,0]})";
    r = run({"reconstruct", "--d", "1", "--windows", (dir / "z.json").string()});
    CHECK(r.code == cli::kNegative);
    CHECK(r.out.find("hankel_singular") != std::string::npos);
    CHECK(run({"reconstruct", "--d", "3", "--windows", (dir / "z.json").string()}).code == cli::kUsage);
}

TEST_CASE("certify exit codes") {
    const auto dir = scratch();
    std::ofstream(dir / "n.json") << R"({"W":8,"K":7,"sums":[8,8,8,8,8,8,8]})";
    std::ofstream(dir / "z.json") << R"({"W":8,"K":4,"sums":[0,0,0,0]})";
    std::ofstream(dir / "bad.json") << R"({"W":8,"K":3,"sums":[1,2]})";
    REQUIRE(run({"--out", (dir / "a.json").string(), "windows", "--preset", "case-a"}).code == cli::kOk);

    auto r = run({"certify", "--d", "1", "--windows", (dir / "n.json").string()});
    CHECK(r.code == cli::kOk);
    validate_report_json(Json::parse(r.out));
    CHECK(run({"certify", "--d", "3", "--windows", (dir / "a.json").string()}).code == cli::kNegative);
    CHECK(run({"certify", "--d", "1", "--windows", (dir / "z.json").string()}).code == cli::kUnresolved);
    CHECK(run({"certify", "--d", "1", "--windows", (dir / "bad.json").string()}).code == cli::kUsage);
}

TEST_CASE("config file supplies defaults") {
    const auto dir = scratch();
    std::ofstream(dir / "n.json") << R"({"W":8,"K":7,"sums":[8,8,8,8,8,8,8]})";
    std::ofstream(dir / "cfg.json") << R"({"d": 1, "noise_eps": 0.5, "eps0": 0.01})";
    auto r = run({"--config", (dir / "cfg.json").string(), "certify", "--windows", (dir / "n.json").string()});
    CHECK(r.code == cli::kUnresolved);  // noise above eps0
    r = run({"--config", (dir / "cfg.json").string(), "certify", "--windows", (dir / "n.json").string(),
             "--noise-eps", "0"});
    CHECK(r.code == cli::kOk);
    std::ofstream(dir / "badcfg.json") << R"({"thresholds": {"nonsense": 1}, "d": 1})";
    CHECK(run({"--config", (dir / "badcfg.json").string(), "certify", "--windows", (dir / "n.json").string()}).code ==
          cli::kUsage);
}

TEST_CASE("synth") {
    const auto dir = scratch() / "synth";
    auto r = run({"--out", dir.string(), "synth", "case-a"});
    REQUIRE(r.code == cli::kOk);
    const auto observed = window_data_from_csv(slurp(dir / "case-a.observed.csv"), 8);
    CHECK(observed.count() == 12);
    CHECK(observed.sums[1] == 1.303021);
    const auto truth = window_data_from_csv(slurp(dir / "case-a.true.csv"), 8);
    CHECK(truth.sums[0] == 4.791914);

    r = run({"--out", dir.string(), "synth", "case-b"});
    REQUIRE(r.code == cli::kOk);
    CHECK(window_data_from_csv(slurp(dir / "case-b.observed.csv"), 6).count() == 8);

    r = run({"--out", dir.string(), "synth", "collision", "--W", "8", "--K", "11"});
    REQUIRE(r.code == cli::kOk);
    const auto summary = Json::parse(r.out);
    CHECK(summary["N"] == 95);
    CHECK(summary["identical"] == true);
    const auto yin = parse_sequence(slurp(dir / "collision.in.txt"));
    const auto yout = parse_sequence(slurp(dir / "collision.out.txt"));
    CHECK(window_sums(yin, 8, 12).sums == window_sums(yout, 8, 12).sums);

    CHECK(run({"synth", "case-z"}).code == cli::kUsage);
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
