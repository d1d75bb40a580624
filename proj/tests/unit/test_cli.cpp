#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "lpcalc/cli.hpp"
#include "lpcalc/experiments.hpp"
#include "lpcalc/lpgf.hpp"

using namespace lpcalc;
using cli::dispatch;
using json = nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "lpcalc_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

json checks_of(const cli::Outcome& r) { return json::parse(r.report)["checks"]; }

}  // namespace

TEST_CASE("exit codes") {
    CHECK(dispatch({"partition-check", "--jmax", "5"}).exit_code == cli::kPass);
    CHECK(dispatch({}).exit_code == cli::kUsageError);
    CHECK(dispatch({"no-such-command"}).exit_code == cli::kUsageError);
    CHECK(dispatch({"partition-check", "--bogus", "1"}).exit_code == cli::kUsageError);
    CHECK(dispatch({"partition-check", "--jmax", "five"}).exit_code == cli::kUsageError);
    CHECK(dispatch({"partition-check", "--jmax", "12"}).exit_code == cli::kUsageError);  // beyond Nyquist
    CHECK(dispatch({"norm", "--input", scratch("absent.lpgf").string()}).exit_code == cli::kIoError);
    CHECK(dispatch({"partition-check", "--out", "/nonexistent-dir/r.json"}).exit_code == cli::kIoError);

    const auto help = dispatch({"--help"});
    CHECK(help.exit_code == cli::kPass);
    CHECK(help.diagnostics.find("partition-check") != std::string::npos);
}

TEST_CASE("gate failures are check failures") {
    const auto r = dispatch({"product-check", "--p", "2", "--q", "0.5", "--count", "4"});
    CHECK(r.exit_code == cli::kCheckFailure);
    const json c = checks_of(r);
    REQUIRE(c.size() == 1);
    CHECK(c[0]["name"] == "gate");
    CHECK(c[0]["pass"] == false);
    CHECK(c[0]["detail"].get<std::string>().find("p/(p+1)") != std::string::npos);
}

TEST_CASE("corrupt LPGF is an I/O error") {
    const auto path = scratch("corrupt.lpgf");
    std::ofstream(path, std::ios::binary) << "not an lpgf file";
    const auto r = dispatch({"norm", "--input", path.string()});
    CHECK(r.exit_code == cli::kIoError);
    CHECK(r.diagnostics.find("offset") != std::string::npos);
}

TEST_CASE("norm of a stored function") {
    const Grid g(1, 256, 2 * std::numbers::pi);
    const auto path = scratch("member.lpgf");
    write_lpgf(random_band_limited(g, 4, 0.5, 0.1, 7, 0), path);
    for (const char* space : {"besov", "tl", "tl-inf", "bmo", "big-bmo", "xw"}) {
        const auto r = dispatch({"norm", "--input", path.string(), "--space", space});
        CHECK(r.exit_code == cli::kPass);
        const double v = json::parse(r.report)["results"]["value"].get<double>();
        CHECK(v > 0.0);
    }
}

TEST_CASE("reports are deterministic apart from the timestamp") {
    const std::vector<std::string> args{"embed-check", "--count", "8", "--levels", "4,5"};
    const auto a = dispatch(args), b = dispatch(args);
    REQUIRE(a.exit_code == cli::kPass);
    CHECK(a.report.find("timestamp") != std::string::npos);
    CHECK(cli::strip_timestamp(a.report) == cli::strip_timestamp(b.report));
    CHECK(cli::strip_timestamp(a.report).find("timestamp") == std::string::npos);
    CHECK(json::parse(a.report)["provenance"]["seed"] == 42);
}

TEST_CASE("config file supplies flags and the command line wins") {
    const auto cfg = scratch("config.json");
    std::ofstream(cfg) << R"({"jmax": 4, "profile": "smoothstep7"})";
    const auto r = dispatch({"partition-check", "--config", cfg.string(), "--jmax", "3"});
    REQUIRE(r.exit_code == cli::kPass);
    const json c = json::parse(r.report)["config"];
    CHECK(c["jmax"] == 3);
    CHECK(c["profile"] == "smoothstep7");

    std::ofstream(cfg) << R"({"nonsense": 1})";
    CHECK(dispatch({"partition-check", "--config", cfg.string()}).exit_code == cli::kUsageError);
    std::ofstream(cfg) << "{";
    CHECK(dispatch({"partition-check", "--config", cfg.string()}).exit_code == cli::kUsageError);
    CHECK(dispatch({"partition-check", "--config", scratch("absent.json").string()}).exit_code == cli::kIoError);
}

TEST_CASE("out and csv files") {
    const auto out = scratch("report.json"), csv = scratch("series.csv");
    const auto r = dispatch({"partition-check", "--out", out.string(), "--csv", csv.string()});
    CHECK(r.written);
    std::ifstream is(out);
    CHECK(json::parse(is)["command"] == "partition-check");
    std::ifstream cs(csv);
    std::string header;
    std::getline(cs, header);
    CHECK(header == "x,y");
}

TEST_CASE("pde and logschrodinger subcommands") {
    const auto r = dispatch({"pde", "--nodes", "16"});
    CHECK(r.exit_code == cli::kPass);
    const json res = json::parse(r.report)["results"];
    CHECK(res["residual"].get<double>() <= 1e-10);

    const Grid g(1, 256, 2 * std::numbers::pi);
    const auto f = scratch("f.lpgf"), h = scratch("g.lpgf");
    write_lpgf(random_band_limited(g, 4, 0.5, 0.1, 1, 0), f);
    write_lpgf(random_band_limited(g, 4, 0.5, 0.1, 2, 0), h);
    CHECK(dispatch({"logschrodinger", "--input", f.string(), h.string()}).exit_code == cli::kPass);
    CHECK(dispatch({"logschrodinger", "--input", f.string()}).exit_code == cli::kUsageError);
}
