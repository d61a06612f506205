#ifdef MOMSUM_CLI_PATH

#include "momsum/io.hpp"

#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using momsum::io::Json;

namespace {

std::string data(const std::string& rel) { return std::string(MOMSUM_DATA_DIR) + "/" + rel; }

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("momsum_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string(MOMSUM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const fs::path& dir, const Json& cfg) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << cfg.dump(2);
    return p;
}

}  // namespace

TEST_CASE("cli solve writes the closed-form solution", "[cli]") {
    const auto out = fresh_dir("solve");
    REQUIRE(run("solve --config " + data("configs/solve.json") + " --out " + out.string() + " --mode rational") == 0);
    const Json j = momsum::io::read_json_file(out / "closed-form.json");
    CHECK(j["mode"] == "rational");
    CHECK(j["solution"]["residual"] == 0.0);
    const auto w = momsum::io::bivariate_from_json<momsum::Rational>(j["solution"]["series"]);
    CHECK(w(0, 2) == 1);
    CHECK(w(1, 0) == 2);
    CHECK(w(0, 0) == 0);
    CHECK(j["transformed_residual"] == 0.0);
}

TEST_CASE("cli borel-sum of the Euler series", "[cli]") {
    const auto out = fresh_dir("borel");
    REQUIRE(run("borel-sum --config " + data("configs/borel_sum.json") + " --out " + out.string()) == 0);
    const Json j = momsum::io::read_json_file(out / "euler.json");
    const auto& pt = j["result"]["points"][1];
    CHECK(pt["z"][0] == 0.1);
    CHECK_THAT(pt["sum"][0].get<double>(), Catch::Matchers::WithinAbs(0.91563, 1e-5));
    CHECK(slurp(out / "euler.csv").rfind("z_re,z_im,sum_re,sum_im,err_est\n", 0) == 0);
    CHECK(fs::exists(out / "geometric.txt"));
}

TEST_CASE("cli exit codes", "[cli]") {
    const auto out = fresh_dir("codes");
    CHECK(run("borel-sum --config " + data("configs/borel_sum_singular.json") + " --out " + out.string()) == 4);
    const Json err = momsum::io::read_json_file(out / "euler-singular.error.json");
    CHECK(err["kind"] == "singular_direction");
    CHECK(err["exit_code"] == 4);

    Json cfg = momsum::io::read_json_file(data("configs/borel_sum.json"));
    cfg["experiments"][0]["colour"] = "blue";
    CHECK(run("borel-sum --config " + write_config(out, cfg).string() + " --out " + out.string()) == 2);
    CHECK(momsum::io::read_json_file(out / "euler.error.json")["message"].get<std::string>().find("colour") !=
          std::string::npos);

    cfg = momsum::io::read_json_file(data("configs/borel_sum.json"));
    cfg.erase("schema");
    CHECK(run("borel-sum --config " + write_config(out, cfg).string() + " --out " + out.string()) == 2);
    CHECK(run("solve --config " + data("configs/borel_sum.json") + " --out " + out.string()) == 2);
    CHECK(run("solve --config " + (out / "absent.json").string()) == 2);
    CHECK(run("frobnicate") == 2);
}

TEST_CASE("cli analyze-growth on a solver trace", "[cli]") {
    const auto out = fresh_dir("growth");
    REQUIRE(run("solve --config " + data("configs/solve.json") + " --out " + out.string()) == 0);
    const Json cfg = {{"schema", "momsum.config/1"},
                      {"command", "analyze-growth"},
                      {"name", "divergent-trace"},
                      {"solution_file", (out / "divergent.json").string()},
                      {"trace", 0},
                      {"window", {15, 30}}};
    REQUIRE(run("analyze-growth --config " + write_config(out, cfg).string() + " --out " + out.string()) == 0);
    const Json j = momsum::io::read_json_file(out / "divergent-trace.json");
    CHECK_THAT(j["fit"]["s_est"].get<double>(), Catch::Matchers::WithinAbs(2.0, 0.2));
}

TEST_CASE("cli runs are reproducible", "[cli]") {
    const auto a = fresh_dir("repro_a"), b = fresh_dir("repro_b");
    const std::string kc = "kernel-check --config " + data("configs/kernel_check.json") + " --seed 7";
    REQUIRE(run(kc + " --out " + a.string()) == 0);
    REQUIRE(run(kc + " --out " + b.string() + " --jobs 2") == 0);
    CHECK(slurp(a / "order-1.json") == slurp(b / "order-1.json"));
    CHECK(slurp(a / "order-0.5.json") == slurp(b / "order-0.5.json"));

    const std::string cs = "check-sequence --config " + data("configs/check_sequence.json");
    REQUIRE(run(cs + " --out " + a.string() + " --jobs 1") == 0);
    REQUIRE(run(cs + " --out " + b.string() + " --jobs 4") == 0);
    for (const char* name : {"gevrey-0.5", "gevrey-1", "gevrey-1.5", "q-half"})
        CHECK(slurp(a / (std::string(name) + ".json")) == slurp(b / (std::string(name) + ".json")));
    const Json q = momsum::io::read_json_file(a / "q-half.json");
    CHECK(q["report"]["snq_verdict"] == "fail");
}

#endif
