#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include "mubent/io.hpp"
#include "mubent/mub.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using mubent::io::json;

namespace {

const std::string kCli = MUBENT_CLI_PATH;

fs::path work_dir() {
    const fs::path dir = fs::current_path() / "cli_test_tmp";
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

}  // namespace

TEST_CASE("construct writes verified MUB sets", "[cli]") {
    const fs::path dir = work_dir();
    SECTION("full set for d = 3") {
        const fs::path out = dir / "full3.json";
        REQUIRE(run_cli("construct 3 --full --out " + out.string()) == 0);
        const mubent::MubSet s = mubent::io::mub_from_json(mubent::io::read_json_file(out.string()));
        REQUIRE(s.dim() == 3);
        REQUIRE(s.count() == 4);
        const auto check = mubent::verify_mub_set(std::span(s.bases()), 1e-9);
        REQUIRE(check.is_mub);
        REQUIRE(check.worst_overlap_deviation < 1e-9);
    }
    SECTION("tensor composition for d = 6") {
        const fs::path out = dir / "tensor6.json";
        REQUIRE(run_cli("construct 6 --tensor 2 3 --out " + out.string()) == 0);
        const mubent::MubSet s = mubent::io::mub_from_json(mubent::io::read_json_file(out.string()));
        REQUIRE(s.dim() == 6);
        REQUIRE(s.count() == 3);
    }
    SECTION("full set for non-prime-power d exits 2") {
        REQUIRE(run_cli("construct 6 --full --out " + (dir / "nope.json").string()) == 2);
    }
    SECTION("missing mode exits 2") {
        REQUIRE(run_cli("construct 4 --out " + (dir / "nope2.json").string()) == 2);
    }
    SECTION("construct output is byte-identical across reruns") {
        const fs::path a = dir / "det_a.json";
        const fs::path b = dir / "det_b.json";
        REQUIRE(run_cli("construct 4 --full --out " + a.string()) == 0);
        REQUIRE(run_cli("construct 4 --full --out " + b.string()) == 0);
        REQUIRE(mubent::io::read_file(a.string()) == mubent::io::read_file(b.string()));
    }
}

TEST_CASE("bounds command on synthesized states", "[cli]") {
    const fs::path dir = work_dir();
    SECTION("maximally mixed qubit with auto MUBs saturates theorem 2") {
        const fs::path report = dir / "report_mixed.json";
        REQUIRE(run_cli("bounds --maximally-mixed --d 2 --auto 3 --report " + report.string()) ==
                0);
        const json j = mubent::io::read_json_file(report.string());
        REQUIRE(j.at("measured_shannon_sum").get<double>() == Catch::Approx(3.0).margin(1e-9));
        REQUIRE(j.at("theorem2").get<double>() == Catch::Approx(3.0).margin(1e-9));
        REQUIRE(std::abs(j.at("margins").at("theorem2").get<double>()) <= 1e-9);
    }
    SECTION("pure qubit state: bound 2, measured 2 when aligned") {
        // a basis state written to file measures exactly 2 bits
        mubent::ComplexMatrix m(2, 2);
        m(0, 0) = 1.0;
        const fs::path state = dir / "state_pure.json";
        mubent::io::write_json_file(state.string(), mubent::io::matrix_to_json(m));
        const fs::path report = dir / "report_pure.json";
        REQUIRE(run_cli("bounds --state " + state.string() + " --auto 3 --report " +
                        report.string()) == 0);
        const json j = mubent::io::read_json_file(report.string());
        REQUIRE(j.at("theorem2").get<double>() == Catch::Approx(2.0).margin(1e-9));
        REQUIRE(j.at("measured_shannon_sum").get<double>() == Catch::Approx(2.0).margin(1e-9));
        REQUIRE(j.at("qubit_special").get<double>() == Catch::Approx(2.0).margin(1e-9));
    }
    SECTION("random mixed qutrit has nonnegative margins") {
        const fs::path report = dir / "report_q3.json";
        REQUIRE(run_cli("bounds --pure-random --d 3 --auto 4 --seed 17 --report " +
                        report.string()) == 0);
        const json j = mubent::io::read_json_file(report.string());
        for (const auto& [name, margin] : j.at("margins").items()) {
            CAPTURE(name);
            REQUIRE(margin.get<double>() >= -1e-9);
        }
    }
    SECTION("dimension mismatch exits 3") {
        const fs::path mubs = dir / "mubs2.json";
        REQUIRE(run_cli("construct 2 --full --out " + mubs.string()) == 0);
        REQUIRE(run_cli("bounds --maximally-mixed --d 3 --mubs " + mubs.string()) == 3);
    }
    SECTION("non-MUB input file exits 4") {
        json j;
        j["dim"] = 2;
        j["bases"] = json::array();
        j["bases"].push_back(
            mubent::io::matrix_to_json(mubent::ComplexMatrix::identity(2)));
        j["bases"].push_back(
            mubent::io::matrix_to_json(mubent::ComplexMatrix::identity(2)));
        const fs::path bad = dir / "bad_mubs.json";
        mubent::io::write_json_file(bad.string(), j);
        REQUIRE(run_cli("bounds --maximally-mixed --d 2 --mubs " + bad.string()) == 4);
    }
}

TEST_CASE("campaign command and exit codes", "[cli]") {
    const fs::path dir = work_dir();
    SECTION("clean campaign exits 0 and is deterministic") {
        const fs::path a = dir / "campaign_a.json";
        const fs::path b = dir / "campaign_b.json";
        REQUIRE(run_cli("campaign --d 2 --M 3 --samples 2000 --seed 7 --out " + a.string()) == 0);
        REQUIRE(run_cli("campaign --d 2 --M 3 --samples 2000 --seed 7 --out " + b.string()) == 0);
        REQUIRE(mubent::io::read_file(a.string()) == mubent::io::read_file(b.string()));
        const json j = mubent::io::read_json_file(a.string());
        REQUIRE(j.at("violations_total") == 0);
        REQUIRE(j.at("config").at("seed") == 7);
    }
    SECTION("per-sample CSV export") {
        const fs::path csv = dir / "samples.csv";
        REQUIRE(run_cli("campaign --d 2 --M 2 --samples 50 --seed 3 --csv " + csv.string()) == 0);
        const std::string content = mubent::io::read_file(csv.string());
        REQUIRE(content.rfind("sample,purity,total_ic,shannon_sum,renyi2_sum,tsallis2_sum\n",
                              0) == 0);
    }
    SECTION("corrupted set campaign exits 5") {
        const mubent::MubSet bad = test_util::corrupted_set(mubent::construct_full(2), 2, 0.1);
        const fs::path bad_path = dir / "corrupted.json";
        mubent::io::write_json_file(bad_path.string(), mubent::io::mub_to_json(bad));
        REQUIRE(run_cli("campaign --d 2 --M 3 --samples 2000 --seed 11 --mubs " +
                        bad_path.string() + " --unbiasedness-tol 0.5") == 5);
    }
    SECTION("corrupted set without a tolerance override exits 4") {
        const mubent::MubSet bad = test_util::corrupted_set(mubent::construct_full(2), 2, 0.1);
        const fs::path bad_path = dir / "corrupted4.json";
        mubent::io::write_json_file(bad_path.string(), mubent::io::mub_to_json(bad));
        REQUIRE(run_cli("campaign --d 2 --M 3 --samples 100 --seed 11 --mubs " +
                        bad_path.string()) == 4);
    }
}

TEST_CASE("tighten command", "[cli]") {
    const fs::path dir = work_dir();
    const fs::path out = dir / "tighten.json";
    REQUIRE(run_cli("tighten --d 2 --M 2 --restarts 24 --seed 1 --bound maassen_uffink --out " +
                    out.string()) == 0);
    const json j = mubent::io::read_json_file(out.string());
    REQUIRE(j.at("best_value").get<double>() <= 1.0 + 1e-3);
    REQUIRE(j.at("bound_value").get<double>() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(j.at("gap").get<double>() >= -1e-9);
}

TEST_CASE("separable command", "[cli]") {
    const fs::path dir = work_dir();
    const fs::path out = dir / "separable.json";
    REQUIRE(run_cli("separable --dA 2 --dB 2 --M 3 --samples 300 --seed 3 --out " +
                    out.string()) == 0);
    const json j = mubent::io::read_json_file(out.string());
    REQUIRE(j.at("bound") == 4.0);
    REQUIRE(j.at("separable_min_sum").get<double>() >= 4.0 - 1e-9);
    bool singlet_flagged = false;
    for (const auto& probe : j.at("probes")) {
        if (probe.at("name") == "singlet") {
            singlet_flagged = probe.at("flagged").get<bool>();
        }
    }
    REQUIRE(singlet_flagged);
}

TEST_CASE("scan command", "[cli]") {
    const fs::path dir = work_dir();
    const fs::path out = dir / "scan.csv";
    REQUIRE(run_cli("scan --d-range 2..5 --M-range 2..6 --purity-grid 5 --out " + out.string()) ==
            0);
    const std::string content = mubent::io::read_file(out.string());
    std::size_t lines = 0;
    for (char c : content) {
        if (c == '\n') ++lines;
    }
    REQUIRE(lines == 4 * 5 * 5 + 1);
    const std::string header = content.substr(0, content.find('\n'));
    REQUIRE(header ==
            "d,M,purity,maassen_uffink,grouped_half_log,theorem2,simple_state_dep,"
            "simple_state_indep,prop2_closed,prop2_rewritten,sanchez_ruiz,qubit_special,"
            "renyi_sum,tsallis_sum,strongest,dominance_predicate,dominance_observed");
}

TEST_CASE("unknown flags are rejected", "[cli]") {
    REQUIRE(run_cli("construct 3 --full --out /tmp/x.json --no-such-flag") != 0);
    REQUIRE(run_cli("nonsense-subcommand") != 0);
}
