#include <catch2/catch_amalgamated.hpp>

#include <cstring>

#include "mubent/io.hpp"
#include "test_util.hpp"

using mubent::ComplexMatrix;
using mubent::cplx;
using mubent::io::json;

TEST_CASE("matrix json round trip is bit exact", "[io]") {
    mubent::rng::Stream stream(55, "test-io");
    ComplexMatrix m(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            m(i, j) = stream.next_complex_gaussian();
        }
    }
    const json j = mubent::io::matrix_to_json(m);
    REQUIRE(j.at("rows") == 3);
    REQUIRE(j.at("cols") == 3);
    const ComplexMatrix back = mubent::io::matrix_from_json(json::parse(j.dump()));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j2 = 0; j2 < 3; ++j2) {
            REQUIRE(std::memcmp(&m(i, j2), &back(i, j2), sizeof(cplx)) == 0);
        }
    }
}

TEST_CASE("matrix json rejects malformed payloads", "[io]") {
    json j = {{"rows", 2}, {"cols", 2}, {"re", {1.0, 0.0, 0.0}}, {"im", {0.0, 0.0, 0.0, 0.0}}};
    REQUIRE_THROWS_AS(mubent::io::matrix_from_json(j), std::invalid_argument);
    json missing = {{"rows", 2}, {"cols", 2}};
    REQUIRE_THROWS_AS(mubent::io::matrix_from_json(missing), json::exception);
}

TEST_CASE("mub set json round trip preserves content and metadata", "[io]") {
    const mubent::MubSet s = mubent::construct_full(3);
    const json j = mubent::io::mub_to_json(s);
    REQUIRE(j.at("dim") == 3);
    REQUIRE(j.at("bases").size() == 4);
    REQUIRE(j.at("metadata").at("construction") == "pauli_classes");

    const mubent::MubSet back = mubent::io::mub_from_json(j);
    REQUIRE(back.count() == 4);
    REQUIRE(back.metadata().construction == "pauli_classes");
    REQUIRE(back.metadata().seeded);
    REQUIRE(mubent::io::mub_to_json(back).dump() == j.dump());
}

TEST_CASE("mub set import verifies unbiasedness", "[io]") {
    std::vector<mubent::Basis> bases;
    bases.emplace_back(ComplexMatrix::identity(2));
    bases.emplace_back(ComplexMatrix::identity(2));
    json j;
    j["dim"] = 2;
    j["bases"] = json::array();
    for (const auto& b : bases) {
        j["bases"].push_back(mubent::io::matrix_to_json(b.vectors()));
    }
    REQUIRE_THROWS_AS(mubent::io::mub_from_json(j), std::invalid_argument);
    // but a loose tolerance accepts it
    REQUIRE_NOTHROW(mubent::io::mub_from_json(j, 1.0));
}

TEST_CASE("probability table exports", "[io]") {
    const mubent::MubSet s = mubent::fourier_pair(2);
    mubent::ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    const auto table = mubent::probability_table(mubent::DensityMatrix(std::move(m)), s);

    const json j = mubent::io::probability_table_to_json(table);
    REQUIRE(j.at("M") == 2);
    REQUIRE(j.at("d") == 2);
    REQUIRE(j.at("p").size() == 2);
    REQUIRE(j.at("source").contains("state_hash"));

    const std::string csv = mubent::io::probability_table_to_csv(table);
    REQUIRE(csv.rfind("basis,outcome,probability\n", 0) == 0);
    REQUIRE(csv.find("1,1,1\n") != std::string::npos);
    REQUIRE(csv.find("2,1,0.5") != std::string::npos);
}

TEST_CASE("bound report json carries the contract fields", "[io]") {
    const auto report =
        mubent::evaluate_bounds(test_util::random_density(2, 61, 0), mubent::construct_full(2));
    const json j = mubent::io::bound_report_to_json(report);
    for (const char* key :
         {"theorem2", "simple_state_dep", "simple_state_indep", "prop2_closed",
          "prop2_rewritten", "renyi_sum", "tsallis_sum", "measured_shannon_sum", "margins",
          "inputs", "qubit_special", "sanchez_ruiz", "grouped_half_log"}) {
        CAPTURE(key);
        REQUIRE(j.contains(key));
    }
    REQUIRE(j.at("inputs").at("M") == 3);
    REQUIRE(j.at("inputs").at("variant") == "state_dependent");
    REQUIRE(j.at("margins").contains("theorem2"));

    const std::string csv = mubent::io::bound_report_to_csv(report);
    REQUIRE(csv.rfind("name,value,margin\n", 0) == 0);
    REQUIRE(csv.find("theorem2,") != std::string::npos);
}

TEST_CASE("campaign summary json structure", "[io]") {
    mubent::CampaignConfig cfg;
    cfg.d = 2;
    cfg.M = 3;
    cfg.n_samples = 50;
    cfg.seed = 8;
    const auto summary = mubent::run_verification_campaign(cfg, mubent::construct_full(2));
    const json j = mubent::io::campaign_summary_to_json(summary);
    REQUIRE(j.at("config").at("d") == 2);
    REQUIRE(j.at("config").at("seed") == 8);
    REQUIRE(j.at("config").at("ensemble") == "haar_pure");
    REQUIRE(j.contains("violations_total"));
    REQUIRE(j.at("inequalities").contains("theorem1_ic"));
    REQUIRE(j.at("inequalities").at("theorem1_ic").contains("min_margin"));
    REQUIRE(j.at("histograms").size() == 2);
    for (const auto& h : j.at("histograms")) {
        REQUIRE(h.at("bin_edges").size() == h.at("counts").size() + 1);
    }
}

TEST_CASE("scan csv header matches the contract exactly", "[io]") {
    const auto rows = mubent::bound_comparison_scan(2, 2, 2, 3, 2);
    const std::string csv = mubent::io::scan_rows_to_csv(rows);
    const std::string header = csv.substr(0, csv.find('\n'));
    REQUIRE(header ==
            "d,M,purity,maassen_uffink,grouped_half_log,theorem2,simple_state_dep,"
            "simple_state_indep,prop2_closed,prop2_rewritten,sanchez_ruiz,qubit_special,"
            "renyi_sum,tsallis_sum,strongest,dominance_predicate,dominance_observed");
    // one header plus one line per row
    std::size_t lines = 0;
    for (char c : csv) {
        if (c == '\n') ++lines;
    }
    REQUIRE(lines == rows.size() + 1);
}

TEST_CASE("separability summary json", "[io]") {
    const auto summary = mubent::separability_experiment(2, 2, 3, 20, 0, 13);
    const json j = mubent::io::separability_summary_to_json(summary);
    REQUIRE(j.at("bound") == 4.0);
    REQUIRE(j.at("probes").size() == 2);
    REQUIRE(j.at("probes")[0].contains("flagged"));
}
