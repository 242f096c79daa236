#include "oambsm/io.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <filesystem>

using namespace oambsm;

TEST_CASE("round12") {
    CHECK(io::round12(1.0 / 3.0) == doctest::Approx(0.333333333333).epsilon(1e-15));
    CHECK(io::round12(0.0) == 0.0);
    CHECK(io::round12(1e-300) > 0.0);
    CHECK(std::isinf(io::round12(std::numeric_limits<double>::infinity())));
}

TEST_CASE("state json round trip uses the contract field names") {
    TwoPhotonState s = hyper_bell(BellLabel::PhiMinus, 2);
    io::json j = io::state_to_json(s);
    CHECK(j.contains("subspace_m"));
    CHECK(j.contains("amplitudes"));
    CHECK(j.at("subspace_m") == 2);
    CHECK(j.at("amplitudes").size() == 4);
    CHECK(j.at("amplitudes").at(0).at(2).size() == 2); // [re, im]

    TwoPhotonState back = io::state_from_json(j);
    CHECK(back.subspace_m == 2);
    CHECK((back.amplitudes - s.amplitudes).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("table json and csv round trips") {
    const Basis bt = standard_target_basis();
    CoincidenceTable t =
        coincidence_table(hyper_bell(BellLabel::PsiMinus, 1), bt, bt);
    t.duration_s = 10.0;

    io::json j = io::table_to_json(t);
    CHECK(j.at("kind") == "probability");
    CHECK(j.at("duration_s") == 10.0);
    CoincidenceTable back = io::table_from_json(j);
    CHECK(back.kind == CoincidenceTable::Kind::Probability);
    CHECK((back.values - t.values).cwiseAbs().maxCoeff() < 1e-12);

    std::string csv = io::matrix4_to_csv(t.values);
    Mat4d m = io::matrix4_from_csv(csv);
    CHECK((m - t.values).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS((void)io::matrix4_from_csv("1,2,3\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)io::matrix4_from_csv("1,2,3,4\n1,2,3,4\n"),
                    std::invalid_argument);
}

TEST_CASE("pattern json") {
    SupportPattern p;
    p.combos = {{1, 1}, {2, 2}, {3, 3}, {4, 4}};
    io::json j = io::pattern_to_json(p);
    CHECK(j.size() == 4);
    CHECK(io::pattern_from_json(j) == p);
}

TEST_CASE("solution jsonl round trip") {
    SearchOptions options;
    options.budget = 3000;
    options.seed = 1;
    auto solutions = search(default_toolbox(), options);
    REQUIRE(!solutions.empty());

    auto path = std::filesystem::temp_directory_path() / "oambsm_sol_test.jsonl";
    io::write_solutions_jsonl(path, solutions);
    auto back = io::read_solutions_jsonl(path);
    REQUIRE(back.size() == solutions.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].canonical_key == solutions[i].canonical_key);
        CHECK(back[i].found_at == solutions[i].found_at);
        CHECK(back[i].provenance == solutions[i].provenance);
        CHECK((back[i].u.matrix - solutions[i].u.matrix).cwiseAbs().maxCoeff() <
              1e-9);
        CHECK(back[i].patterns == solutions[i].patterns);
    }
    std::filesystem::remove(path);
}

TEST_CASE("chain json lists elements with params") {
    AnalyzerChain chain = analyzer_chain({4.712, 1});
    io::json j = io::chain_to_json(chain.map.chain);
    REQUIRE(j.size() == 8);
    CHECK(j.at(0).at("kind") == "pbs");
    bool has_phase = false;
    for (const auto& item : j)
        if (item.at("kind") == "phase_plate") {
            has_phase = true;
            CHECK(item.at("params").at("arm") == 1);
        }
    CHECK(has_phase);
}
