#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "json.hpp"

#include "interid/errors.hpp"
#include "interid/json_io.hpp"
#include "interid/question_bank.hpp"
#include "helpers.hpp"

using namespace interid;

namespace {

PersonRecord full_person(const AttributeSchema& schema, Rng& rng) {
    GeneratorParams params;
    params.p_unknown = 0.0;
    params.noise_sigma = 0.0;
    return generate_person(rng, schema, params);
}

}  // namespace

TEST_CASE("decompose skips slots covered by the initial description") {
    const auto schema = testing_support::mid_schema();
    Rng rng(1);
    const auto person = full_person(schema, rng);
    const auto initial = coarse_description(person, schema);  // covers shirt + pants
    const auto subs = decompose(person, initial, schema);
    CHECK(subs.size() == schema.slot_count() - initial.observations.size());
    for (const SubCaption& sub : subs) {
        CHECK_FALSE(sub.in_initial);
        for (const Observation& obs : initial.observations) {
            CHECK(sub.slot != obs.slot);
        }
    }
}

TEST_CASE("decompose with full initial coverage is empty") {
    AttributeSchema schema({
        {"shirt", {"red", "blue"}, true, true},
        {"shoes", {"white", "black"}, true, true},
    });
    Rng rng(2);
    const auto person = full_person(schema, rng);
    const auto initial = coarse_description(person, schema);
    CHECK(decompose(person, initial, schema).empty());
}

TEST_CASE("decompose never repeats a slot") {
    const auto schema = testing_support::mid_schema();
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        GeneratorParams params;
        params.p_unknown = 0.3;
        const auto person = generate_person(rng, schema, params);
        const auto initial = coarse_description(person, schema);
        const auto subs = decompose(person, initial, schema);
        std::set<std::string> slots;
        for (const SubCaption& sub : subs) {
            CHECK(slots.insert(sub.slot).second);
            CHECK(person.witness_known.contains(sub.slot));
        }
    }
}

TEST_CASE("degenerate mix produces only descriptive questions") {
    const auto schema = testing_support::mid_schema();
    Rng rng(4);
    const auto person = full_person(schema, rng);
    const auto subs = decompose(person, InitialDescription{}, schema);
    Rng bank_rng(5);
    const auto bank = build_bank(subs, {1.0, 0.0, 0.0}, schema, bank_rng);
    REQUIRE(bank.size() == subs.size());
    for (const Question& q : bank) {
        CHECK(q.qtype == QuestionType::descriptive);
    }
}

TEST_CASE("question type frequencies follow the mix") {
    const auto schema = testing_support::mid_schema();
    Rng person_rng(6);
    const auto person = full_person(schema, person_rng);
    const auto subs = decompose(person, InitialDescription{}, schema);
    REQUIRE(subs.size() == 10);

    Rng rng(11);
    int counts[3] = {0, 0, 0};
    int total = 0;
    while (total < 10000) {
        const auto bank = build_bank(subs, {0.5, 0.4, 0.1}, schema, rng);
        for (const Question& q : bank) {
            counts[static_cast<int>(q.qtype)]++;
        }
        total += static_cast<int>(bank.size());
    }
    CHECK(std::abs(double(counts[0]) / total - 0.5) < 0.02);
    CHECK(std::abs(double(counts[1]) / total - 0.4) < 0.02);
    CHECK(std::abs(double(counts[2]) / total - 0.1) < 0.02);
}

TEST_CASE("yes/no assumptions are true about half the time") {
    const auto schema = testing_support::mid_schema();
    Rng person_rng(7);
    const auto person = full_person(schema, person_rng);
    const auto subs = decompose(person, InitialDescription{}, schema);

    Rng rng(13);
    int yes = 0, total = 0;
    while (total < 20000) {
        const auto bank = build_bank(subs, {0.0, 1.0, 0.0}, schema, rng);
        for (const Question& q : bank) {
            REQUIRE(q.assumed_value.has_value());
            if (*q.assumed_value == person.attrs.at(q.slot)) ++yes;
            ++total;
        }
    }
    CHECK(std::abs(double(yes) / total - 0.5) < 0.02);
}

TEST_CASE("mcq on a four-value slot shuffles the whole vocabulary") {
    AttributeSchema schema({
        {"coarse", {"x", "y"}, true, true},
        {"shoes", {"white", "black", "brown", "blue"}, true, false},
    });
    std::vector<SubCaption> subs = {{"shoes", "brown", false}};
    Rng rng(17);
    const auto bank = build_bank(subs, {0.0, 0.0, 1.0}, schema, rng);
    REQUIRE(bank.size() == 1);
    REQUIRE(bank[0].qtype == QuestionType::mcq);
    std::set<std::string> options(bank[0].options.begin(), bank[0].options.end());
    CHECK(options == std::set<std::string>{"white", "black", "brown", "blue"});
}

TEST_CASE("mcq on a small vocabulary falls back to yes/no") {
    AttributeSchema schema({
        {"coarse", {"x", "y"}, true, true},
        {"hat", {"none", "cap", "beanie"}, true, false},
    });
    std::vector<SubCaption> subs = {{"hat", "cap", false}};
    Rng rng(19);
    const auto bank = build_bank(subs, {0.0, 0.0, 1.0}, schema, rng);
    REQUIRE(bank.size() == 1);
    CHECK(bank[0].qtype == QuestionType::yesno);
    CHECK(bank[0].assumed_value.has_value());
}

TEST_CASE("bank questions target distinct slots with sequential ids") {
    const auto schema = testing_support::mid_schema();
    Rng person_rng(23);
    const auto person = full_person(schema, person_rng);
    const auto subs = decompose(person, InitialDescription{}, schema);
    Rng rng(29);
    const auto bank = build_bank(subs, {0.5, 0.4, 0.1}, schema, rng);
    REQUIRE(bank.size() == subs.size());
    std::set<std::string> slots;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        CHECK(bank[i].id == static_cast<int>(i));
        CHECK(slots.insert(bank[i].slot).second);
        CHECK_FALSE(bank[i].text.empty());
    }
}

TEST_CASE("bank construction is deterministic for a fixed seed") {
    const auto schema = testing_support::mid_schema();
    Rng person_rng(31);
    const auto person = full_person(schema, person_rng);
    const auto subs = decompose(person, InitialDescription{}, schema);
    Rng rng_a(37), rng_b(37);
    const auto bank_a = build_bank(subs, {0.5, 0.4, 0.1}, schema, rng_a);
    const auto bank_b = build_bank(subs, {0.5, 0.4, 0.1}, schema, rng_b);
    CHECK(bank_a == bank_b);
}

TEST_CASE("a mix that does not sum to one is rejected") {
    const auto schema = testing_support::mid_schema();
    std::vector<SubCaption> subs = {{"shoes", "white", false}};
    Rng rng(41);
    CHECK_THROWS_AS(build_bank(subs, {0.5, 0.4, 0.2}, schema, rng), ArgumentError);
}

TEST_CASE("exported banks parse back with every field intact") {
    const auto schema = testing_support::mid_schema();
    Rng person_rng(43);
    const auto person = full_person(schema, person_rng);
    Rng rng(47);
    const auto bank =
        build_bank(decompose(person, InitialDescription{}, schema), {0.3, 0.3, 0.4}, schema, rng);

    const auto path = std::filesystem::temp_directory_path() /
                      ("interid-bank-" + std::to_string(std::rand()) + ".jsonl");
    export_bank(bank, path);

    std::ifstream in(path);
    std::string line;
    std::size_t i = 0;
    while (std::getline(in, line)) {
        REQUIRE(i < bank.size());
        CHECK(question_from_json(nlohmann::json::parse(line)) == bank[i]);
        ++i;
    }
    CHECK(i == bank.size());
    std::filesystem::remove(path);
}
