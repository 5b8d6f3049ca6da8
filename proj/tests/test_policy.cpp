#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"

#include "interid/errors.hpp"
#include "interid/policy.hpp"
#include "interid/question_bank.hpp"
#include "interid/session.hpp"
#include "interid/witness.hpp"
#include "helpers.hpp"

using namespace interid;

namespace {

Question bank_question(int id, const std::string& slot, QuestionType type = QuestionType::descriptive,
                       std::optional<std::string> assumed = std::nullopt) {
    Question q;
    q.id = id;
    q.qtype = type;
    q.slot = slot;
    q.assumed_value = std::move(assumed);
    q.text = "about " + slot;
    return q;
}

// Independent one-step enumerator. Re-derives the witness contract, the
// additive context encoding, cosine, and a full-sort rank from scratch, then
// minimizes (resulting rank, question id).
struct BruteForce {
    static std::vector<Observation> simulate_answer(const Question& q, const PersonRecord& person) {
        if (!person.witness_known.contains(q.slot)) return {};
        const std::string truth = person.attrs.at(q.slot);
        if (q.qtype == QuestionType::yesno && q.assumed_value && *q.assumed_value != truth) {
            return {{q.slot, *q.assumed_value, -1}, {q.slot, truth, +1}};
        }
        return {{q.slot, truth, +1}};
    }

    static int select(const PolicyState& state, const DialogueState& dialogue,
                      std::size_t target, const Gallery& gallery, const PersonRecord& person) {
        const AttributeSchema& schema = gallery.schema;
        std::vector<float> base(schema.dimension(), 0.0f);
        for (const Observation& obs : dialogue.initial.observations)
            base[schema.coordinate(obs.slot, obs.value)] += 1.0f;
        for (const auto& [q, a] : dialogue.turns) {
            if (a.unknown) continue;
            for (const Observation& obs : a.observations)
                base[schema.coordinate(obs.slot, obs.value)] += float(obs.polarity);
        }

        int best_id = -1;
        std::size_t best_rank = SIZE_MAX;
        for (const Question& q : state.bank()) {
            if (q.exhausted || state.asked().contains(q.id)) continue;
            std::vector<float> ctx = base;
            for (const Observation& obs : simulate_answer(q, person))
                ctx[schema.coordinate(obs.slot, obs.value)] += float(obs.polarity);

            std::vector<double> sims(gallery.size());
            for (std::size_t i = 0; i < gallery.size(); ++i) {
                sims[i] = testing_support::cosine_oracle(
                    ctx, std::vector<float>(gallery.row(i).begin(), gallery.row(i).end()));
            }
            const std::size_t rank = testing_support::rank_oracle(sims, target);
            if (rank < best_rank || (rank == best_rank && best_id < 0)) {
                best_rank = rank;
                best_id = q.id;
            }
        }
        return best_id;
    }
};

}  // namespace

TEST_CASE("a single eligible question is returned regardless of effect") {
    const auto schema = testing_support::tiny_schema();
    const Gallery gallery = testing_support::make_gallery(schema, {
        {{"shirt", "red"}, {"shoes", "white"}},
        {{"shirt", "blue"}, {"shoes", "black"}},
    });
    PolicyState state({bank_question(0, "shoes")});
    DialogueState dialogue;
    const auto q = looking_forward_select(state, dialogue, 0, gallery, gallery.persons[0]);
    CHECK(q.id == 0);
}

TEST_CASE("lookahead prefers the slot that separates the lookalikes") {
    // Persons 0 and 1 share the shirt; only shoes separate them. Everyone
    // shares the hat, so asking about it gains nothing.
    AttributeSchema schema({
        {"shirt", {"red", "blue"}, true, true},
        {"shoes", {"white", "black", "green"}, true, false},
        {"hat", {"cap", "beanie"}, true, false},
    });
    const Gallery gallery = testing_support::make_gallery(schema, {
        {{"shirt", "red"}, {"shoes", "white"}, {"hat", "cap"}},
        {{"shirt", "red"}, {"shoes", "black"}, {"hat", "cap"}},
        {{"shirt", "blue"}, {"shoes", "green"}, {"hat", "cap"}},
    });
    DialogueState dialogue;
    dialogue.initial.observations = {{"shirt", "red", +1}};
    PolicyState state({bank_question(0, "hat"), bank_question(1, "shoes")});
    const auto q =
        looking_forward_select(state, dialogue, 1, gallery, gallery.persons[1]);
    CHECK(q.slot == "shoes");
}

TEST_CASE("lookahead matches the brute-force enumerator on seeded instances") {
    const auto schema = testing_support::mid_schema();
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GeneratorParams params;
        params.p_unknown = 0.2;
        const Gallery gallery = generate_gallery(schema, 100, params, 1000 + seed);
        Rng rng(seed);
        const std::size_t target = rng.uniform_int(gallery.size());
        const PersonRecord& person = gallery.persons[target];

        DialogueState dialogue;
        dialogue.initial = coarse_description(person, schema);
        const auto subs = decompose(person, dialogue.initial, schema);
        if (subs.empty()) continue;
        PolicyState state(build_bank(subs, {0.5, 0.4, 0.1}, schema, rng));
        REQUIRE(state.bank().size() <= 9);

        // Wander a random number of rounds in, answering with the witness.
        const std::size_t warmup = rng.uniform_int(3);
        for (std::size_t step = 0; step < warmup && !state.exhausted(); ++step) {
            const Question q = random_select(state, rng);
            state.mark_asked(q.id);
            dialogue.turns.emplace_back(q, answer_question(q, person, schema));
        }
        if (state.exhausted()) continue;

        const Question chosen =
            looking_forward_select(state, dialogue, target, gallery, person);
        CHECK(chosen.id == BruteForce::select(state, dialogue, target, gallery, person));
        ++checked;
    }
    CHECK(checked >= 8);
}

TEST_CASE("lookahead's choice is rank-optimal against every alternative") {
    const auto schema = testing_support::mid_schema();
    GeneratorParams params;
    const Gallery gallery = generate_gallery(schema, 60, params, 77);
    Rng rng(7);
    const std::size_t target = 11;
    const PersonRecord& person = gallery.persons[target];
    DialogueState dialogue;
    dialogue.initial = coarse_description(person, schema);
    PolicyState state(
        build_bank(decompose(person, dialogue.initial, schema), {1.0, 0.0, 0.0}, schema, rng));
    if (state.exhausted()) return;

    const Question chosen = looking_forward_select(state, dialogue, target, gallery, person);
    auto rank_after = [&](const Question& q) {
        DialogueState probe = dialogue;
        probe.turns.emplace_back(q, answer_question(q, person, schema));
        return rank_of(target, encode_context(probe, schema), gallery);
    };
    const std::size_t chosen_rank = rank_after(chosen);
    for (const Question* q : state.eligible()) {
        CHECK(chosen_rank <= rank_after(*q));
    }
}

TEST_CASE("entropy ties fall to the lowest question id") {
    const auto schema = testing_support::tiny_schema();
    const Gallery gallery = testing_support::make_gallery(schema, {
        {{"shirt", "red"}, {"shoes", "white"}},
        {{"shirt", "red"}, {"shoes", "white"}},
    });
    PolicyState state({bank_question(0, "shirt"), bank_question(1, "shoes")});
    CandidateSet candidates{{0, 1}};
    const auto q = entropy_select(state, candidates, gallery);
    CHECK(q.id == 0);  // all entropies zero
}

TEST_CASE("entropy prefers the split slot over the constant one") {
    AttributeSchema schema({
        {"shirt", {"red", "blue"}, true, true},
        {"shoes", {"white", "black"}, true, false},
        {"hat", {"cap", "beanie"}, true, false},
    });
    const Gallery gallery = testing_support::make_gallery(schema, {
        {{"shirt", "red"}, {"shoes", "white"}, {"hat", "cap"}},
        {{"shirt", "red"}, {"shoes", "white"}, {"hat", "cap"}},
        {{"shirt", "red"}, {"shoes", "black"}, {"hat", "cap"}},
        {{"shirt", "red"}, {"shoes", "black"}, {"hat", "cap"}},
    });
    PolicyState state({bank_question(0, "hat"), bank_question(1, "shoes")});
    CandidateSet candidates{{0, 1, 2, 3}};
    CHECK(entropy_select(state, candidates, gallery).slot == "shoes");
}

TEST_CASE("entropy choice equals an independent tally") {
    const auto schema = testing_support::mid_schema();
    const Gallery gallery = generate_gallery(schema, 40, GeneratorParams{}, 91);
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Question> bank;
        for (std::size_t s = 0; s < schema.slot_count(); ++s)
            bank.push_back(bank_question(int(s), schema.slot(s).name));
        PolicyState state(std::move(bank));

        CandidateSet candidates;
        for (std::size_t idx : rng.sample_distinct(4, gallery.size()))
            candidates.gallery_indices.push_back(idx);

        const Question chosen = entropy_select(state, candidates, gallery);

        // Recount entropies directly.
        double best = -1.0;
        int best_id = -1;
        for (const Question* q : state.eligible()) {
            std::map<std::string, int> tally;
            for (std::size_t idx : candidates.gallery_indices)
                tally[gallery.persons[idx].attrs.at(q->slot)]++;
            double h = 0.0;
            for (auto& [v, n] : tally) {
                const double p = n / 4.0;
                h -= p * std::log2(p);
            }
            if (h > best + 1e-12) {
                best = h;
                best_id = q->id;
            }
        }
        CHECK(chosen.id == best_id);
    }
}

TEST_CASE("random selection is uniform over the eligible set") {
    PolicyState state({bank_question(0, "a"), bank_question(1, "b"), bank_question(2, "c"),
                       bank_question(3, "d")});
    Rng rng(23);
    std::map<int, int> counts;
    const int n = 10000;
    for (int i = 0; i < n; ++i) counts[random_select(state, rng).id]++;
    for (const auto& [id, count] : counts) {
        CHECK(std::abs(double(count) / n - 0.25) < 0.02);
    }
}

TEST_CASE("random selection is reproducible and respects exhaustion") {
    PolicyState state({bank_question(0, "a"), bank_question(1, "b")});
    state.mark_exhausted(0);
    Rng rng(29);
    CHECK(random_select(state, rng).id == 1);

    PolicyState singleton({bank_question(5, "x")});
    Rng rng2(31);
    CHECK(random_select(singleton, rng2).id == 5);
}

TEST_CASE("policies fail cleanly on an exhausted bank") {
    PolicyState state({bank_question(0, "a")});
    state.mark_asked(0);
    Rng rng(1);
    CHECK_THROWS_AS(random_select(state, rng), BankExhaustedError);
    const Gallery gallery = testing_support::make_gallery(testing_support::tiny_schema(),
                                                          {{{"shirt", "red"}, {"shoes", "white"}}});
    CandidateSet candidates{{0}};
    CHECK_THROWS_AS(entropy_select(state, candidates, gallery), BankExhaustedError);
    CHECK_THROWS_AS(
        looking_forward_select(state, DialogueState{}, 0, gallery, gallery.persons[0]),
        BankExhaustedError);
}

TEST_CASE("no policy returns an asked or exhausted question") {
    const auto schema = testing_support::mid_schema();
    const Gallery gallery = generate_gallery(schema, 30, GeneratorParams{}, 47);
    const PersonRecord& person = gallery.persons[3];
    DialogueState dialogue;
    dialogue.initial = coarse_description(person, schema);
    Rng rng(53);
    PolicyState state(
        build_bank(decompose(person, dialogue.initial, schema), {0.5, 0.4, 0.1}, schema, rng));

    std::set<int> seen;
    while (!state.exhausted()) {
        const Question q = random_select(state, rng);
        CHECK(seen.insert(q.id).second);
        state.mark_asked(q.id);
    }
}

TEST_CASE("supervision export pairs each round with its pre-round dialogue") {
    const auto schema = testing_support::mid_schema();
    GeneratorParams params;
    params.p_unknown = 0.0;
    const Gallery gallery = generate_gallery(schema, 50, params, 59);
    SessionConfig config;
    config.policy = "lookahead";
    config.k_base = 20;
    config.max_rounds = 5;
    const auto transcript = run_session(gallery, "id0_0", config, 900, "sup-test");
    REQUIRE(transcript.rounds.size() == 5);

    const auto examples = export_supervision(transcript);
    REQUIRE(examples.size() == 5);
    std::set<int> target_ids;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        CHECK(examples[i].round == int(i) + 1);
        CHECK(examples[i].turns.size() == i);  // strictly growing dialogue
        CHECK(target_ids.insert(examples[i].target_question_id).second);
        CHECK(examples[i].candidate_ids.size() == transcript.rounds[i].candidate_ids.size());
    }
}

TEST_CASE("supervision export is byte-identical across reruns") {
    const auto schema = testing_support::mid_schema();
    const Gallery gallery = generate_gallery(schema, 50, GeneratorParams{}, 61);
    SessionConfig config;
    config.policy = "lookahead";
    config.k_base = 20;

    std::string dumps[2];
    for (int run = 0; run < 2; ++run) {
        const auto transcript = run_session(gallery, "id1_0", config, 901, "sup-rerun");
        for (const auto& ex : export_supervision(transcript)) dumps[run] += ex.to_json().dump() + "\n";
    }
    CHECK(dumps[0] == dumps[1]);
}

TEST_CASE("questioner request lays out candidate and similar persons") {
    const auto schema = testing_support::tiny_schema();
    const Gallery gallery = testing_support::make_gallery(schema, {
        {{"shirt", "red"}, {"shoes", "white"}},
        {{"shirt", "blue"}, {"shoes", "white"}},
        {{"shirt", "red"}, {"shoes", "black"}},
        {{"shirt", "blue"}, {"shoes", "black"}},
    });
    CandidateSet candidates{{2, 0, 1, 3}};
    DialogueState dialogue;
    dialogue.initial.text = "I saw a person; their shirt was red.";

    const auto payload = format_questioner_request(candidates, gallery, dialogue, 1);
    const std::string prompt = payload.at("prompt").get<std::string>();
    CHECK(prompt.find("[Candidate Person] ") != std::string::npos);
    CHECK(prompt.find("[Similar Persons] #1 ") != std::string::npos);
    CHECK(prompt.find("[Similar Persons] #2 ") != std::string::npos);
    CHECK(prompt.find("[Similar Persons] #3 ") != std::string::npos);
    CHECK(prompt.find("[Similar Persons] #4") == std::string::npos);
    CHECK(payload.at("candidates").size() == 4);
    CHECK(payload.at("candidates")[0].at("id") == "p2");
    CHECK(payload.at("instruction_id") == 1);
}

TEST_CASE("dialogue rendering has one witness line plus two per round") {
    const auto schema = testing_support::tiny_schema();
    const Gallery gallery = testing_support::make_gallery(schema, {
        {{"shirt", "red"}, {"shoes", "white"}},
    });
    CandidateSet candidates{{0}};
    DialogueState dialogue;
    dialogue.initial.text = "I saw someone.";

    auto turns_at = [&](int rounds) {
        DialogueState d = dialogue;
        for (int i = 0; i < rounds; ++i) {
            Question q = bank_question(i, "shoes");
            Answer a;
            a.text = "The person's shoes were white.";
            d.turns.emplace_back(q, a);
        }
        const auto payload = format_questioner_request(candidates, gallery, d, 0);
        return count_dialogue_turns(payload.at("prompt").get<std::string>());
    };
    CHECK(turns_at(0) == 1);
    CHECK(turns_at(1) == 3);
    CHECK(turns_at(3) == 7);
}

TEST_CASE("instruction id outside the three variants is rejected") {
    const auto schema = testing_support::tiny_schema();
    const Gallery gallery = testing_support::make_gallery(schema, {
        {{"shirt", "red"}, {"shoes", "white"}},
    });
    CandidateSet candidates{{0}};
    CHECK_THROWS_AS(format_questioner_request(candidates, gallery, DialogueState{}, 3),
                    ArgumentError);
    CandidateSet empty;
    CHECK_THROWS_AS(format_questioner_request(empty, gallery, DialogueState{}, 0), ArgumentError);
}
