#include "interid/policy.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "interid/errors.hpp"
#include "interid/witness.hpp"

namespace interid {

using nlohmann::json;

void PolicyState::mark_asked(int question_id) {
    asked_.insert(question_id);
    mark_exhausted(question_id);
}

void PolicyState::mark_exhausted(int question_id) {
    for (Question& q : bank_) {
        if (q.id == question_id) {
            q.exhausted = true;
            return;
        }
    }
}

std::vector<const Question*> PolicyState::eligible() const {
    std::vector<const Question*> out;
    for (const Question& q : bank_) {
        if (q.exhausted || asked_.contains(q.id)) continue;
        out.push_back(&q);
    }
    return out;
}

Question looking_forward_select(const PolicyState& state, const DialogueState& dialogue,
                                std::size_t target_index, const Gallery& gallery,
                                const PersonRecord& person) {
    auto eligible = state.eligible();
    if (eligible.empty()) throw BankExhaustedError("no eligible question left");

    const Question* best = nullptr;
    std::size_t best_rank = std::numeric_limits<std::size_t>::max();
    DialogueState probe = dialogue;
    for (const Question* q : eligible) {
        const Answer answer = answer_question(*q, person, gallery.schema);
        probe.turns.emplace_back(*q, answer);
        const ContextEmbedding z = encode_context(probe, gallery.schema);
        probe.turns.pop_back();
        const std::size_t rank = rank_of(target_index, z, gallery);
        // eligible() is id-ascending, so strict improvement keeps the lower id.
        if (rank < best_rank) {
            best_rank = rank;
            best = q;
        }
    }
    return *best;
}

Question entropy_select(const PolicyState& state, const CandidateSet& candidates,
                        const Gallery& gallery) {
    auto eligible = state.eligible();
    if (eligible.empty()) throw BankExhaustedError("no eligible question left");
    if (candidates.size() == 0) throw ArgumentError("empty candidate set");

    const Question* best = nullptr;
    double best_entropy = -1.0;
    for (const Question* q : eligible) {
        std::map<std::string, std::size_t> tally;
        for (std::size_t idx : candidates.gallery_indices) {
            const PersonRecord& p = gallery.persons[idx];
            auto it = p.attrs.find(q->slot);
            tally[it == p.attrs.end() ? std::string{} : it->second]++;
        }
        double entropy = 0.0;
        const double n = static_cast<double>(candidates.size());
        for (const auto& [value, count] : tally) {
            const double p = static_cast<double>(count) / n;
            entropy -= p * std::log2(p);
        }
        if (entropy > best_entropy) {
            best_entropy = entropy;
            best = q;
        }
    }
    return *best;
}

Question random_select(const PolicyState& state, Rng& rng) {
    auto eligible = state.eligible();
    if (eligible.empty()) throw BankExhaustedError("no eligible question left");
    return *eligible[static_cast<std::size_t>(rng.uniform_int(eligible.size()))];
}

json SupervisionExample::to_json() const {
    json turns_json = json::array();
    for (const auto& [question, answer] : turns)
        turns_json.push_back({{"question", question}, {"answer", answer}});
    return {{"round", round},
            {"candidates", candidate_ids},
            {"dialogue", {{"initial", initial_text}, {"turns", turns_json}}},
            {"target_question_id", target_question_id},
            {"target_question", target_question_text}};
}

std::vector<SupervisionExample> export_supervision(const SessionTranscript& transcript) {
    std::vector<SupervisionExample> out;
    out.reserve(transcript.rounds.size());
    for (std::size_t i = 0; i < transcript.rounds.size(); ++i) {
        const RoundRecord& r = transcript.rounds[i];
        SupervisionExample ex;
        ex.round = r.t;
        ex.candidate_ids = r.candidate_ids;
        ex.initial_text = transcript.initial.text;
        for (std::size_t j = 0; j < i; ++j)
            ex.turns.emplace_back(transcript.rounds[j].question_text, transcript.rounds[j].answer_text);
        ex.target_question_id = r.question_id;
        ex.target_question_text = r.question_text;
        out.push_back(std::move(ex));
    }
    return out;
}

void write_supervision(const std::vector<SupervisionExample>& examples,
                       const std::filesystem::path& path, bool append) {
    std::ofstream out(path, append ? std::ios::app : std::ios::out);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    for (const SupervisionExample& ex : examples) out << ex.to_json().dump() << '\n';
}

namespace {

const char* kInstructions[] = {
    "Ask one question that would best tell the candidate person apart from the similar persons. "
    "Do not repeat a question that was already asked or that was answered with \"I don't know.\".",
    "Compare the candidate person with the similar persons and ask the witness about one detail "
    "that separates them. Skip anything the conversation already covers or that was answered with "
    "\"I don't know.\".",
    "Find the attribute where these people differ the most and ask the witness about it. Never "
    "reuse a question that was answered with \"I don't know.\".",
};

std::string person_summary(const PersonRecord& person) {
    std::string out;
    for (const auto& [slot, value] : person.attrs) {
        if (!out.empty()) out += ", ";
        out += slot_phrase(slot) + ": " + value;
    }
    return out;
}

}  // namespace

json format_questioner_request(const CandidateSet& candidates, const Gallery& gallery,
                               const DialogueState& dialogue, int instruction_id) {
    if (candidates.size() == 0) throw ArgumentError("need at least one candidate");
    if (instruction_id < 0 || instruction_id > 2) throw ArgumentError("instruction_id must be 0..2");

    std::string prompt;
    json candidate_json = json::array();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const PersonRecord& person = gallery.persons[candidates.gallery_indices[i]];
        if (i == 0) {
            prompt += "[Candidate Person] " + person_summary(person) + "\n";
        } else {
            prompt += "[Similar Persons] #" + std::to_string(i) + " " + person_summary(person) + "\n";
        }
        candidate_json.push_back({{"id", person.id}, {"attrs", person.attrs}});
    }
    prompt += "[Conversation] Witness: " + dialogue.initial.text + "\n";
    for (const auto& [question, answer] : dialogue.turns) {
        prompt += "You: " + question.text + "\n";
        prompt += "Witness: " + answer.text + "\n";
    }
    prompt += kInstructions[instruction_id];

    return {{"prompt", prompt},
            {"candidates", candidate_json},
            {"instruction_id", instruction_id},
            {"rounds", dialogue.round()}};
}

std::size_t count_dialogue_turns(const std::string& prompt) {
    std::size_t count = 0;
    std::size_t pos = 0;
    std::string line;
    while (pos <= prompt.size()) {
        const std::size_t end = prompt.find('\n', pos);
        line = prompt.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        if (line.rfind("You: ", 0) == 0 || line.rfind("Witness: ", 0) == 0 ||
            line.find("[Conversation] Witness: ") != std::string::npos)
            ++count;
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return count;
}

}  // namespace interid
