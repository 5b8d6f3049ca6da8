#pragma once
// Question-selection policies over a per-session bank, plus the supervision
// export and the request formatter for an external questioner.

#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "interid/dialogue.hpp"
#include "interid/gallery.hpp"
#include "interid/retriever.hpp"
#include "interid/rng.hpp"
#include "interid/selector.hpp"
#include "interid/transcript.hpp"

namespace interid {

// Bank plus the asked-question set. The asked set only grows; a question
// answered "I don't know." is additionally marked exhausted.
class PolicyState {
public:
    PolicyState() = default;
    explicit PolicyState(std::vector<Question> bank) : bank_(std::move(bank)) {}

    const std::vector<Question>& bank() const { return bank_; }
    const std::set<int>& asked() const { return asked_; }

    void mark_asked(int question_id);
    void mark_exhausted(int question_id);

    // Unasked, non-exhausted questions in ascending id order.
    std::vector<const Question*> eligible() const;
    bool exhausted() const { return eligible().empty(); }

private:
    std::vector<Question> bank_;
    std::set<int> asked_;
};

// One-step lookahead: simulate each eligible question's answer, append only
// the answer to the context, and keep the question whose answer yields the
// best (lowest) full-gallery rank for the target. Ties break toward the
// lower resulting rank, then the lower question id.
Question looking_forward_select(const PolicyState& state, const DialogueState& dialogue,
                                std::size_t target_index, const Gallery& gallery,
                                const PersonRecord& person);

// Target-free heuristic: ask about the slot whose values are most split
// across the current candidate set (maximum Shannon entropy; ties by lower
// question id).
Question entropy_select(const PolicyState& state, const CandidateSet& candidates,
                        const Gallery& gallery);

Question random_select(const PolicyState& state, Rng& rng);

// Training pair emitted per lookahead round: the pre-round candidate set
// and dialogue, and the question the lookahead chose.
struct SupervisionExample {
    int round = 0;
    std::vector<std::string> candidate_ids;
    std::string initial_text;
    std::vector<std::pair<std::string, std::string>> turns;  // (question, answer) texts
    int target_question_id = -1;
    std::string target_question_text;

    nlohmann::json to_json() const;
};

// One example per recorded round of a lookahead transcript.
std::vector<SupervisionExample> export_supervision(const SessionTranscript& transcript);

void write_supervision(const std::vector<SupervisionExample>& examples,
                       const std::filesystem::path& path, bool append = false);

// Request payload for an external questioner: candidate 0 rendered as
// "[Candidate Person]", the rest as "[Similar Persons] #i", the dialogue as
// "Witness:" / "You:" turns, and one of three instruction variants.
nlohmann::json format_questioner_request(const CandidateSet& candidates, const Gallery& gallery,
                                         const DialogueState& dialogue, int instruction_id);

// Number of "Witness:" / "You:" turns in a formatted prompt;
// 1 + 2 * rounds for a well-formed payload.
std::size_t count_dialogue_turns(const std::string& prompt);

}  // namespace interid
