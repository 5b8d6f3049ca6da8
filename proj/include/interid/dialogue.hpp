#pragma once
// Shared dialogue vocabulary: observations, descriptions, questions,
// answers, and the per-session dialogue state.

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace interid {

// One structured fact about a person. polarity +1 asserts (slot, value),
// polarity -1 denies it.
struct Observation {
    std::string slot;
    std::string value;
    int polarity = +1;

    bool operator==(const Observation&) const = default;
};

// The witness's opening statement: coarse attributes they volunteered.
struct InitialDescription {
    std::string text;
    std::vector<Observation> observations;  // all polarity +1

    bool operator==(const InitialDescription&) const = default;
};

enum class QuestionType { descriptive, yesno, mcq };

const char* to_string(QuestionType t);
QuestionType question_type_from_string(const std::string& s);

struct Question {
    int id = -1;
    QuestionType qtype = QuestionType::descriptive;
    std::string slot;
    std::optional<std::string> assumed_value;  // yes/no questions only
    std::vector<std::string> options;          // mcq: exactly 4 distinct values
    std::string text;
    // Set once asked or answered "I don't know"; exhausted questions are
    // never asked again.
    bool exhausted = false;

    bool operator==(const Question&) const = default;
};

struct Answer {
    std::string text;
    // Empty when unknown. A corrected wrong assumption carries two entries:
    // the denied (slot, assumed, -1) and the true (slot, value, +1).
    std::vector<Observation> observations;
    bool unknown = false;

    bool operator==(const Answer&) const = default;
};

// A single-slot fact split out of the witness's recallable memory; the unit
// each question is built from.
struct SubCaption {
    std::string slot;
    std::string value;
    bool in_initial = false;
};

// Dialogue context after t rounds: initial description plus the ordered
// question/answer turns. Retrieval context uses the initial description and
// the answers only.
struct DialogueState {
    InitialDescription initial;
    std::vector<std::pair<Question, Answer>> turns;

    int round() const { return static_cast<int>(turns.size()); }
};

}  // namespace interid
