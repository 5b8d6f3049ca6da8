#pragma once
// Builds the per-person question bank: split the witness's recallable
// memory into single-slot sub-captions (skipping what the initial
// description already covered), then render one typed question per
// sub-caption with the configured descriptive / yes-no / multiple-choice
// mix.

#include <filesystem>
#include <span>
#include <vector>

#include "interid/dialogue.hpp"
#include "interid/gallery.hpp"
#include "interid/rng.hpp"

namespace interid {

// One sub-caption per witness-known slot not covered by the initial
// description, in schema slot order.
std::vector<SubCaption> decompose(const PersonRecord& person, const InitialDescription& initial,
                                  const AttributeSchema& schema);

struct QuestionMix {
    double descriptive = 0.5;
    double yesno = 0.4;
    double mcq = 0.1;
};

// One question per sub-caption, ids 0..n-1 in sub-caption order. Yes/no
// questions assume the true value with probability 1/2, otherwise a random
// wrong value. MCQ options are the true value plus 3 distinct distractors
// from the same vocabulary; slots with fewer than 4 values fall back to a
// yes/no question.
std::vector<Question> build_bank(std::span<const SubCaption> subcaptions, const QuestionMix& mix,
                                 const AttributeSchema& schema, Rng& rng);

// JSONL export, one question per line with all fields.
void export_bank(std::span<const Question> bank, const std::filesystem::path& path);

}  // namespace interid
