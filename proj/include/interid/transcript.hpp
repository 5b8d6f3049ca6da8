#pragma once
// Session transcript: everything a finished (or in-flight) session exposes
// for metrics and replay. Serialized as JSONL — one header line carrying
// the config snapshot plus one line per round.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "interid/dialogue.hpp"

namespace interid {

struct RoundRecord {
    int t = 0;  // 1-based round number
    int question_id = -1;
    std::string question_text;
    QuestionType qtype = QuestionType::descriptive;
    std::string slot;
    std::string answer_text;
    std::vector<Observation> observations;
    bool unknown = false;
    // Evaluation rank after this round's answer (identity- or image-level
    // per the config snapshot) and the matching average precision.
    std::size_t rank = 0;
    double ap = 0.0;
    std::vector<std::string> candidate_ids;
    std::size_t pool_k = 0;
};

struct SessionTranscript {
    std::string session_id;
    std::string target_id;
    std::string target_identity;
    nlohmann::json config;  // SessionConfig snapshot
    InitialDescription initial;
    std::size_t r0 = 0;  // rank before any question
    double ap0 = 0.0;
    std::size_t bank_size = 0;
    std::vector<RoundRecord> rounds;
    std::string end_reason;  // max_rounds | rank_1 | bank_exhausted | plug_failure

    std::string to_jsonl() const;

    // Rank after `round` answers (round 0 = r0). ArgumentError when the
    // transcript never reached that round.
    std::size_t rank_at(int round) const;
    std::size_t best_rank_at(int round) const;

    // Carry-forward variants: a session that stopped early keeps its final
    // state for later rounds.
    std::size_t rank_at_clamped(int round) const;
    double ap_at_clamped(int round) const;
};

void write_transcripts(const std::vector<SessionTranscript>& transcripts,
                       const std::filesystem::path& path);

std::vector<SessionTranscript> read_transcripts_file(const std::filesystem::path& path);

// All *.jsonl transcript files under `dir`, in lexicographic file order.
std::vector<SessionTranscript> read_transcripts_dir(const std::filesystem::path& dir);

}  // namespace interid
