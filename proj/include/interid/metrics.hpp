#pragma once
// Recall@k, mean average precision, and the best-log-rank integral (BRI)
// over session transcripts.

#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <vector>

#include "json.hpp"

#include "interid/transcript.hpp"

namespace interid {

enum class RankSeries {
    per_round,    // the rank recorded after that round
    best_so_far,  // min rank over rounds 0..t
};

// Fraction of transcripts whose rank at `round` is <= k. Every transcript
// must have reached the round (ArgumentError otherwise).
double recall_at_k(std::span<const SessionTranscript> transcripts, std::size_t k, int round,
                   RankSeries series = RankSeries::per_round);

// AP of one full ranking against a non-empty relevant set: mean over
// relevant items of precision at that item's rank.
double average_precision(std::span<const std::size_t> ranked_ids,
                         const std::set<std::size_t>& relevant);

// Mean AP over queries. Queries with an empty relevant set are skipped and
// counted into *skipped when given.
double mean_ap(const std::vector<std::vector<std::size_t>>& rankings,
               const std::vector<std::set<std::size_t>>& relevant_sets,
               std::size_t* skipped = nullptr);

// Per session: trapezoidal area under ln(best rank so far), averaged over
// the T rounds, then averaged over sessions. 0 iff the best rank is 1 from
// r0 onward. DataError on a rank < 1 or a session with no rounds.
double bri(std::span<const SessionTranscript> transcripts);

// Aggregate report: recall/mAP at the final round plus the named checkpoint
// rounds (carry-forward for sessions that stopped early), and BRI over all
// sessions that had at least one round.
nlohmann::json metrics_report(std::span<const SessionTranscript> transcripts,
                              std::span<const int> checkpoint_rounds,
                              std::span<const std::size_t> recall_ks);
nlohmann::json metrics_report(std::span<const SessionTranscript> transcripts);

// Per-round curve (recall / mAP / mean ln best rank) for plotting.
void write_round_curve_csv(std::span<const SessionTranscript> transcripts,
                           const std::filesystem::path& path);

}  // namespace interid
