#include "interid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "interid/errors.hpp"

namespace interid {

using nlohmann::json;

double recall_at_k(std::span<const SessionTranscript> transcripts, std::size_t k, int round,
                   RankSeries series) {
    if (transcripts.empty()) throw ArgumentError("no transcripts");
    if (k == 0) throw ArgumentError("k must be >= 1");
    std::size_t hits = 0;
    for (const SessionTranscript& t : transcripts) {
        const std::size_t rank =
            series == RankSeries::per_round ? t.rank_at(round) : t.best_rank_at(round);
        if (rank <= k) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(transcripts.size());
}

double average_precision(std::span<const std::size_t> ranked_ids,
                         const std::set<std::size_t>& relevant) {
    if (relevant.empty()) throw ArgumentError("empty relevant set");
    std::size_t found = 0;
    double sum = 0.0;
    for (std::size_t pos = 0; pos < ranked_ids.size(); ++pos) {
        if (relevant.contains(ranked_ids[pos])) {
            ++found;
            sum += static_cast<double>(found) / static_cast<double>(pos + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

double mean_ap(const std::vector<std::vector<std::size_t>>& rankings,
               const std::vector<std::set<std::size_t>>& relevant_sets, std::size_t* skipped) {
    if (rankings.size() != relevant_sets.size())
        throw ArgumentError("rankings and relevant sets differ in length");
    double sum = 0.0;
    std::size_t counted = 0, skip = 0;
    for (std::size_t q = 0; q < rankings.size(); ++q) {
        if (relevant_sets[q].empty()) {
            ++skip;
            continue;
        }
        sum += average_precision(rankings[q], relevant_sets[q]);
        ++counted;
    }
    if (skipped != nullptr) *skipped = skip;
    if (counted == 0) throw ArgumentError("every query had an empty relevant set");
    return sum / static_cast<double>(counted);
}

namespace {

double bri_session(const SessionTranscript& t) {
    if (t.rounds.empty()) throw DataError("session '" + t.session_id + "' has no rounds");
    if (t.r0 < 1) throw DataError("rank below 1 in session '" + t.session_id + "'");
    double best_prev = static_cast<double>(t.r0);
    double area = 0.0;
    for (const RoundRecord& r : t.rounds) {
        if (r.rank < 1) throw DataError("rank below 1 in session '" + t.session_id + "'");
        const double best = std::min(best_prev, static_cast<double>(r.rank));
        area += 0.5 * (std::log(best_prev) + std::log(best));
        best_prev = best;
    }
    return area / static_cast<double>(t.rounds.size());
}

}  // namespace

double bri(std::span<const SessionTranscript> transcripts) {
    if (transcripts.empty()) throw ArgumentError("no transcripts");
    double sum = 0.0;
    for (const SessionTranscript& t : transcripts) sum += bri_session(t);
    return sum / static_cast<double>(transcripts.size());
}

namespace {

json recall_block(std::span<const SessionTranscript> transcripts, int round,
                  std::span<const std::size_t> recall_ks) {
    json recall = json::object();
    for (std::size_t k : recall_ks) {
        std::size_t hits = 0;
        for (const SessionTranscript& t : transcripts) {
            if (t.rank_at_clamped(round) <= k) ++hits;
        }
        recall[std::to_string(k)] =
            static_cast<double>(hits) / static_cast<double>(transcripts.size());
    }
    return recall;
}

double map_at(std::span<const SessionTranscript> transcripts, int round) {
    double sum = 0.0;
    for (const SessionTranscript& t : transcripts) sum += t.ap_at_clamped(round);
    return sum / static_cast<double>(transcripts.size());
}

}  // namespace

json metrics_report(std::span<const SessionTranscript> transcripts,
                    std::span<const int> checkpoint_rounds,
                    std::span<const std::size_t> recall_ks) {
    if (transcripts.empty()) throw ArgumentError("no transcripts");
    int max_round = 0;
    for (const SessionTranscript& t : transcripts)
        max_round = std::max(max_round, static_cast<int>(t.rounds.size()));

    std::vector<SessionTranscript> with_rounds;
    for (const SessionTranscript& t : transcripts) {
        if (!t.rounds.empty()) with_rounds.push_back(t);
    }

    json report = {{"sessions", transcripts.size()},
                   {"rounds", max_round},
                   {"recall", recall_block(transcripts, max_round, recall_ks)},
                   {"map", map_at(transcripts, max_round)}};
    if (!with_rounds.empty()) {
        report["bri"] = bri(with_rounds);
        report["bri_sessions"] = with_rounds.size();
    }
    json by_round = json::object();
    for (int round : checkpoint_rounds) {
        by_round[std::to_string(round)] = {{"recall", recall_block(transcripts, round, recall_ks)},
                                           {"map", map_at(transcripts, round)}};
    }
    report["by_round"] = by_round;
    return report;
}

json metrics_report(std::span<const SessionTranscript> transcripts) {
    static const int kRounds[] = {3, 5};
    static const std::size_t kKs[] = {1, 5, 10};
    return metrics_report(transcripts, kRounds, kKs);
}

void write_round_curve_csv(std::span<const SessionTranscript> transcripts,
                           const std::filesystem::path& path) {
    if (transcripts.empty()) throw ArgumentError("no transcripts");
    int max_round = 0;
    for (const SessionTranscript& t : transcripts)
        max_round = std::max(max_round, static_cast<int>(t.rounds.size()));
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    out << "round,recall@1,recall@5,recall@10,map,mean_ln_best_rank\n";
    for (int round = 0; round <= max_round; ++round) {
        double ln_best = 0.0;
        std::size_t hits1 = 0, hits5 = 0, hits10 = 0;
        for (const SessionTranscript& t : transcripts) {
            const std::size_t rank = t.rank_at_clamped(round);
            hits1 += rank <= 1;
            hits5 += rank <= 5;
            hits10 += rank <= 10;
            ln_best += std::log(static_cast<double>(
                t.best_rank_at(std::min(round, static_cast<int>(t.rounds.size())))));
        }
        const double n = static_cast<double>(transcripts.size());
        out << round << ',' << (hits1 / n) << ',' << (hits5 / n) << ',' << (hits10 / n) << ','
            << map_at(transcripts, round) << ',' << (ln_best / n) << '\n';
    }
}

}  // namespace interid
