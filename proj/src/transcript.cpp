#include "interid/transcript.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "interid/errors.hpp"
#include "interid/json_io.hpp"

namespace interid {

using nlohmann::json;

std::string SessionTranscript::to_jsonl() const {
    std::ostringstream out;
    json header = {{"type", "header"},
                   {"session", session_id},
                   {"target", target_id},
                   {"target_identity", target_identity},
                   {"config", config},
                   {"initial", initial_to_json(initial)},
                   {"r0", r0},
                   {"ap0", ap0},
                   {"bank_size", bank_size},
                   {"rounds", rounds.size()},
                   {"end_reason", end_reason}};
    out << header.dump() << '\n';
    for (const RoundRecord& r : rounds) {
        json line = {{"type", "round"},
                     {"t", r.t},
                     {"question_id", r.question_id},
                     {"question", r.question_text},
                     {"qtype", to_string(r.qtype)},
                     {"slot", r.slot},
                     {"answer", r.answer_text},
                     {"observations", observations_to_json(r.observations)},
                     {"unknown", r.unknown},
                     {"rank", r.rank},
                     {"ap", r.ap},
                     {"candidates", r.candidate_ids},
                     {"pool_k", r.pool_k}};
        out << line.dump() << '\n';
    }
    return out.str();
}

std::size_t SessionTranscript::rank_at(int round) const {
    if (round < 0 || static_cast<std::size_t>(round) > rounds.size())
        throw ArgumentError("round " + std::to_string(round) + " out of range for session '" +
                            session_id + "' with " + std::to_string(rounds.size()) + " rounds");
    return round == 0 ? r0 : rounds[static_cast<std::size_t>(round) - 1].rank;
}

std::size_t SessionTranscript::best_rank_at(int round) const {
    std::size_t best = rank_at(0);
    for (int t = 1; t <= round; ++t) best = std::min(best, rank_at(t));
    return best;
}

std::size_t SessionTranscript::rank_at_clamped(int round) const {
    const int last = static_cast<int>(rounds.size());
    return rank_at(std::min(round, last));
}

double SessionTranscript::ap_at_clamped(int round) const {
    const int clamped = std::min(round, static_cast<int>(rounds.size()));
    return clamped == 0 ? ap0 : rounds[static_cast<std::size_t>(clamped) - 1].ap;
}

void write_transcripts(const std::vector<SessionTranscript>& transcripts,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    for (const SessionTranscript& t : transcripts) out << t.to_jsonl();
}

namespace {

SessionTranscript header_from_json(const json& doc) {
    SessionTranscript t;
    t.session_id = doc.at("session").get<std::string>();
    t.target_id = doc.at("target").get<std::string>();
    t.target_identity = doc.at("target_identity").get<std::string>();
    t.config = doc.at("config");
    t.initial = initial_from_json(doc.at("initial"));
    t.r0 = doc.at("r0").get<std::size_t>();
    t.ap0 = doc.at("ap0").get<double>();
    t.bank_size = doc.at("bank_size").get<std::size_t>();
    t.end_reason = doc.at("end_reason").get<std::string>();
    return t;
}

RoundRecord round_from_json(const json& doc) {
    RoundRecord r;
    r.t = doc.at("t").get<int>();
    r.question_id = doc.at("question_id").get<int>();
    r.question_text = doc.at("question").get<std::string>();
    r.qtype = question_type_from_string(doc.at("qtype").get<std::string>());
    r.slot = doc.at("slot").get<std::string>();
    r.answer_text = doc.at("answer").get<std::string>();
    r.observations = observations_from_json(doc.at("observations"));
    r.unknown = doc.at("unknown").get<bool>();
    r.rank = doc.at("rank").get<std::size_t>();
    r.ap = doc.at("ap").get<double>();
    r.candidate_ids = doc.at("candidates").get<std::vector<std::string>>();
    r.pool_k = doc.at("pool_k").get<std::size_t>();
    return r;
}

}  // namespace

std::vector<SessionTranscript> read_transcripts_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::vector<SessionTranscript> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("'" + path.string() + "' line " + std::to_string(line_no) + ": " + e.what());
        }
        const std::string type = doc.value("type", "");
        if (type == "header") {
            out.push_back(header_from_json(doc));
        } else if (type == "round") {
            if (out.empty())
                throw ParseError("'" + path.string() + "' line " + std::to_string(line_no) +
                                 ": round before header");
            out.back().rounds.push_back(round_from_json(doc));
        } else {
            throw ParseError("'" + path.string() + "' line " + std::to_string(line_no) +
                             ": unknown line type '" + type + "'");
        }
    }
    return out;
}

std::vector<SessionTranscript> read_transcripts_dir(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<SessionTranscript> out;
    for (const auto& f : files) {
        auto part = read_transcripts_file(f);
        out.insert(out.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
    }
    return out;
}

}  // namespace interid
