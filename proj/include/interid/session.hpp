#pragma once
// Session orchestration: retrieve, pool, select candidates, pick a
// question, apply the answer, record the round. SessionEngine is the single
// loop implementation behind the CLI runner, the benchmark, and the HTTP
// service, so a seed reproduces the same transcript on every path.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "interid/gallery.hpp"
#include "interid/metrics.hpp"
#include "interid/policy.hpp"
#include "interid/question_bank.hpp"
#include "interid/retriever.hpp"
#include "interid/selector.hpp"
#include "interid/transcript.hpp"

namespace interid {

struct SessionConfig {
    int max_rounds = 5;
    // Pool size at round t is ceil(k_base / t), clamped to the gallery.
    int k_base = 200;
    int c = 4;
    std::string selector = "gumbel";       // gumbel | topk | kmeans | uniform
    // Deterministic top-c of the selection weights by default; "sample"
    // draws the set with Gumbel-top-k instead.
    std::string selector_mode = "argmax";  // argmax | sample (gumbel selector only)
    std::string gumbel_mode = "log";       // log | additive
    std::string policy = "lookahead";      // lookahead | entropy | random | external
    std::string scorer = "similarity";     // similarity | diversity | external
    double diversity_lambda = 0.5;
    double noise_sigma = 0.05;
    double p_unknown = 0.1;
    double mix_descriptive = 0.5;
    double mix_yesno = 0.4;
    double mix_mcq = 0.1;
    int images_per_identity = 1;
    std::uint64_t seed = 42;
    bool stop_on_rank_1 = false;
    std::string relevance = "identity";  // identity | image
    std::string scorer_url;
    std::string answerer_url;
    std::string questioner_url;
    double plug_timeout_s = 5.0;

    QuestionMix mix() const { return {mix_descriptive, mix_yesno, mix_mcq}; }
    GeneratorParams generator_params() const {
        return {p_unknown, noise_sigma, 0.5, images_per_identity};
    }
    void validate() const;
};

nlohmann::json config_to_json(const SessionConfig& config);
SessionConfig config_from_json(const nlohmann::json& j);
SessionConfig load_config(const std::filesystem::path& path);

std::size_t k_schedule(int k_base, int round);

// External hooks. The answerer replaces the built-in witness; the
// questioner replaces the policy. Both may be empty.
struct Plugs {
    ExternalScorer scorer;
    std::function<Answer(const Question&, const PersonRecord&)> answerer;
    std::function<Question(const nlohmann::json& request, const PolicyState&)> questioner;
};

class SessionEngine {
public:
    SessionEngine(const Gallery& gallery, std::size_t target_index, const SessionConfig& config,
                  std::uint64_t session_seed, std::string session_id, const Plugs* plugs = nullptr);

    bool done() const { return done_; }
    const std::string& end_reason() const { return transcript_.end_reason; }
    const SessionTranscript& transcript() const { return transcript_; }
    const DialogueState& dialogue() const { return dialogue_; }
    const PersonRecord& person() const { return gallery_->persons[target_index_]; }
    const PolicyState& policy_state() const { return state_; }

    // Advances the pipeline to the next question (candidate pool, scoring,
    // selection, policy). Returns nothing when the session is finished.
    std::optional<Question> next_question();

    // Records the answer to the pending question, updates the rank, and
    // returns the evaluation rank after this round.
    std::size_t apply_answer(const Answer& answer);

    // Built-in witness answer for the pending question.
    Answer witness_answer() const;

private:
    std::size_t evaluation_rank(RetrievalResult& result) const;
    double evaluation_ap(const RetrievalResult& result) const;
    void finish(const std::string& reason);

    const Gallery* gallery_;
    std::size_t target_index_;
    SessionConfig config_;
    const Plugs* plugs_;
    Rng rng_;
    DialogueState dialogue_;
    PolicyState state_;
    SessionTranscript transcript_;
    std::set<std::size_t> relevant_;
    bool done_ = false;

    struct Pending {
        Question question;
        CandidateSet candidates;
        std::size_t pool_k = 0;
    };
    std::optional<Pending> pending_;
};

// Runs one full session against the built-in witness (or the answerer plug
// when configured).
SessionTranscript run_session(const Gallery& gallery, const std::string& target_id,
                              const SessionConfig& config, std::uint64_t session_seed,
                              const std::string& session_id, const Plugs* plugs = nullptr);

struct BenchmarkResult {
    std::vector<SessionTranscript> transcripts;
    nlohmann::json report;
};

// n sessions over targets sampled without replacement (cycling when
// n > gallery size). When out_dir is set, writes transcripts.jsonl,
// metrics.json, and per_round.csv into it.
BenchmarkResult run_benchmark(const Gallery& gallery, int n_sessions, const SessionConfig& config,
                              const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                              const Plugs* plugs = nullptr);

}  // namespace interid
