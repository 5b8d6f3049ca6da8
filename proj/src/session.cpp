#include "interid/session.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "interid/errors.hpp"
#include "interid/witness.hpp"

namespace interid {

using nlohmann::json;

void SessionConfig::validate() const {
    if (max_rounds < 1) throw ArgumentError("max_rounds must be >= 1");
    if (k_base < 1) throw ArgumentError("k_base must be >= 1");
    if (c < 1) throw ArgumentError("c must be >= 1");
    if (selector != "gumbel" && selector != "topk" && selector != "kmeans" && selector != "uniform")
        throw ArgumentError("unknown selector '" + selector + "'");
    if (selector_mode != "sample" && selector_mode != "argmax")
        throw ArgumentError("unknown selector_mode '" + selector_mode + "'");
    if (gumbel_mode != "log" && gumbel_mode != "additive")
        throw ArgumentError("unknown gumbel_mode '" + gumbel_mode + "'");
    if (policy != "lookahead" && policy != "entropy" && policy != "random" && policy != "external")
        throw ArgumentError("unknown policy '" + policy + "'");
    (void)scorer_from_string(scorer);
    if (relevance != "identity" && relevance != "image")
        throw ArgumentError("relevance must be 'identity' or 'image'");
    if (images_per_identity < 1) throw ArgumentError("images_per_identity must be >= 1");
}

json config_to_json(const SessionConfig& c) {
    return {{"max_rounds", c.max_rounds},
            {"k_base", c.k_base},
            {"c", c.c},
            {"selector", c.selector},
            {"selector_mode", c.selector_mode},
            {"gumbel_mode", c.gumbel_mode},
            {"policy", c.policy},
            {"scorer", c.scorer},
            {"diversity_lambda", c.diversity_lambda},
            {"noise_sigma", c.noise_sigma},
            {"p_unknown", c.p_unknown},
            {"mix_descriptive", c.mix_descriptive},
            {"mix_yesno", c.mix_yesno},
            {"mix_mcq", c.mix_mcq},
            {"images_per_identity", c.images_per_identity},
            {"seed", c.seed},
            {"stop_on_rank_1", c.stop_on_rank_1},
            {"relevance", c.relevance},
            {"scorer_url", c.scorer_url},
            {"answerer_url", c.answerer_url},
            {"questioner_url", c.questioner_url},
            {"plug_timeout_s", c.plug_timeout_s}};
}

SessionConfig config_from_json(const json& j) {
    SessionConfig c;
    c.max_rounds = j.value("max_rounds", c.max_rounds);
    c.k_base = j.value("k_base", c.k_base);
    c.c = j.value("c", c.c);
    c.selector = j.value("selector", c.selector);
    c.selector_mode = j.value("selector_mode", c.selector_mode);
    c.gumbel_mode = j.value("gumbel_mode", c.gumbel_mode);
    c.policy = j.value("policy", c.policy);
    c.scorer = j.value("scorer", c.scorer);
    c.diversity_lambda = j.value("diversity_lambda", c.diversity_lambda);
    c.noise_sigma = j.value("noise_sigma", c.noise_sigma);
    c.p_unknown = j.value("p_unknown", c.p_unknown);
    c.mix_descriptive = j.value("mix_descriptive", c.mix_descriptive);
    c.mix_yesno = j.value("mix_yesno", c.mix_yesno);
    c.mix_mcq = j.value("mix_mcq", c.mix_mcq);
    c.images_per_identity = j.value("images_per_identity", c.images_per_identity);
    c.seed = j.value("seed", c.seed);
    c.stop_on_rank_1 = j.value("stop_on_rank_1", c.stop_on_rank_1);
    c.relevance = j.value("relevance", c.relevance);
    c.scorer_url = j.value("scorer_url", c.scorer_url);
    c.answerer_url = j.value("answerer_url", c.answerer_url);
    c.questioner_url = j.value("questioner_url", c.questioner_url);
    c.plug_timeout_s = j.value("plug_timeout_s", c.plug_timeout_s);
    c.validate();
    return c;
}

SessionConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("config '" + path.string() + "': " + e.what());
    }
    return config_from_json(doc);
}

std::size_t k_schedule(int k_base, int round) {
    if (round < 1) throw ArgumentError("round must be >= 1");
    return static_cast<std::size_t>((k_base + round - 1) / round);
}

SessionEngine::SessionEngine(const Gallery& gallery, std::size_t target_index,
                             const SessionConfig& config, std::uint64_t session_seed,
                             std::string session_id, const Plugs* plugs)
    : gallery_(&gallery),
      target_index_(target_index),
      config_(config),
      plugs_(plugs),
      rng_(session_seed) {
    config_.validate();
    if (target_index_ >= gallery.size()) throw NotFoundError("target index out of range");
    const PersonRecord& target = person();

    transcript_.session_id = std::move(session_id);
    transcript_.target_id = target.id;
    transcript_.target_identity = target.identity;
    transcript_.config = config_to_json(config_);

    dialogue_.initial = coarse_description(target, gallery.schema);
    transcript_.initial = dialogue_.initial;

    if (config_.relevance == "identity") {
        for (std::size_t idx : gallery.identity_members(target.identity)) relevant_.insert(idx);
    } else {
        relevant_.insert(target_index_);
    }

    auto subcaptions = decompose(target, dialogue_.initial, gallery.schema);
    state_ = PolicyState(build_bank(subcaptions, config_.mix(), gallery.schema, rng_));
    transcript_.bank_size = state_.bank().size();

    RetrievalResult result =
        match_probabilities(encode_context(dialogue_, gallery.schema), gallery);
    transcript_.r0 = evaluation_rank(result);
    transcript_.ap0 = evaluation_ap(result);
    if (config_.stop_on_rank_1 && transcript_.r0 == 1) finish("rank_1");
}

std::size_t SessionEngine::evaluation_rank(RetrievalResult& result) const {
    for (std::size_t pos = 0; pos < result.ranked_ids.size(); ++pos) {
        if (relevant_.contains(result.ranked_ids[pos])) {
            result.target_rank = pos + 1;
            return pos + 1;
        }
    }
    throw DataError("target missing from ranking");
}

double SessionEngine::evaluation_ap(const RetrievalResult& result) const {
    return average_precision(result.ranked_ids, relevant_);
}

void SessionEngine::finish(const std::string& reason) {
    done_ = true;
    transcript_.end_reason = reason;
    pending_.reset();
}

std::optional<Question> SessionEngine::next_question() {
    if (done_) return std::nullopt;
    if (pending_) return pending_->question;
    if (dialogue_.round() >= config_.max_rounds) {
        finish("max_rounds");
        return std::nullopt;
    }
    if (state_.exhausted()) {
        finish("bank_exhausted");
        return std::nullopt;
    }

    const int t = dialogue_.round() + 1;
    const ContextEmbedding z = encode_context(dialogue_, gallery_->schema);
    const std::size_t k =
        std::max<std::size_t>(1, std::min(k_schedule(config_.k_base, t), gallery_->size()));
    const CandidatePool pool = retrieve_topk(z, *gallery_, k);
    const std::size_t c = std::min<std::size_t>(static_cast<std::size_t>(config_.c), pool.size());

    std::vector<std::size_t> positions;
    if (config_.selector == "gumbel") {
        const ExternalScorer* external =
            (plugs_ != nullptr && plugs_->scorer) ? &plugs_->scorer : nullptr;
        const ScoreOutcome outcome =
            score_candidates(pool, z, scorer_from_string(config_.scorer), external,
                             config_.diversity_lambda);
        const GumbelMode mode =
            config_.gumbel_mode == "log" ? GumbelMode::log : GumbelMode::additive;
        positions = config_.selector_mode == "sample"
                        ? gumbel_topk_sample(outcome.weights, c, rng_, mode)
                        : topc_by_weight(outcome.weights, c);
    } else {
        positions = select_baseline(pool, baseline_from_string(config_.selector), c, rng_);
    }
    const CandidateSet candidates = resolve_candidates(pool, positions);

    Question question;
    if (config_.policy == "lookahead") {
        question = looking_forward_select(state_, dialogue_, target_index_, *gallery_, person());
    } else if (config_.policy == "entropy") {
        question = entropy_select(state_, candidates, *gallery_);
    } else if (config_.policy == "random") {
        question = random_select(state_, rng_);
    } else {  // external
        if (plugs_ == nullptr || !plugs_->questioner) {
            finish("plug_failure");
            return std::nullopt;
        }
        try {
            const json request =
                format_questioner_request(candidates, *gallery_, dialogue_, 0);
            question = plugs_->questioner(request, state_);
        } catch (const std::exception&) {
            finish("plug_failure");
            return std::nullopt;
        }
    }

    pending_ = Pending{question, candidates, k};
    return question;
}

Answer SessionEngine::witness_answer() const {
    if (!pending_) throw ArgumentError("no pending question");
    if (plugs_ != nullptr && plugs_->answerer) return plugs_->answerer(pending_->question, person());
    return answer_question(pending_->question, person(), gallery_->schema);
}

std::size_t SessionEngine::apply_answer(const Answer& answer) {
    if (!pending_) throw ArgumentError("no pending question");
    const Pending pending = std::move(*pending_);
    pending_.reset();

    state_.mark_asked(pending.question.id);
    dialogue_.turns.emplace_back(pending.question, answer);

    RetrievalResult result =
        match_probabilities(encode_context(dialogue_, gallery_->schema), *gallery_);
    const std::size_t rank = evaluation_rank(result);

    RoundRecord record;
    record.t = dialogue_.round();
    record.question_id = pending.question.id;
    record.question_text = pending.question.text;
    record.qtype = pending.question.qtype;
    record.slot = pending.question.slot;
    record.answer_text = answer.text;
    record.observations = answer.observations;
    record.unknown = answer.unknown;
    record.rank = rank;
    record.ap = evaluation_ap(result);
    record.pool_k = pending.pool_k;
    for (std::size_t idx : pending.candidates.gallery_indices)
        record.candidate_ids.push_back(gallery_->persons[idx].id);
    transcript_.rounds.push_back(std::move(record));

    if (config_.stop_on_rank_1 && rank == 1) {
        finish("rank_1");
    } else if (dialogue_.round() >= config_.max_rounds) {
        finish("max_rounds");
    } else if (state_.exhausted()) {
        finish("bank_exhausted");
    }
    return rank;
}

SessionTranscript run_session(const Gallery& gallery, const std::string& target_id,
                              const SessionConfig& config, std::uint64_t session_seed,
                              const std::string& session_id, const Plugs* plugs) {
    auto target_index = gallery.index_of(target_id);
    if (!target_index) throw NotFoundError("no person with id '" + target_id + "'");
    SessionEngine engine(gallery, *target_index, config, session_seed, session_id, plugs);
    while (auto question = engine.next_question()) {
        Answer answer;
        try {
            answer = engine.witness_answer();
        } catch (const std::exception&) {
            // Answerer plug failed; keep the partial transcript.
            SessionTranscript partial = engine.transcript();
            partial.end_reason = "plug_failure";
            return partial;
        }
        engine.apply_answer(answer);
    }
    return engine.transcript();
}

BenchmarkResult run_benchmark(const Gallery& gallery, int n_sessions, const SessionConfig& config,
                              const std::optional<std::filesystem::path>& out_dir,
                              const Plugs* plugs) {
    if (n_sessions < 1) throw ArgumentError("n_sessions must be >= 1");
    config.validate();

    // Targets drawn without replacement, cycling through fresh permutations
    // when more sessions than persons are requested.
    Rng target_rng(derive_seed(config.seed, 0x7a72676574ULL));
    std::vector<std::size_t> order(gallery.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    target_rng.shuffle(order);
    std::vector<std::size_t> targets;
    targets.reserve(static_cast<std::size_t>(n_sessions));
    for (int i = 0; i < n_sessions; ++i) {
        const std::size_t offset = static_cast<std::size_t>(i) % gallery.size();
        if (i > 0 && offset == 0) target_rng.shuffle(order);
        targets.push_back(order[offset]);
    }

    BenchmarkResult result;
    result.transcripts.reserve(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        SessionEngine engine(gallery, targets[i], config, derive_seed(config.seed, i),
                             "session-" + std::to_string(i), plugs);
        while (auto question = engine.next_question()) {
            engine.apply_answer(engine.witness_answer());
        }
        result.transcripts.push_back(engine.transcript());
    }
    result.report = metrics_report(result.transcripts);

    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        write_transcripts(result.transcripts, *out_dir / "transcripts.jsonl");
        std::ofstream report_out(*out_dir / "metrics.json");
        if (!report_out) throw DataError("cannot write metrics report");
        report_out << result.report.dump(2) << '\n';
        write_round_curve_csv(result.transcripts, *out_dir / "per_round.csv");
    }
    return result;
}

}  // namespace interid
