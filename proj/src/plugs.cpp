#include "interid/plugs.hpp"

#include <chrono>

#include "httplib.h"

#include "interid/errors.hpp"
#include "interid/witness.hpp"

namespace interid {

using nlohmann::json;

namespace {

struct SplitUrl {
    std::string base;  // scheme://host:port
    std::string path;  // /endpoint, defaulting to "/"
};

SplitUrl split_url(const std::string& url) {
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ArgumentError("plug url '" + url + "' lacks a scheme");
    const std::size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

json post_json(const std::string& url, double timeout_s, const json& body) {
    const SplitUrl split = split_url(url);
    httplib::Client client(split.base);
    const auto timeout = std::chrono::milliseconds(static_cast<long>(timeout_s * 1000.0));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(split.path, body.dump(), "application/json");
    if (!res) throw PlugError("no response from '" + url + "'");
    if (res->status != 200)
        throw PlugError("'" + url + "' answered HTTP " + std::to_string(res->status));
    try {
        return json::parse(res->body);
    } catch (const json::exception& e) {
        throw PlugError("'" + url + "' returned malformed JSON: " + std::string(e.what()));
    }
}

}  // namespace

ExternalScorer make_http_scorer(const std::string& url, double timeout_s) {
    return [url, timeout_s](const ContextEmbedding& z, const CandidatePool& pool) {
        json candidates = json::array();
        for (std::size_t i = 0; i < pool.size(); ++i) {
            auto f = pool.feature(i);
            candidates.push_back(std::vector<float>(f.begin(), f.end()));
        }
        const json reply = post_json(url, timeout_s, {{"context", z.vec}, {"candidates", candidates}});
        return reply.at("scores").get<std::vector<double>>();
    };
}

std::function<Answer(const Question&, const PersonRecord&)> make_http_answerer(
    const std::string& url, double timeout_s, const AttributeSchema& schema) {
    return [url, timeout_s, schema](const Question& q, const PersonRecord& person) {
        json memory = json::object();
        for (const std::string& slot : person.witness_known) {
            auto it = person.attrs.find(slot);
            if (it != person.attrs.end()) memory[slot] = it->second;
        }
        const json reply = post_json(url, timeout_s, {{"question", q.text}, {"memory", memory}});
        Answer answer;
        answer.text = reply.value("text", std::string{});
        if (reply.contains("observation")) {
            const json& obs = reply["observation"];
            if (obs.is_array()) {
                for (const json& o : obs)
                    answer.observations.push_back({o.at("slot").get<std::string>(),
                                                   o.at("value").get<std::string>(),
                                                   o.value("polarity", 1)});
            } else if (obs.is_object()) {
                answer.observations.push_back({obs.at("slot").get<std::string>(),
                                               obs.at("value").get<std::string>(),
                                               obs.value("polarity", 1)});
            }
        }
        answer.unknown = reply.value("unknown", false);
        if (answer.observations.empty() && !answer.unknown) {
            // Structured part missing; recover what the text implies.
            answer = parse_answer_text(q, answer.text, schema);
        }
        return answer;
    };
}

std::function<Question(const nlohmann::json&, const PolicyState&)> make_http_questioner(
    const std::string& url, double timeout_s) {
    return [url, timeout_s](const json& request, const PolicyState& state) {
        const json reply = post_json(url, timeout_s, request);
        const std::string text = reply.value("question", std::string{});
        const std::string slot = reply.value("slot", std::string{});
        for (const Question* q : state.eligible()) {
            if (!slot.empty() && q->slot == slot) return *q;
            if (slot.empty() && q->text == text) return *q;
        }
        throw PlugError("questioner reply matches no eligible question");
    };
}

Plugs make_plugs(const SessionConfig& config, const AttributeSchema& schema) {
    Plugs plugs;
    if (!config.scorer_url.empty())
        plugs.scorer = make_http_scorer(config.scorer_url, config.plug_timeout_s);
    if (!config.answerer_url.empty())
        plugs.answerer = make_http_answerer(config.answerer_url, config.plug_timeout_s, schema);
    if (!config.questioner_url.empty())
        plugs.questioner = make_http_questioner(config.questioner_url, config.plug_timeout_s);
    return plugs;
}

}  // namespace interid
