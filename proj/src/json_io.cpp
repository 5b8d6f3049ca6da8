#include "interid/json_io.hpp"

#include "interid/errors.hpp"

namespace interid {

using nlohmann::json;

json observation_to_json(const Observation& obs) {
    return {{"slot", obs.slot}, {"value", obs.value}, {"polarity", obs.polarity}};
}

Observation observation_from_json(const json& j) {
    Observation obs;
    obs.slot = j.at("slot").get<std::string>();
    obs.value = j.at("value").get<std::string>();
    obs.polarity = j.at("polarity").get<int>();
    if (obs.polarity != 1 && obs.polarity != -1) throw ParseError("observation polarity must be +1 or -1");
    return obs;
}

json observations_to_json(const std::vector<Observation>& obs) {
    json arr = json::array();
    for (const Observation& o : obs) arr.push_back(observation_to_json(o));
    return arr;
}

std::vector<Observation> observations_from_json(const json& j) {
    std::vector<Observation> out;
    for (const json& o : j) out.push_back(observation_from_json(o));
    return out;
}

json initial_to_json(const InitialDescription& initial) {
    return {{"text", initial.text}, {"observations", observations_to_json(initial.observations)}};
}

InitialDescription initial_from_json(const json& j) {
    InitialDescription initial;
    initial.text = j.at("text").get<std::string>();
    initial.observations = observations_from_json(j.at("observations"));
    return initial;
}

json question_to_json(const Question& q) {
    json j = {{"id", q.id},
              {"qtype", to_string(q.qtype)},
              {"slot", q.slot},
              {"text", q.text},
              {"exhausted", q.exhausted}};
    if (q.assumed_value) j["assumed_value"] = *q.assumed_value;
    if (!q.options.empty()) j["options"] = q.options;
    return j;
}

Question question_from_json(const json& j) {
    Question q;
    q.id = j.at("id").get<int>();
    q.qtype = question_type_from_string(j.at("qtype").get<std::string>());
    q.slot = j.at("slot").get<std::string>();
    q.text = j.at("text").get<std::string>();
    q.exhausted = j.value("exhausted", false);
    if (j.contains("assumed_value")) q.assumed_value = j["assumed_value"].get<std::string>();
    if (j.contains("options")) q.options = j["options"].get<std::vector<std::string>>();
    return q;
}

json answer_to_json(const Answer& a) {
    return {{"text", a.text},
            {"observations", observations_to_json(a.observations)},
            {"unknown", a.unknown}};
}

Answer answer_from_json(const json& j) {
    Answer a;
    a.text = j.value("text", std::string{});
    if (j.contains("observations")) a.observations = observations_from_json(j["observations"]);
    a.unknown = j.value("unknown", false);
    return a;
}

}  // namespace interid
