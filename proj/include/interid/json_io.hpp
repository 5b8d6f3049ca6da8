#pragma once
// JSON conversions for the dialogue vocabulary types. Key order in dumps is
// alphabetical (nlohmann default), which keeps serialized output stable.

#include <string>

#include "json.hpp"

#include "interid/dialogue.hpp"

namespace interid {

nlohmann::json observation_to_json(const Observation& obs);
Observation observation_from_json(const nlohmann::json& j);

nlohmann::json observations_to_json(const std::vector<Observation>& obs);
std::vector<Observation> observations_from_json(const nlohmann::json& j);

nlohmann::json initial_to_json(const InitialDescription& initial);
InitialDescription initial_from_json(const nlohmann::json& j);

nlohmann::json question_to_json(const Question& q);
Question question_from_json(const nlohmann::json& j);

nlohmann::json answer_to_json(const Answer& a);
Answer answer_from_json(const nlohmann::json& j);

}  // namespace interid
