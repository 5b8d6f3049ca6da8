#pragma once
// HTTP clients for the three external hooks. Wire formats:
//   scorer:     POST <url>  {"context": [f...], "candidates": [[f...]...]}
//               -> {"scores": [f...]}
//   answerer:   POST <url>  {"question": str, "memory": {slot: value...}}
//               -> {"text": str, "observation"?: {...} | [{...}...], "unknown"?: bool}
//   questioner: POST <url>  format_questioner_request payload
//               -> {"question": str, "slot"?: str}
//
// Scorer failures fall back to the similarity scorer upstream; answerer and
// questioner failures throw PlugError and abort the session with a partial
// transcript.

#include <string>

#include "interid/session.hpp"

namespace interid {

ExternalScorer make_http_scorer(const std::string& url, double timeout_s);

std::function<Answer(const Question&, const PersonRecord&)> make_http_answerer(
    const std::string& url, double timeout_s, const AttributeSchema& schema);

std::function<Question(const nlohmann::json&, const PolicyState&)> make_http_questioner(
    const std::string& url, double timeout_s);

// Builds the plug set a config asks for (empty URLs mean no plug).
Plugs make_plugs(const SessionConfig& config, const AttributeSchema& schema);

}  // namespace interid
