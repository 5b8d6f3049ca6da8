#pragma once
// Simulated witness. Answers come from the person's witness-known
// attributes only:
//   - slot the witness cannot recall        -> "I don't know."
//   - descriptive / mcq on a known slot     -> the true value, asserted
//   - yes/no with a correct assumption      -> "Yes, ..." assertion
//   - yes/no with a wrong assumption        -> "No, ..." denial plus the
//                                              true value as a correction
//   - yes/no on an optional slot the person simply does not have
//                                           -> denial of the assumed value
// Answers are deterministic given (question, person).

#include <string>

#include "interid/dialogue.hpp"
#include "interid/gallery.hpp"

namespace interid {

Answer answer_question(const Question& q, const PersonRecord& person, const AttributeSchema& schema);

// Best-effort inverse of the answer templates, for answers arriving as raw
// text (session service, external answerer plugs). Scans the text for
// vocabulary values of the question's slot; anything unrecognizable comes
// back as unknown.
Answer parse_answer_text(const Question& q, const std::string& text, const AttributeSchema& schema);

}  // namespace interid
