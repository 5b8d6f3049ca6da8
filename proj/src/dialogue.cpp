#include "interid/dialogue.hpp"

#include "interid/errors.hpp"

namespace interid {

const char* to_string(QuestionType t) {
    switch (t) {
        case QuestionType::descriptive: return "descriptive";
        case QuestionType::yesno: return "yesno";
        case QuestionType::mcq: return "mcq";
    }
    return "descriptive";
}

QuestionType question_type_from_string(const std::string& s) {
    if (s == "descriptive") return QuestionType::descriptive;
    if (s == "yesno") return QuestionType::yesno;
    if (s == "mcq") return QuestionType::mcq;
    throw ArgumentError("unknown question type '" + s + "'");
}

}  // namespace interid
