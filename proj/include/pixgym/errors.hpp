#pragma once

#include <stdexcept>
#include <string>

namespace pixgym {

// Every error raised by the library derives from Error so callers at process
// boundaries (CLI, session service) can map them to a stable code.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define PIXGYM_DEFINE_ERROR(Name, Code)                                  \
    class Name : public Error {                                          \
    public:                                                              \
        explicit Name(const std::string& what) : Error(Code, what) {}    \
    }

PIXGYM_DEFINE_ERROR(GrammarError, "bad_action");
PIXGYM_DEFINE_ERROR(RangeError, "out_of_range");
PIXGYM_DEFINE_ERROR(UnknownTask, "unknown_task");
PIXGYM_DEFINE_ERROR(TerminalStateError, "episode_done");
PIXGYM_DEFINE_ERROR(NonTerminal, "non_terminal");
PIXGYM_DEFINE_ERROR(NoOracle, "no_oracle");
PIXGYM_DEFINE_ERROR(EmptyBeam, "empty_beam");
PIXGYM_DEFINE_ERROR(EmptyDataset, "empty_dataset");
PIXGYM_DEFINE_ERROR(EmptyPrediction, "empty_prediction");
PIXGYM_DEFINE_ERROR(NoEdges, "no_edges");
PIXGYM_DEFINE_ERROR(OffscreenElement, "offscreen_element");
PIXGYM_DEFINE_ERROR(NotDone, "not_done");
PIXGYM_DEFINE_ERROR(FormatError, "bad_format");
PIXGYM_DEFINE_ERROR(UnknownSession, "unknown_session");

#undef PIXGYM_DEFINE_ERROR

}  // namespace pixgym
