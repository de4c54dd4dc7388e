#pragma once

#include <stdexcept>
#include <string>

namespace nccell {

// Root of every error thrown by the library. Each subclass names one failure
// mode so callers (and the CLI exit-code mapping) can dispatch on type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define NCCELL_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& what) : Error(what) {}     \
    }

NCCELL_DEFINE_ERROR(InvalidFieldSpec);
NCCELL_DEFINE_ERROR(InversionOfZero);
NCCELL_DEFINE_ERROR(DimensionMismatch);
NCCELL_DEFINE_ERROR(GenerationMismatch);
NCCELL_DEFINE_ERROR(EmptyInput);
NCCELL_DEFINE_ERROR(PollutionDetectedAtDecode);
NCCELL_DEFINE_ERROR(TagSetUnavailable);
NCCELL_DEFINE_ERROR(InvalidParameter);
NCCELL_DEFINE_ERROR(UnknownController);
NCCELL_DEFINE_ERROR(ClockError);
NCCELL_DEFINE_ERROR(ScheduleError);
NCCELL_DEFINE_ERROR(NoOpHandover);
NCCELL_DEFINE_ERROR(HoPreparationTimeout);
NCCELL_DEFINE_ERROR(IoError);

#undef NCCELL_DEFINE_ERROR

// Carries the dotted path of the offending config key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace nccell
