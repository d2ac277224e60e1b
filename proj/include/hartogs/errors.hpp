#pragma once

#include <stdexcept>
#include <string>

namespace hartogs {

// Base class for every error raised by the library. The CLI maps these to
// exit status 2 (configuration) or 1 (a suite could not complete).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define HARTOGS_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                      \
    public:                                                          \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

HARTOGS_DEFINE_ERROR(InvalidPartition);
HARTOGS_DEFINE_ERROR(InvalidExponent);
HARTOGS_DEFINE_ERROR(DomainViolation);
HARTOGS_DEFINE_ERROR(ResourceLimit);
HARTOGS_DEFINE_ERROR(NonFiniteIntegrand);
HARTOGS_DEFINE_ERROR(MalformedIndex);
HARTOGS_DEFINE_ERROR(NotAdmissible);
HARTOGS_DEFINE_ERROR(SingularPair);
HARTOGS_DEFINE_ERROR(EmptySublevel);
HARTOGS_DEFINE_ERROR(ParameterOutOfRange);
HARTOGS_DEFINE_ERROR(Divergent);
HARTOGS_DEFINE_ERROR(ConfigError);

#undef HARTOGS_DEFINE_ERROR

} // namespace hartogs
