#pragma once

#include <stdexcept>
#include <string>

namespace growthsim
{

/// Base of every error raised by the simulator. kind() is the stable,
/// machine-parsable name printed by the CLI.
class Error : public std::runtime_error
{
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind))
    {
    }

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define GROWTHSIM_DEFINE_ERROR(Name)                                          \
    class Name : public Error                                                 \
    {                                                                         \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(#Name, what) {}        \
    }

GROWTHSIM_DEFINE_ERROR(SingularTensor);
GROWTHSIM_DEFINE_ERROR(NoInverse);
GROWTHSIM_DEFINE_ERROR(CFLViolation);
GROWTHSIM_DEFINE_ERROR(MissingInflowBC);
GROWTHSIM_DEFINE_ERROR(OutOfDomain);
GROWTHSIM_DEFINE_ERROR(GrowthNotSupported);
GROWTHSIM_DEFINE_ERROR(NotReduced);
GROWTHSIM_DEFINE_ERROR(SingularSystem);
GROWTHSIM_DEFINE_ERROR(NegativeHeight);
GROWTHSIM_DEFINE_ERROR(OutOfBody);
GROWTHSIM_DEFINE_ERROR(IncompatibleAnsatz);
GROWTHSIM_DEFINE_ERROR(NoOracle);
GROWTHSIM_DEFINE_ERROR(ParseError);
GROWTHSIM_DEFINE_ERROR(ValidationError);
GROWTHSIM_DEFINE_ERROR(IoError);
GROWTHSIM_DEFINE_ERROR(UsageError);

#undef GROWTHSIM_DEFINE_ERROR

} // namespace growthsim
