#include "teamnet/error.hpp"

namespace teamnet {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::UnparseableTimestamp: return "UnparseableTimestamp";
    case ErrorKind::UnknownRole: return "UnknownRole";
    case ErrorKind::ConflictingRole: return "ConflictingRole";
    case ErrorKind::UnsortedInput: return "UnsortedInput";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::CapacityViolation: return "CapacityViolation";
    case ErrorKind::DegenerateNetwork: return "DegenerateNetwork";
    case ErrorKind::AllZeroWeights: return "AllZeroWeights";
    case ErrorKind::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

static std::string decorate(ErrorKind kind, const std::string& what, std::size_t line)
{
    std::string out = to_string(kind);
    if (line != 0)
        out += " (line " + std::to_string(line) + ")";
    out += ": ";
    out += what;
    return out;
}

Error::Error(ErrorKind kind, const std::string& what, std::size_t line)
    : std::runtime_error(decorate(kind, what, line)), kind_(kind), message_(what), line_(line)
{
}

} // namespace teamnet
