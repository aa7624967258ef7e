#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dcnet {

enum class ErrorCode {
    InvalidArgument = 1,
    Decode,
    Authentication,
    Range,
    IncompleteRound,
    LengthCap,
    OwnAnnouncementLost,
    CannotVerify,
    CannotAdjudicate,
    ProtocolLogic,
    Routing,
    Deadlock,
    Infeasible,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

#define DCNET_DEFINE_ERROR(Name, Code)                                            \
    class Name : public Error {                                                   \
    public:                                                                       \
        explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {} \
    }

DCNET_DEFINE_ERROR(InvalidArgument, InvalidArgument);
DCNET_DEFINE_ERROR(DecodeError, Decode);
DCNET_DEFINE_ERROR(AuthenticationError, Authentication);
DCNET_DEFINE_ERROR(RangeError, Range);
DCNET_DEFINE_ERROR(LengthCapError, LengthCap);
DCNET_DEFINE_ERROR(OwnAnnouncementLost, OwnAnnouncementLost);
DCNET_DEFINE_ERROR(CannotVerify, CannotVerify);
DCNET_DEFINE_ERROR(CannotAdjudicate, CannotAdjudicate);
DCNET_DEFINE_ERROR(ProtocolLogicFault, ProtocolLogic);
DCNET_DEFINE_ERROR(RoutingError, Routing);
DCNET_DEFINE_ERROR(DeadlockError, Deadlock);
DCNET_DEFINE_ERROR(InfeasibleSpec, Infeasible);
DCNET_DEFINE_ERROR(IoError, Io);

#undef DCNET_DEFINE_ERROR

// A DC phase was evaluated before every peer contributed.
class IncompleteRoundError : public Error {
public:
    IncompleteRoundError(const std::string& what, std::vector<std::size_t> missing)
        : Error(ErrorCode::IncompleteRound, what), missing_(std::move(missing)) {}
    const std::vector<std::size_t>& missing_peers() const { return missing_; }

private:
    std::vector<std::size_t> missing_;
};

}  // namespace dcnet
