#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace ctlab {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

inline constexpr int kUnreached = std::numeric_limits<int>::max();

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: bad config, unknown names, broken preconditions on user data.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Vertex cap, memory cap or other configured resource limit exceeded.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

// Caller violated an operation's precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A construction needed a vertex that lies outside the finite ball.
class TruncationError : public Error {
public:
    using Error::Error;
};

}  // namespace ctlab
