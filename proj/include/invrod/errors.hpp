#pragma once

#include <stdexcept>
#include <string>

namespace invrod {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AntiparallelTangents : SimError {
    explicit AntiparallelTangents(int edge = -1)
        : SimError("antiparallel tangents" +
                   (edge >= 0 ? " at edge " + std::to_string(edge) : std::string())),
          edge_index(edge) {}
    int edge_index;
};

struct TurningSingularity : SimError {
    explicit TurningSingularity(int bend = -1)
        : SimError("edges folded back" +
                   (bend >= 0 ? " at bend " + std::to_string(bend) : std::string())),
          bend_index(bend) {}
    int bend_index;
};

struct ZeroRestLength : SimError {
    ZeroRestLength() : SimError("rest length must be positive") {}
};

struct DegenerateEdge : SimError {
    explicit DegenerateEdge(int edge = -1)
        : SimError("zero-length edge" +
                   (edge >= 0 ? " " + std::to_string(edge) : std::string())) {}
};

struct TooFewNodes : SimError {
    TooFewNodes() : SimError("a chain needs at least 2 nodes") {}
};

struct NotIncident : SimError {
    NotIncident() : SimError("edge not incident to node") {}
};

struct InvalidBend : SimError {
    explicit InvalidBend(const std::string &what) : SimError("invalid bend: " + what) {}
};

struct ParseError : SimError {
    ParseError(int line, const std::string &what)
        : SimError("parse error at line " + std::to_string(line) + ": " + what),
          line_number(line) {}
    int line_number;
};

struct NewtonStalled : SimError {
    explicit NewtonStalled(double residual)
        : SimError("Newton stalled, residual " + std::to_string(residual)) {}
};

struct LinearSolveSingular : SimError {
    LinearSolveSingular() : SimError("linear system singular") {}
};

struct NonFiniteState : SimError {
    NonFiniteState() : SimError("state contains non-finite values") {}
};

struct OutOfRange : SimError {
    explicit OutOfRange(const std::string &what) : SimError("out of range: " + what) {}
};

struct UnknownKind : SimError {
    explicit UnknownKind(const std::string &what) : SimError("unknown kind: " + what) {}
};

struct ZeroFinalEnergy : SimError {
    ZeroFinalEnergy() : SimError("final energy too small to normalize") {}
};

} // namespace invrod
