#pragma once

#include <stdexcept>
#include <string>

namespace ergodic {

enum class ErrorKind {
  MalformedGraph,
  CrossComponent,
  DisconnectedClass,
  EmptySet,
  NotDisjoint,
  TargetOutOfRange,
  MalformedFlow,
  InsufficientCapacity,
  NotClosed,
  NotCoherent,
  IterationCap,
  BadMagnification,
  InvariantBreach,
  NoNextBlock,
  TooLargeForExact,
  BadModel,
  BadDenominator,
  StallDiagnostic,
  Parse,
  Io,
  BadArgument,
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::MalformedGraph: return "MalformedGraph";
    case ErrorKind::CrossComponent: return "CrossComponent";
    case ErrorKind::DisconnectedClass: return "DisconnectedClass";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::NotDisjoint: return "NotDisjoint";
    case ErrorKind::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorKind::MalformedFlow: return "MalformedFlow";
    case ErrorKind::InsufficientCapacity: return "InsufficientCapacity";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::NotCoherent: return "NotCoherent";
    case ErrorKind::IterationCap: return "IterationCap";
    case ErrorKind::BadMagnification: return "BadMagnification";
    case ErrorKind::InvariantBreach: return "InvariantBreach";
    case ErrorKind::NoNextBlock: return "NoNextBlock";
    case ErrorKind::TooLargeForExact: return "TooLargeForExact";
    case ErrorKind::BadModel: return "BadModel";
    case ErrorKind::BadDenominator: return "BadDenominator";
    case ErrorKind::StallDiagnostic: return "StallDiagnostic";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
    case ErrorKind::BadArgument: return "BadArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ergodic
