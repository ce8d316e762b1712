#pragma once

#include <stdexcept>
#include <string>

namespace reciprosim {

// Failure categories surfaced by the library. The CLI maps these onto exit
// codes; tests match on the category, not the message text.
enum class Err {
  OrderViolation,         // (tick, seq) not strictly increasing / gap in seq
  SchemaViolation,        // event field matrix violated
  ParseError,             // malformed log or config text
  UnknownKind,            // unrecognized event kind word
  DigestMismatch,         // log header digest != digest of supplied config
  ConservationViolation,  // resource/token/escrow identity broken
  SelfInteraction,        // actor == target where forbidden
  ConfigInvalid,          // structurally unusable config (missing section, bad type)
  OverrideRejected,       // override key not applicable to the scenario kind
  ValidationError,        // constraint violations (collected, one message)
  PairingMismatch,        // control log not a paired counterfactual of treatment
  LengthMismatch,         // compare() on unequal-length series
  LogTooLarge,            // oracle guard
  Overflow,               // integer amount arithmetic overflow
  HorizonExceeded,        // step() past configured horizon
  IoError,
};

const char* err_name(Err e);

class SimError : public std::runtime_error {
 public:
  SimError(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) {
  throw SimError(code, msg);
}

}  // namespace reciprosim
