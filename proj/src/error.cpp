#include "reciprosim/error.hpp"

namespace reciprosim {

const char* err_name(Err e) {
  switch (e) {
    case Err::OrderViolation: return "ORDER_VIOLATION";
    case Err::SchemaViolation: return "SCHEMA_VIOLATION";
    case Err::ParseError: return "PARSE_ERROR";
    case Err::UnknownKind: return "UNKNOWN_KIND";
    case Err::DigestMismatch: return "DIGEST_MISMATCH";
    case Err::ConservationViolation: return "CONSERVATION_VIOLATION";
    case Err::SelfInteraction: return "SELF_INTERACTION";
    case Err::ConfigInvalid: return "CONFIG_INVALID";
    case Err::OverrideRejected: return "OVERRIDE_REJECTED";
    case Err::ValidationError: return "VALIDATION_ERROR";
    case Err::PairingMismatch: return "PAIRING_MISMATCH";
    case Err::LengthMismatch: return "LENGTH_MISMATCH";
    case Err::LogTooLarge: return "LOG_TOO_LARGE";
    case Err::Overflow: return "OVERFLOW";
    case Err::HorizonExceeded: return "HORIZON_EXCEEDED";
    case Err::IoError: return "IO_ERROR";
  }
  return "UNKNOWN_ERROR";
}

}  // namespace reciprosim
