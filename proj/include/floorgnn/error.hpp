#pragma once

#include <stdexcept>
#include <string>

namespace floorgnn {

enum class ErrorCode {
  io,
  schema,
  bad_split,
  bad_config,
  degenerate,
  unknown_category,
  empty_edges,
  empty_batch,
  bad_index,
  not_scalar,
  tape_consumed,
  shape,
  empty_data,
  version,
  config_mismatch,
  bad_perplexity,
};

inline const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::io: return "E_IO";
    case ErrorCode::schema: return "E_SCHEMA";
    case ErrorCode::bad_split: return "E_BAD_SPLIT";
    case ErrorCode::bad_config: return "E_BAD_CONFIG";
    case ErrorCode::degenerate: return "E_DEGENERATE";
    case ErrorCode::unknown_category: return "E_UNKNOWN_CATEGORY";
    case ErrorCode::empty_edges: return "E_EMPTY_EDGES";
    case ErrorCode::empty_batch: return "E_EMPTY_BATCH";
    case ErrorCode::bad_index: return "E_BAD_INDEX";
    case ErrorCode::not_scalar: return "E_NOT_SCALAR";
    case ErrorCode::tape_consumed: return "E_TAPE_CONSUMED";
    case ErrorCode::shape: return "E_SHAPE";
    case ErrorCode::empty_data: return "E_EMPTY_DATA";
    case ErrorCode::version: return "E_VERSION";
    case ErrorCode::config_mismatch: return "E_CONFIG_MISMATCH";
    case ErrorCode::bad_perplexity: return "E_BAD_PERPLEXITY";
  }
  return "E_UNKNOWN";
}

// All library errors surface as this exception; the CLI maps it to a
// one-line diagnostic and a nonzero exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const { return code_; }
  const std::string& message() const { return message_; }  // without the E_* prefix

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace floorgnn
