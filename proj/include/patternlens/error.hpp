#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace patternlens {

enum class ErrorCode {
  InvalidArgument,
  DomainError,
  PatchTooSmall,
  InputTooSmall,
  ImageTooSmall,
  ZeroNormGram,
  ZeroNormFeature,
  NoValidTap,
  MissingTap,
  ChannelMismatch,
  ShapeMismatch,
  EigenFailure,
  ModelLoadError,
  IoError,
  EmptyCorpus,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const char* what) {
  if (!condition) fail(code, what);
}

}  // namespace patternlens
