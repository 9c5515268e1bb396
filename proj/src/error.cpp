#include "patternlens/error.hpp"

namespace patternlens {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::PatchTooSmall: return "PatchTooSmall";
    case ErrorCode::InputTooSmall: return "InputTooSmall";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::ZeroNormGram: return "ZeroNormGram";
    case ErrorCode::ZeroNormFeature: return "ZeroNormFeature";
    case ErrorCode::NoValidTap: return "NoValidTap";
    case ErrorCode::MissingTap: return "MissingTap";
    case ErrorCode::ChannelMismatch: return "ChannelMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::ModelLoadError: return "ModelLoadError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace patternlens
