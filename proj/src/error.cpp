#include "palettekit/error.hpp"

namespace palettekit {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidColor: return "InvalidColor";
    case ErrorKind::SequenceTooShort: return "SequenceTooShort";
    case ErrorKind::MalformedSequence: return "MalformedSequence";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Decode: return "DecodeError";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::PaletteTooLarge: return "PaletteTooLarge";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ImageTooSmall: return "ImageTooSmall";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::TooManyMasks: return "TooManyMasks";
    case ErrorKind::MissingCondition: return "MissingCondition";
    case ErrorKind::UnexpectedCondition: return "UnexpectedCondition";
    case ErrorKind::EmptyTargets: return "EmptyTargets";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::NoMaskedSlots: return "NoMaskedSlots";
    case ErrorKind::Format: return "FormatError";
    case ErrorKind::Version: return "VersionError";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::MissingEmbedding: return "MissingEmbedding";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::TooManyPoints: return "TooManyPoints";
    }
    return "Unknown";
}

} // namespace palettekit
