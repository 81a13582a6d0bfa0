#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace palettekit {

enum class ErrorKind {
    InvalidArgument,
    InvalidColor,
    SequenceTooShort,
    MalformedSequence,
    Io,
    Decode,
    TooFewPoints,
    PaletteTooLarge,
    ShapeMismatch,
    ImageTooSmall,
    InvalidConfig,
    TooManyMasks,
    MissingCondition,
    UnexpectedCondition,
    EmptyTargets,
    EmptyDataset,
    NoMaskedSlots,
    Format,
    Version,
    Parse,
    DuplicateId,
    MissingEmbedding,
    EmptyCorpus,
    TooManyPoints,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries one of the kinds above so the
// CLI can map it onto an exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace palettekit
