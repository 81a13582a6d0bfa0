#pragma once

#include "palettekit/color.hpp"

#include <optional>
#include <vector>

namespace palettekit {

enum class TokenKind { Color, PaletteStart, PaletteEnd, Pad, Mask };

/// Vocabulary entry. Color codes occupy [0, 4095]; the four special tokens
/// follow them.
class Token {
public:
    static constexpr int kPaletteStart = ColorCode::kCount;
    static constexpr int kPaletteEnd = ColorCode::kCount + 1;
    static constexpr int kPad = ColorCode::kCount + 2;
    static constexpr int kMask = ColorCode::kCount + 3;
    static constexpr int kVocabSize = ColorCode::kCount + 4;

    Token() = default;
    explicit Token(int index);
    static Token color(ColorCode code) { return Token(code.value()); }
    static Token palette_start() { return Token(kPaletteStart); }
    static Token palette_end() { return Token(kPaletteEnd); }
    static Token pad() { return Token(kPad); }
    static Token mask() { return Token(kMask); }

    int index() const noexcept { return index_; }
    TokenKind kind() const noexcept;
    bool is_color() const noexcept { return index_ < ColorCode::kCount; }
    ColorCode code() const; // throws MalformedSequence for special tokens

    friend bool operator==(const Token&, const Token&) = default;

private:
    int index_ = kPad;
};

using TokenSequence = std::vector<Token>;

/// [PSTART, c1..ck, PEND, PAD...] of exactly seq_len tokens.
TokenSequence tokenize_palette(const Palette& p, std::size_t seq_len);

/// Inverse of tokenize_palette; colors come back as bin centers.
Palette detokenize(const TokenSequence& tokens);

/// Palette slots where std::nullopt stands for a masked color.
using MaskedPalette = std::vector<std::optional<LabColor>>;

TokenSequence tokenize_masked(const MaskedPalette& p, std::size_t seq_len);

} // namespace palettekit
