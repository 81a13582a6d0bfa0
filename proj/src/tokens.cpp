#include "palettekit/tokens.hpp"

#include "palettekit/error.hpp"

namespace palettekit {

Token::Token(int index) : index_(index) {
    if (index < 0 || index >= kVocabSize)
        fail(ErrorKind::InvalidArgument, "token index " + std::to_string(index) + " outside vocabulary");
}

TokenKind Token::kind() const noexcept {
    switch (index_) {
    case kPaletteStart: return TokenKind::PaletteStart;
    case kPaletteEnd: return TokenKind::PaletteEnd;
    case kPad: return TokenKind::Pad;
    case kMask: return TokenKind::Mask;
    default: return TokenKind::Color;
    }
}

ColorCode Token::code() const {
    if (!is_color()) fail(ErrorKind::MalformedSequence, "token is not a color code");
    return ColorCode(index_);
}

TokenSequence tokenize_palette(const Palette& p, std::size_t seq_len) {
    MaskedPalette slots(p.begin(), p.end());
    return tokenize_masked(slots, seq_len);
}

TokenSequence tokenize_masked(const MaskedPalette& p, std::size_t seq_len) {
    if (p.empty() || p.size() > Palette::kMaxColors)
        fail(ErrorKind::InvalidArgument, "palette must hold 1..8 slots");
    if (seq_len < p.size() + 2)
        fail(ErrorKind::SequenceTooShort, "sequence length " + std::to_string(seq_len) + " cannot hold " +
                                              std::to_string(p.size()) + " colors plus framing");
    TokenSequence out;
    out.reserve(seq_len);
    out.push_back(Token::palette_start());
    for (const auto& slot : p) out.push_back(slot ? Token::color(quantize(*slot)) : Token::mask());
    out.push_back(Token::palette_end());
    out.resize(seq_len, Token::pad());
    return out;
}

Palette detokenize(const TokenSequence& tokens) {
    if (tokens.empty() || tokens.front().kind() != TokenKind::PaletteStart)
        fail(ErrorKind::MalformedSequence, "sequence must begin with PSTART");
    std::vector<LabColor> colors;
    std::size_t i = 1;
    for (; i < tokens.size() && tokens[i].is_color(); ++i) colors.push_back(dequantize(tokens[i].code()));
    if (i == tokens.size() || tokens[i].kind() != TokenKind::PaletteEnd) {
        if (i < tokens.size() && tokens[i].kind() == TokenKind::Mask)
            fail(ErrorKind::MalformedSequence, "sequence contains MASK at position " + std::to_string(i));
        fail(ErrorKind::MalformedSequence, "expected PEND after colors at position " + std::to_string(i));
    }
    for (++i; i < tokens.size(); ++i)
        if (tokens[i].kind() != TokenKind::Pad)
            fail(ErrorKind::MalformedSequence, "non-PAD token after PEND at position " + std::to_string(i));
    if (colors.empty()) fail(ErrorKind::MalformedSequence, "sequence holds no colors");
    return Palette(std::move(colors));
}

} // namespace palettekit
