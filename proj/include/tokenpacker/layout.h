#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "tokenpacker/tensor.h"

namespace tpk {

enum class SeparatorKind { kComma, kNewline };

struct BlockSource {
  enum class Kind { kOverview, kPatch };
  Kind kind = Kind::kOverview;
  std::size_t row = 0;
  std::size_t col = 0;

  static BlockSource overview() { return {Kind::kOverview, 0, 0}; }
  static BlockSource patch(std::size_t r, std::size_t c) { return {Kind::kPatch, r, c}; }
  friend bool operator==(const BlockSource&, const BlockSource&) = default;
};

struct VisualBlock {
  BlockSource source;
  Tensor tokens;  // M x D
};

struct Separator {
  SeparatorKind kind;
};

using SequenceElement = std::variant<VisualBlock, Separator>;

// Overview block, newline, then each patch row with commas between
// horizontally adjacent blocks and a newline after the row's last block.
struct TokenSequence {
  std::vector<SequenceElement> elements;
};

// Row-major grid of M x D token blocks; rows may be empty only when the grid is.
using PatchGrid = std::vector<std::vector<Tensor>>;

TokenSequence assemble(const Tensor& overview, const PatchGrid& patches);

struct ParsedSequence {
  Tensor overview;
  PatchGrid patches;
};

// Exact inverse of assemble. Throws ParseError naming the offending element.
ParsedSequence parse(const TokenSequence& seq);

struct TokenCount {
  std::size_t visual = 0;
  std::size_t commas = 0;
  std::size_t newlines = 0;

  std::size_t separators() const { return commas + newlines; }
  std::size_t total() const { return visual + separators(); }
};

TokenCount token_count(std::size_t rows, std::size_t cols, std::size_t tokens_per_block, bool with_overview);
// Counts what a sequence actually contains.
TokenCount count_tokens(const TokenSequence& seq);

}  // namespace tpk
