#include "tokenpacker/layout.h"

#include <string>

#include "tokenpacker/errors.h"

namespace tpk {

TokenSequence assemble(const Tensor& overview, const PatchGrid& patches) {
  if (overview.rank() != 2) throw DimensionError("overview block must be M x D");
  const std::size_t cols = patches.empty() ? 0 : patches.front().size();
  for (std::size_t i = 0; i < patches.size(); ++i) {
    if (patches[i].size() != cols || cols == 0) {
      throw DimensionError("ragged patch grid: row " + std::to_string(i) + " has " +
                           std::to_string(patches[i].size()) + " blocks, expected " + std::to_string(cols));
    }
    for (const auto& block : patches[i]) {
      if (block.shape() != overview.shape()) {
        throw DimensionError("patch block shape " + shape_to_string(block.shape()) + " differs from overview " +
                             shape_to_string(overview.shape()));
      }
    }
  }

  TokenSequence seq;
  seq.elements.emplace_back(VisualBlock{BlockSource::overview(), overview});
  seq.elements.emplace_back(Separator{SeparatorKind::kNewline});
  for (std::size_t i = 0; i < patches.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (j) seq.elements.emplace_back(Separator{SeparatorKind::kComma});
      seq.elements.emplace_back(VisualBlock{BlockSource::patch(i, j), patches[i][j]});
    }
    seq.elements.emplace_back(Separator{SeparatorKind::kNewline});
  }
  return seq;
}

namespace {

class Parser {
 public:
  explicit Parser(const TokenSequence& seq) : elems_(seq.elements) {}

  ParsedSequence run() {
    ParsedSequence out;
    const VisualBlock& ov = expect_block("overview block");
    if (ov.source.kind != BlockSource::Kind::kOverview) fail("expected overview block first");
    if (ov.tokens.rank() != 2) fail("overview block must be M x D");
    out.overview = ov.tokens;
    expect_separator(SeparatorKind::kNewline, "newline after overview");

    std::size_t cols = 0;
    while (pos_ < elems_.size()) {
      const std::size_t row = out.patches.size();
      std::vector<Tensor> blocks;
      for (;;) {
        const VisualBlock& b = expect_block("patch block");
        if (b.source != BlockSource::patch(row, blocks.size())) {
          --pos_;
          fail("patch provenance does not match position (" + std::to_string(row) + "," +
               std::to_string(blocks.size()) + ")");
        }
        if (b.tokens.shape() != out.overview.shape()) {
          --pos_;
          fail("patch block shape " + shape_to_string(b.tokens.shape()) + " differs from overview");
        }
        blocks.push_back(b.tokens);
        if (row > 0 && blocks.size() == cols) break;
        if (pos_ < elems_.size()) {
          const auto* sep = std::get_if<Separator>(&elems_[pos_]);
          if (sep && sep->kind == SeparatorKind::kNewline && row == 0) break;
        }
        expect_separator(SeparatorKind::kComma, "comma between patches");
      }
      if (row == 0) cols = blocks.size();
      expect_separator(SeparatorKind::kNewline, "newline at end of row " + std::to_string(row));
      out.patches.push_back(std::move(blocks));
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

  const VisualBlock& expect_block(const std::string& what) {
    if (pos_ >= elems_.size()) fail("unexpected end of sequence, expected " + what);
    const auto* b = std::get_if<VisualBlock>(&elems_[pos_]);
    if (!b) fail("expected " + what + ", found separator");
    ++pos_;
    return *b;
  }

  void expect_separator(SeparatorKind kind, const std::string& what) {
    if (pos_ >= elems_.size()) fail("unexpected end of sequence, expected " + what);
    const auto* s = std::get_if<Separator>(&elems_[pos_]);
    if (!s || s->kind != kind) fail("expected " + what);
    ++pos_;
  }

  const std::vector<SequenceElement>& elems_;
  std::size_t pos_ = 0;
};

}  // namespace

ParsedSequence parse(const TokenSequence& seq) { return Parser(seq).run(); }

TokenCount token_count(std::size_t rows, std::size_t cols, std::size_t tokens_per_block, bool with_overview) {
  TokenCount tc;
  const std::size_t blocks = rows * cols + (with_overview ? 1 : 0);
  tc.visual = blocks * tokens_per_block;
  tc.commas = cols > 0 ? rows * (cols - 1) : 0;
  tc.newlines = rows + (with_overview ? 1 : 0);
  return tc;
}

TokenCount count_tokens(const TokenSequence& seq) {
  TokenCount tc;
  for (const auto& e : seq.elements) {
    if (const auto* b = std::get_if<VisualBlock>(&e)) {
      tc.visual += b->tokens.dim(0);
    } else if (std::get<Separator>(e).kind == SeparatorKind::kComma) {
      ++tc.commas;
    } else {
      ++tc.newlines;
    }
  }
  return tc;
}

}  // namespace tpk
