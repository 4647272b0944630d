#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "tokenpacker/errors.h"
#include "tokenpacker/io.h"

namespace tpk {
namespace {

namespace fs = std::filesystem;
const fs::path kGolden = TPK_GOLDEN_DIR;

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tpk_io_test";
  fs::create_directories(dir);
  return dir / name;
}

ProjectorConfig tiny_config() { return io::load_config(kGolden / "tiny_config.json"); }

TEST(FeatureFileTest, GoldenFixtureDecodes) {
  const Tensor t = io::load_features(kGolden / "features_2x3.tpkf");
  EXPECT_EQ(t, Tensor({2, 3}, {0.5, -1.25, 3.0, 1024.0, -0.0078125, 7.75}));
}

TEST(FeatureFileTest, EncodeMatchesGoldenBytes) {
  const Tensor t({2, 3}, {0.5, -1.25, 3.0, 1024.0, -0.0078125, 7.75});
  EXPECT_EQ(io::encode_features(t), io::read_file(kGolden / "features_2x3.tpkf"));
}

TEST(FeatureFileTest, RoundTripIsBitwiseOnReSave) {
  const auto f = io::synth_features(3, 24, 24, 8, 1);
  const fs::path p = temp_path("round.tpkf");
  io::save_features(p, f.levels[0]);
  const io::Bytes first = io::read_file(p);
  const Tensor loaded = io::load_features(p);
  EXPECT_EQ(loaded.shape(), f.levels[0].shape());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    EXPECT_EQ(loaded[i], static_cast<double>(static_cast<float>(f.levels[0][i])));
  }
  EXPECT_EQ(io::encode_features(loaded), first);
  EXPECT_EQ(io::decode_features(first), loaded);
}

TEST(FeatureFileTest, CorruptionsAreDistinctErrors) {
  io::Bytes good = io::read_file(kGolden / "features_2x3.tpkf");
  io::Bytes bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(io::decode_features(bad_magic), BadMagicError);

  io::Bytes truncated(good.begin(), good.end() - 3);
  EXPECT_THROW(io::decode_features(truncated), TruncatedError);
  EXPECT_THROW(io::decode_features(io::Bytes(good.begin(), good.begin() + 6)), TruncatedError);

  io::Bytes trailing = good;
  trailing.push_back(0);
  EXPECT_THROW(io::decode_features(trailing), FormatError);

  io::Bytes huge = good;
  huge[12] = 0xff;  // first dim -> enormous, payload cannot hold it
  huge[13] = 0xff;
  EXPECT_THROW(io::decode_features(huge), TruncatedError);
}

TEST(WeightFileTest, GoldenFixtureDecodes) {
  const auto w = io::load_weights(kGolden / "weights_tiny.tpkw", tiny_config());
  EXPECT_EQ(w.w_q[0], 0.25);
  EXPECT_EQ(w.w_k[0], -0.5);
  EXPECT_EQ(w.mlp_b1[0], -1.5);
  EXPECT_EQ(w.b_out[0], -2.5);
  EXPECT_FALSE(w.learnable_query.has_value());
  EXPECT_EQ(io::encode_weights(w), io::read_file(kGolden / "weights_tiny.tpkw"));
}

TEST(WeightFileTest, RoundTripWithLearnableQuery) {
  ProjectorConfig cfg;
  cfg.channels = 4;
  cfg.grid_h = cfg.grid_w = 8;
  cfg.levels = 2;
  cfg.out_dim = 6;
  cfg.query_mode = QueryMode::kLearnable;
  const auto w = ProjectorWeights::init(cfg, 5);
  const auto bytes = io::encode_weights(w);
  const auto back = io::decode_weights(bytes, cfg);
  ASSERT_TRUE(back.learnable_query.has_value());
  EXPECT_EQ(io::encode_weights(back), bytes);
}

TEST(WeightFileTest, ShapeMismatchNamesSection) {
  ProjectorConfig cfg = tiny_config();
  cfg.inner_dim = 2;  // w_q must now be 1 x 2
  try {
    io::load_weights(kGolden / "weights_tiny.tpkw", cfg);
    FAIL() << "expected ShapeMismatchError";
  } catch (const ShapeMismatchError& e) {
    EXPECT_EQ(e.section(), "w_q");
    EXPECT_NE(std::string(e.what()).find("w_q"), std::string::npos);
  }
}

TEST(WeightFileTest, MissingSectionIsReported) {
  ProjectorConfig cfg = tiny_config();
  ProjectorWeights w = ProjectorWeights::init(cfg, 1);
  auto bytes = io::encode_weights(w);
  // Learnable mode expects an extra section the file does not have.
  cfg.query_mode = QueryMode::kLearnable;
  try {
    io::decode_weights(bytes, cfg);
    FAIL() << "expected MissingSectionError";
  } catch (const MissingSectionError& e) {
    EXPECT_EQ(e.section(), "learnable_query");
  }
}

TEST(WeightFileTest, BadMagic) {
  io::Bytes bytes = io::read_file(kGolden / "weights_tiny.tpkw");
  bytes[3] = 'F';
  EXPECT_THROW(io::decode_weights(bytes, tiny_config()), BadMagicError);
  // A feature file is not a weight file.
  EXPECT_THROW(io::decode_weights(io::read_file(kGolden / "features_2x3.tpkf"), tiny_config()), BadMagicError);
}

TEST(ConfigTest, StrictParsing) {
  const auto cfg = tiny_config();
  EXPECT_EQ(cfg.channels, 1u);
  EXPECT_EQ(io::config_from_json(io::config_to_json(cfg)).out_dim, 1u);

  auto j = io::config_to_json(cfg);
  j["chanels"] = 3;
  EXPECT_THROW(io::config_from_json(j), InvalidArgument);
  j = io::config_to_json(cfg);
  j.erase("out_dim");
  EXPECT_THROW(io::config_from_json(j), InvalidArgument);
  j = io::config_to_json(cfg);
  j["query_mode"] = "random";
  EXPECT_THROW(io::config_from_json(j), InvalidArgument);
  j = io::config_to_json(cfg);
  j["scale"] = -2;
  EXPECT_THROW(io::config_from_json(j), InvalidArgument);

  const auto minimal = io::config_from_json({{"channels", 16}, {"out_dim", 32}});
  EXPECT_EQ(minimal.grid_h, 24u);
  EXPECT_EQ(minimal.scale, 2u);
  EXPECT_EQ(minimal.attn_dim(), 16u);
  EXPECT_EQ(minimal.heads, 1u);
  EXPECT_EQ(minimal.mlp_ratio, 4u);
}

TEST(SynthFeaturesTest, DeterministicDistinctBounded) {
  const auto a = io::synth_features(7, 24, 24, 16, 4);
  const auto b = io::synth_features(7, 24, 24, 16, 4);
  ASSERT_EQ(a.levels.size(), 4u);
  for (std::size_t l = 0; l < 4; ++l) EXPECT_EQ(a.levels[l], b.levels[l]);
  EXPECT_EQ(a.query_source, b.query_source);

  // 24*24*16 = 9216 elements per level; coincident draws are vanishingly rare.
  std::size_t equal = 0;
  for (std::size_t i = 0; i < a.levels[0].size(); ++i) equal += a.levels[0][i] == a.levels[1][i];
  EXPECT_EQ(equal, 0u);
  for (const auto& l : a.levels)
    for (double v : l.data()) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
  EXPECT_NE(io::synth_features(8, 24, 24, 16, 4).levels[0], a.levels[0]);
}

TEST(SequenceFileTest, RoundTripThroughManifest) {
  Tensor ov({2, 3}, 0.25);
  PatchGrid grid(2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) grid[i].push_back(Tensor({2, 3}, static_cast<double>(i * 3 + j)));
  const auto seq = assemble(ov, grid);
  const fs::path tokens = temp_path("seq.tpkf"), manifest = temp_path("seq.json");
  io::save_sequence(tokens, manifest, seq);
  const auto back = io::load_sequence(tokens, manifest);
  EXPECT_EQ(io::sequence_manifest(back), io::sequence_manifest(seq));
  const auto parsed = parse(back);
  EXPECT_EQ(parsed.overview, ov);
  EXPECT_EQ(parsed.patches[1][2], grid[1][2]);
}

TEST(PlanJsonTest, FieldNames) {
  const auto j = io::plan_to_json(make_slice_plan({1000, 500}, 336, 9, 0.1));
  for (const char* key : {"grid", "alpha", "resized", "pad", "patches", "overview", "params"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["grid"].contains("rows"));
  EXPECT_TRUE(j["grid"].contains("cols"));
  EXPECT_TRUE(j["pad"].contains("bottom"));
  EXPECT_TRUE(j["params"].contains("max_grids"));
  EXPECT_EQ(j["params"]["r"], 336);
  EXPECT_TRUE(j["patches"][0].contains("x"));
}

}  // namespace
}  // namespace tpk
