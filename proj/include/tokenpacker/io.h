#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tokenpacker/layout.h"
#include "tokenpacker/projector.h"
#include "tokenpacker/slicer.h"
#include "tokenpacker/tensor.h"
#include "json.hpp"

namespace tpk::io {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::uint32_t kFormatVersion = 1;

// Feature file, all integers little-endian u32, no padding:
//   "TPKF" | version | ndim | dims[ndim] | f32 payload (row-major)
Bytes encode_features(const Tensor& t);
Tensor decode_features(const Bytes& bytes);

// Weight file:
//   "TPKW" | version | section count |
//   per section: name length | UTF-8 name | ndim | dims[ndim] | f32 payload
Bytes encode_weights(const ProjectorWeights& w);
// Checks every section against cfg; a missing section raises
// MissingSectionError, a wrong shape ShapeMismatchError.
ProjectorWeights decode_weights(const Bytes& bytes, const ProjectorConfig& cfg);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const Bytes& bytes);

void save_features(const std::filesystem::path& path, const Tensor& t);
Tensor load_features(const std::filesystem::path& path);
void save_weights(const std::filesystem::path& path, const ProjectorWeights& w);
ProjectorWeights load_weights(const std::filesystem::path& path, const ProjectorConfig& cfg);

// Strict: unknown keys are rejected.
ProjectorConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ProjectorConfig& cfg);
ProjectorConfig load_config(const std::filesystem::path& path);

// Uniform features in (-1, 1). Level l uses stream l, the query source
// stream L, all derived from `seed`.
LevelFeatures synth_features(std::uint64_t seed, std::size_t grid_h, std::size_t grid_w, std::size_t channels,
                             std::size_t levels);

// All visual blocks stacked into one (total rows) x D feature file, plus a
// manifest describing block order and separators.
void save_sequence(const std::filesystem::path& tokens_path, const std::filesystem::path& manifest_path,
                   const TokenSequence& seq);
TokenSequence load_sequence(const std::filesystem::path& tokens_path,
                            const std::filesystem::path& manifest_path);
nlohmann::json sequence_manifest(const TokenSequence& seq);

nlohmann::json plan_to_json(const SlicePlan& plan);
nlohmann::json score_to_json(const GridSpec& grid, const GridScore& score);

}  // namespace tpk::io
