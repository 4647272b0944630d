#include "tokenpacker/io.h"

#include <bit>
#include <fstream>
#include <map>
#include <set>

#include "tokenpacker/errors.h"
#include "tokenpacker/rng.h"

namespace tpk::io {

namespace {

using nlohmann::json;

constexpr char kFeatureMagic[4] = {'T', 'P', 'K', 'F'};
constexpr char kWeightMagic[4] = {'T', 'P', 'K', 'W'};
constexpr std::uint32_t kMaxRank = 8;

class Writer {
 public:
  void magic(const char (&m)[4]) { bytes_.insert(bytes_.end(), m, m + 4); }

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void tensor(const Tensor& t) {
    u32(static_cast<std::uint32_t>(t.rank()));
    for (auto d : t.shape()) u32(static_cast<std::uint32_t>(d));
    for (double v : t.data()) u32(std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }

  void string(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }

  Bytes take() { return std::move(bytes_); }

 private:
  Bytes bytes_;
};

class Reader {
 public:
  explicit Reader(const Bytes& bytes) : bytes_(bytes) {}

  void magic(const char (&m)[4], const char* what) {
    need(4, "magic");
    for (int i = 0; i < 4; ++i) {
      if (bytes_[pos_ + i] != static_cast<std::uint8_t>(m[i])) {
        throw BadMagicError(std::string("bad magic: not a ") + what + " file");
      }
    }
    pos_ += 4;
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  Tensor tensor(const std::string& what) {
    const std::uint32_t ndim = u32("ndim");
    if (ndim == 0 || ndim > kMaxRank) throw FormatError(what + ": unsupported rank " + std::to_string(ndim));
    Shape shape;
    std::uint64_t numel = 1;
    for (std::uint32_t i = 0; i < ndim; ++i) {
      const std::uint32_t d = u32("dims");
      if (d == 0) throw FormatError(what + ": zero-sized dimension");
      numel *= d;
      if (numel > (bytes_.size() - pos_) / 4 + 1) {
        throw TruncatedError(what + ": truncated payload");
      }
      shape.push_back(d);
    }
    need(numel * 4, "payload");
    std::vector<double> data(numel);
    for (auto& v : data) v = static_cast<double>(std::bit_cast<float>(u32("payload")));
    return Tensor(std::move(shape), std::move(data));
  }

  std::string string(const char* what) {
    const std::uint32_t n = u32(what);
    need(n, what);
    std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return s;
  }

  void finish() const {
    if (pos_ != bytes_.size()) {
      throw FormatError(std::to_string(bytes_.size() - pos_) + " trailing bytes after payload");
    }
  }

 private:
  void need(std::uint64_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) throw TruncatedError(std::string("truncated file while reading ") + what);
  }

  const Bytes& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Bytes encode_features(const Tensor& t) {
  Writer w;
  w.magic(kFeatureMagic);
  w.u32(kFormatVersion);
  w.tensor(t);
  return w.take();
}

Tensor decode_features(const Bytes& bytes) {
  Reader r(bytes);
  r.magic(kFeatureMagic, "feature");
  const std::uint32_t version = r.u32("version");
  if (version != kFormatVersion) throw FormatError("unsupported feature file version " + std::to_string(version));
  Tensor t = r.tensor("features");
  r.finish();
  return t;
}

Bytes encode_weights(const ProjectorWeights& weights) {
  const auto sections = named_tensors(weights);
  Writer w;
  w.magic(kWeightMagic);
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(sections.size()));
  for (const auto& [name, tensor] : sections) {
    w.string(name);
    w.tensor(*tensor);
  }
  return w.take();
}

ProjectorWeights decode_weights(const Bytes& bytes, const ProjectorConfig& cfg) {
  cfg.validate();
  Reader r(bytes);
  r.magic(kWeightMagic, "weight");
  const std::uint32_t version = r.u32("version");
  if (version != kFormatVersion) throw FormatError("unsupported weight file version " + std::to_string(version));
  const std::uint32_t count = r.u32("section count");
  std::map<std::string, Tensor> sections;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.string("section name");
    Tensor t = r.tensor(name);
    if (!sections.emplace(name, std::move(t)).second) throw FormatError("duplicate weight section '" + name + "'");
  }
  r.finish();

  ProjectorWeights w;
  if (cfg.query_mode == QueryMode::kLearnable) {
    w.learnable_query = Tensor();
  } else if (sections.count("learnable_query")) {
    throw ShapeMismatchError("learnable_query", "weight section 'learnable_query' present but query_mode is interpolated");
  }
  for (auto& [name, slot] : named_tensors(w)) {
    auto it = sections.find(name);
    if (it == sections.end()) throw MissingSectionError(name);
    *slot = std::move(it->second);
    sections.erase(it);
  }
  if (!sections.empty()) throw FormatError("unknown weight section '" + sections.begin()->first + "'");
  w.validate(cfg);
  return w;
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const Bytes& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

void save_features(const std::filesystem::path& path, const Tensor& t) { write_file(path, encode_features(t)); }
Tensor load_features(const std::filesystem::path& path) { return decode_features(read_file(path)); }
void save_weights(const std::filesystem::path& path, const ProjectorWeights& w) {
  write_file(path, encode_weights(w));
}
ProjectorWeights load_weights(const std::filesystem::path& path, const ProjectorConfig& cfg) {
  return decode_weights(read_file(path), cfg);
}

namespace {

const std::set<std::string> kConfigKeys = {"channels", "grid_h",    "grid_w",  "scale",   "levels",
                                           "heads",    "inner_dim", "mlp_ratio", "out_dim", "query_mode"};

std::size_t positive(const json& j, const std::string& key) {
  if (!j.at(key).is_number_integer() || j.at(key).get<long long>() <= 0) {
    throw InvalidArgument("config: '" + key + "' must be a positive integer");
  }
  return j.at(key).get<std::size_t>();
}

}  // namespace

ProjectorConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config: expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kConfigKeys.count(key)) throw InvalidArgument("config: unknown field '" + key + "'");
  }
  for (const char* key : {"channels", "out_dim"}) {
    if (!j.contains(key)) throw InvalidArgument(std::string("config: missing required field '") + key + "'");
  }
  ProjectorConfig cfg;
  cfg.channels = positive(j, "channels");
  cfg.out_dim = positive(j, "out_dim");
  if (j.contains("grid_h")) cfg.grid_h = positive(j, "grid_h");
  if (j.contains("grid_w")) cfg.grid_w = positive(j, "grid_w");
  if (j.contains("scale")) cfg.scale = positive(j, "scale");
  if (j.contains("levels")) cfg.levels = positive(j, "levels");
  if (j.contains("heads")) cfg.heads = positive(j, "heads");
  if (j.contains("inner_dim")) cfg.inner_dim = positive(j, "inner_dim");
  if (j.contains("mlp_ratio")) cfg.mlp_ratio = positive(j, "mlp_ratio");
  if (j.contains("query_mode")) {
    if (!j.at("query_mode").is_string()) throw InvalidArgument("config: 'query_mode' must be a string");
    cfg.query_mode = query_mode_from_string(j.at("query_mode").get<std::string>());
  }
  cfg.validate();
  return cfg;
}

json config_to_json(const ProjectorConfig& cfg) {
  return json{{"channels", cfg.channels}, {"grid_h", cfg.grid_h},       {"grid_w", cfg.grid_w},
              {"scale", cfg.scale},       {"levels", cfg.levels},       {"heads", cfg.heads},
              {"inner_dim", cfg.attn_dim()}, {"mlp_ratio", cfg.mlp_ratio}, {"out_dim", cfg.out_dim},
              {"query_mode", to_string(cfg.query_mode)}};
}

ProjectorConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("config '" + path.string() + "': " + e.what());
  }
  return config_from_json(j);
}

LevelFeatures synth_features(std::uint64_t seed, std::size_t grid_h, std::size_t grid_w, std::size_t channels,
                             std::size_t levels) {
  if (grid_h == 0 || grid_w == 0 || channels == 0 || levels == 0) {
    throw InvalidArgument("synth_features: dimensions must be positive");
  }
  auto draw = [&](std::uint64_t stream) {
    Rng rng(Rng::derive(seed, stream));
    Tensor t({grid_h, grid_w, channels});
    for (auto& v : t.data()) v = rng.uniform(-1.0, 1.0);
    return t;
  };
  LevelFeatures f;
  for (std::size_t l = 0; l < levels; ++l) f.levels.push_back(draw(l));
  f.query_source = draw(levels);
  return f;
}

json sequence_manifest(const TokenSequence& seq) {
  json elements = json::array();
  std::size_t offset = 0;
  std::size_t dims = 0;
  for (const auto& e : seq.elements) {
    if (const auto* b = std::get_if<VisualBlock>(&e)) {
      json item{{"type", "block"}, {"offset", offset}, {"rows", b->tokens.dim(0)}};
      if (b->source.kind == BlockSource::Kind::kOverview) {
        item["source"] = "overview";
      } else {
        item["source"] = "patch";
        item["row"] = b->source.row;
        item["col"] = b->source.col;
      }
      offset += b->tokens.dim(0);
      dims = b->tokens.dim(1);
      elements.push_back(std::move(item));
    } else {
      const bool comma = std::get<Separator>(e).kind == SeparatorKind::kComma;
      elements.push_back(json{{"type", "separator"}, {"kind", comma ? "comma" : "newline"}});
    }
  }
  return json{{"version", kFormatVersion}, {"rows", offset}, {"dims", dims}, {"elements", elements}};
}

void save_sequence(const std::filesystem::path& tokens_path, const std::filesystem::path& manifest_path,
                   const TokenSequence& seq) {
  const json manifest = sequence_manifest(seq);
  const std::size_t rows = manifest["rows"], dims = manifest["dims"];
  if (rows == 0) throw InvalidArgument("save_sequence: sequence has no visual blocks");
  std::vector<double> stacked;
  stacked.reserve(rows * dims);
  for (const auto& e : seq.elements) {
    if (const auto* b = std::get_if<VisualBlock>(&e)) {
      if (b->tokens.dim(1) != dims) throw DimensionError("save_sequence: blocks differ in width");
      stacked.insert(stacked.end(), b->tokens.data().begin(), b->tokens.data().end());
    }
  }
  save_features(tokens_path, Tensor({rows, dims}, std::move(stacked)));
  std::ofstream out(manifest_path);
  if (!out) throw Error("cannot open '" + manifest_path.string() + "' for writing");
  out << manifest.dump(2) << '\n';
}

TokenSequence load_sequence(const std::filesystem::path& tokens_path,
                            const std::filesystem::path& manifest_path) {
  const Tensor stacked = load_features(tokens_path);
  std::ifstream in(manifest_path);
  if (!in) throw Error("cannot open manifest '" + manifest_path.string() + "'");
  json manifest;
  try {
    in >> manifest;
    if (stacked.rank() != 2 || manifest.at("rows").get<std::size_t>() != stacked.dim(0) ||
        manifest.at("dims").get<std::size_t>() != stacked.dim(1)) {
      throw ShapeMismatchError("tokens", "token file shape " + shape_to_string(stacked.shape()) +
                                             " disagrees with manifest");
    }
    TokenSequence seq;
    const std::size_t dims = stacked.dim(1);
    for (const auto& item : manifest.at("elements")) {
      const std::string type = item.at("type");
      if (type == "separator") {
        const std::string kind = item.at("kind");
        if (kind != "comma" && kind != "newline") throw FormatError("manifest: unknown separator '" + kind + "'");
        seq.elements.emplace_back(Separator{kind == "comma" ? SeparatorKind::kComma : SeparatorKind::kNewline});
        continue;
      }
      if (type != "block") throw FormatError("manifest: unknown element type '" + type + "'");
      const std::size_t offset = item.at("offset"), rows = item.at("rows");
      if (rows == 0 || offset + rows > stacked.dim(0)) throw FormatError("manifest: block rows out of range");
      std::vector<double> data(stacked.data().begin() + static_cast<std::ptrdiff_t>(offset * dims),
                               stacked.data().begin() + static_cast<std::ptrdiff_t>((offset + rows) * dims));
      const std::string source = item.at("source");
      if (source != "overview" && source != "patch") throw FormatError("manifest: unknown source '" + source + "'");
      const BlockSource src =
          source == "overview"
              ? BlockSource::overview()
              : BlockSource::patch(item.at("row").get<std::size_t>(), item.at("col").get<std::size_t>());
      seq.elements.emplace_back(VisualBlock{src, Tensor({rows, dims}, std::move(data))});
    }
    return seq;
  } catch (const json::exception& e) {
    throw FormatError("manifest '" + manifest_path.string() + "': " + e.what());
  }
}

json score_to_json(const GridSpec& grid, const GridScore& s) {
  return json{{"rows", grid.rows},   {"cols", grid.cols},        {"alpha_h", s.alpha_h},
              {"alpha_w", s.alpha_w}, {"alpha", s.alpha},         {"padding", s.padding},
              {"overlap", s.overlap}, {"total", s.total}};
}

json plan_to_json(const SlicePlan& plan) {
  json patches = json::array();
  for (const auto& p : plan.patches) patches.push_back(json{{"x", p.x}, {"y", p.y}, {"w", p.w}, {"h", p.h}});
  const auto& ov = plan.overview;
  return json{
      {"image", {{"h", plan.image.height}, {"w", plan.image.width}}},
      {"grid", {{"rows", plan.grid.rows}, {"cols", plan.grid.cols}}},
      {"alpha", plan.alpha},
      {"alpha_h", plan.alpha_h},
      {"alpha_w", plan.alpha_w},
      {"resized", {{"h", plan.resized_h}, {"w", plan.resized_w}}},
      {"pad", {{"bottom", plan.pad_bottom}, {"right", plan.pad_right}}},
      {"patches", patches},
      {"overview",
       {{"size", ov.size},
        {"alpha", ov.alpha},
        {"resized", {{"h", ov.resized_h}, {"w", ov.resized_w}}},
        {"pad", {{"bottom", ov.pad_bottom}, {"right", ov.pad_right}}}}},
      {"params", {{"r", plan.cell_size}, {"beta", plan.beta}, {"max_grids", plan.max_grids}}},
  };
}

}  // namespace tpk::io
