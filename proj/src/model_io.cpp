#include "gaze/model_io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "gaze/error.hpp"

namespace gaze {

namespace {

constexpr char kMagic[4] = {'G', 'Z', 'K', 'M'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a(const char* data, std::size_t n) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001B3ULL;
  }
  return h;
}

class Writer {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    out_.append(buf, sizeof(T));
  }

  void put_string(const std::string& s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }

  void put_bytes(const char* data, std::size_t n) { out_.append(data, n); }

  const std::string& bytes() const { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(const char* data, std::size_t size) : data_(data), size_(size) {}

  template <typename T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    if (pos_ + sizeof(T) > size_) throw Error("model file truncated");
    T value;
    std::memcpy(&value, data_ + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string get_string() {
    const std::uint32_t n = get<std::uint32_t>();
    if (pos_ + n > size_) throw Error("model file truncated");
    std::string s(data_ + pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == size_; }

 private:
  const char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace

const NormalizationContext* Model::find_context(
    std::string_view subject_id) const {
  for (const auto& ctx : contexts) {
    if (ctx.subject_id == subject_id) return &ctx;
  }
  return nullptr;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  Writer w;
  w.put_bytes(kMagic, sizeof(kMagic));
  w.put<std::uint32_t>(kVersion);
  w.put<std::uint8_t>(model.scheme.mode == SchemeMode::SixClass ? 0 : 1);
  w.put<std::int32_t>(model.context_window);

  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.plan.selected.size()));
  for (const std::int32_t i : model.plan.selected) w.put(i);
  w.put<std::int32_t>(model.plan.triangulation.point_count);
  w.put<std::uint32_t>(
      static_cast<std::uint32_t>(model.plan.triangulation.triangles.size()));
  for (const Triangle& t : model.plan.triangulation.triangles) {
    w.put(t.a);
    w.put(t.b);
    w.put(t.c);
  }

  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.contexts.size()));
  for (const auto& ctx : model.contexts) {
    w.put_string(ctx.subject_id);
    w.put(ctx.center_x);
    w.put(ctx.center_y);
    w.put(ctx.width);
    w.put(ctx.height);
    w.put<std::int32_t>(ctx.window_frames);
  }

  const Forest& f = model.forest;
  w.put<std::int32_t>(f.n_classes);
  w.put<std::int32_t>(f.n_features);
  w.put<std::int32_t>(f.params.n_trees);
  w.put<std::int32_t>(f.params.max_depth);
  w.put<std::int32_t>(f.params.features_per_split);
  w.put<std::int32_t>(f.params.min_samples_split);
  w.put<std::uint8_t>(f.params.bootstrap ? 1 : 0);
  w.put<std::uint64_t>(f.params.seed);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(f.importances.size()));
  for (const double v : f.importances) w.put(v);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(f.trees.size()));
  for (const Tree& tree : f.trees) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(tree.nodes.size()));
    for (const Tree::Node& n : tree.nodes) {
      w.put(n.feature);
      w.put(n.threshold);
      w.put(n.left);
      w.put(n.right);
      w.put(n.counts_begin);
    }
    w.put<std::uint32_t>(static_cast<std::uint32_t>(tree.leaf_counts.size()));
    for (const std::uint32_t c : tree.leaf_counts) w.put(c);
  }

  const std::uint64_t checksum = fnv1a(w.bytes().data(), w.bytes().size());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file: " + path.string());
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  out.write(reinterpret_cast<const char*>(&checksum), sizeof(checksum));
  if (!out) throw Error("model write failed: " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (bytes.size() < sizeof(kMagic) + sizeof(std::uint32_t) + 8) {
    throw Error("model file truncated");
  }
  std::uint64_t stored = 0;
  std::memcpy(&stored, bytes.data() + bytes.size() - 8, 8);
  if (fnv1a(bytes.data(), bytes.size() - 8) != stored) {
    throw Error("model file corrupted (checksum mismatch)");
  }

  Reader r(bytes.data(), bytes.size() - 8);
  char magic[4];
  std::memcpy(magic, bytes.data(), 4);
  r.get<std::uint32_t>();  // skip magic as one u32
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw Error("not a model file: " + path.string());
  }
  const std::uint32_t version = r.get<std::uint32_t>();
  if (version != kVersion) {
    throw Error("unsupported model version " + std::to_string(version));
  }

  Model model;
  model.scheme =
      r.get<std::uint8_t>() == 0 ? RegionScheme::six() : RegionScheme::two();
  model.context_window = r.get<std::int32_t>();

  const std::uint32_t n_selected = r.get<std::uint32_t>();
  model.plan.selected.resize(n_selected);
  for (auto& i : model.plan.selected) i = r.get<std::int32_t>();
  model.plan.triangulation.point_count = r.get<std::int32_t>();
  const std::uint32_t n_tris = r.get<std::uint32_t>();
  model.plan.triangulation.triangles.resize(n_tris);
  for (auto& t : model.plan.triangulation.triangles) {
    t.a = r.get<std::int32_t>();
    t.b = r.get<std::int32_t>();
    t.c = r.get<std::int32_t>();
  }

  const std::uint32_t n_ctx = r.get<std::uint32_t>();
  model.contexts.resize(n_ctx);
  for (auto& ctx : model.contexts) {
    ctx.subject_id = r.get_string();
    ctx.center_x = r.get<double>();
    ctx.center_y = r.get<double>();
    ctx.width = r.get<double>();
    ctx.height = r.get<double>();
    ctx.window_frames = r.get<std::int32_t>();
  }

  Forest& f = model.forest;
  f.n_classes = r.get<std::int32_t>();
  f.n_features = r.get<std::int32_t>();
  f.params.n_trees = r.get<std::int32_t>();
  f.params.max_depth = r.get<std::int32_t>();
  f.params.features_per_split = r.get<std::int32_t>();
  f.params.min_samples_split = r.get<std::int32_t>();
  f.params.bootstrap = r.get<std::uint8_t>() != 0;
  f.params.seed = r.get<std::uint64_t>();
  const std::uint32_t n_imp = r.get<std::uint32_t>();
  f.importances.resize(n_imp);
  for (auto& v : f.importances) v = r.get<double>();
  const std::uint32_t n_trees = r.get<std::uint32_t>();
  if (f.n_classes < 1) throw Error("model file corrupted (class count)");
  f.trees.resize(n_trees);
  for (auto& tree : f.trees) {
    const std::uint32_t n_nodes = r.get<std::uint32_t>();
    tree.nodes.resize(n_nodes);
    for (auto& n : tree.nodes) {
      n.feature = r.get<std::int32_t>();
      n.threshold = r.get<double>();
      n.left = r.get<std::int32_t>();
      n.right = r.get<std::int32_t>();
      n.counts_begin = r.get<std::uint32_t>();
    }
    const std::uint32_t n_counts = r.get<std::uint32_t>();
    tree.leaf_counts.resize(n_counts);
    for (auto& c : tree.leaf_counts) c = r.get<std::uint32_t>();
    // Structural sanity: children and count offsets must stay in range.
    for (const auto& n : tree.nodes) {
      if (n.feature >= 0) {
        if (n.left < 0 || n.right < 0 ||
            n.left >= static_cast<std::int32_t>(n_nodes) ||
            n.right >= static_cast<std::int32_t>(n_nodes) ||
            n.feature >= f.n_features) {
          throw Error("model file corrupted (tree structure)");
        }
      } else if (n.counts_begin + f.n_classes > n_counts) {
        throw Error("model file corrupted (leaf counts)");
      }
    }
  }
  if (!r.done()) throw Error("model file corrupted (trailing bytes)");
  return model;
}

}  // namespace gaze
