#include "terranav/cnn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace terranav::traversability {

std::size_t LayerShape::weight_count() const {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

std::vector<LayerShape> reference_architecture() {
  using K = LayerShape::Kind;
  return {
      {K::Conv, {32, 1, 3, 3}},  {K::Conv, {64, 32, 3, 3}}, {K::Conv, {64, 64, 3, 3}},
      {K::Dense, {128, 1024}},   {K::Dense, {64, 128}},     {K::Dense, {1, 64}},
  };
}

CnnModel::CnnModel() {
  for (const auto& shape : reference_architecture()) {
    layers_.push_back({shape, std::vector<float>(shape.weight_count(), 0.0f),
                       std::vector<float>(shape.bias_count(), 0.0f)});
  }
}

CnnModel::CnnModel(std::vector<CnnLayer> layers) : layers_(std::move(layers)) { validate(); }

void CnnModel::validate() const {
  const auto arch = reference_architecture();
  if (layers_.size() != arch.size()) {
    throw WeightsError("cnn: expected " + std::to_string(arch.size()) + " layers, got " +
                       std::to_string(layers_.size()));
  }
  for (std::size_t i = 0; i < arch.size(); ++i) {
    const auto& l = layers_[i];
    if (!(l.shape == arch[i])) throw WeightsError("cnn: layer " + std::to_string(i) + " shape mismatch");
    if (l.weights.size() != l.shape.weight_count() || l.biases.size() != l.shape.bias_count()) {
      throw WeightsError("cnn: layer " + std::to_string(i) + " parameter count mismatch");
    }
  }
}

namespace {

struct Tensor {
  int channels = 0, height = 0, width = 0;
  std::vector<float> data;

  float* plane(int c) { return data.data() + static_cast<std::size_t>(c) * height * width; }
  const float* plane(int c) const {
    return data.data() + static_cast<std::size_t>(c) * height * width;
  }
};

// Unpadded 3x3 convolution, ReLU, then 2x2 max-pool with floor division.
Tensor conv_relu_pool(const Tensor& in, const CnnLayer& layer) {
  const int filters = layer.shape.dims[0];
  const int oh = in.height - 2, ow = in.width - 2;
  std::vector<float> conv(static_cast<std::size_t>(oh) * ow);

  Tensor out;
  out.channels = filters;
  out.height = oh / 2;
  out.width = ow / 2;
  out.data.assign(static_cast<std::size_t>(filters) * out.height * out.width, 0.0f);

  for (int f = 0; f < filters; ++f) {
    std::fill(conv.begin(), conv.end(), layer.biases[f]);
    for (int c = 0; c < in.channels; ++c) {
      const float* src = in.plane(c);
      const float* k = layer.weights.data() + (static_cast<std::size_t>(f) * in.channels + c) * 9;
      for (int ky = 0; ky < 3; ++ky) {
        for (int kx = 0; kx < 3; ++kx) {
          const float w = k[ky * 3 + kx];
          for (int y = 0; y < oh; ++y) {
            const float* row = src + static_cast<std::size_t>(y + ky) * in.width + kx;
            float* dst = conv.data() + static_cast<std::size_t>(y) * ow;
            for (int x = 0; x < ow; ++x) dst[x] += w * row[x];
          }
        }
      }
    }
    float* pooled = out.plane(f);
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) {
        const float* a = conv.data() + static_cast<std::size_t>(2 * y) * ow + 2 * x;
        const float m = std::max(std::max(a[0], a[1]), std::max(a[ow], a[ow + 1]));
        pooled[y * out.width + x] = std::max(m, 0.0f);
      }
    }
  }
  return out;
}

std::vector<float> dense(const std::vector<float>& in, const CnnLayer& layer, bool relu) {
  const int outs = layer.shape.dims[0], ins = layer.shape.dims[1];
  std::vector<float> out(static_cast<std::size_t>(outs));
  for (int o = 0; o < outs; ++o) {
    const float* w = layer.weights.data() + static_cast<std::size_t>(o) * ins;
    float acc = layer.biases[o];
    for (int i = 0; i < ins; ++i) acc += w[i] * in[i];
    out[o] = relu ? std::max(acc, 0.0f) : acc;
  }
  return out;
}

}  // namespace

double CnnModel::forward(const Patch& patch) const {
  if (patch.side != input_side() || patch.heights.size() != 48u * 48u) {
    throw std::invalid_argument("cnn: expected a 48x48 patch");
  }
  Tensor t;
  t.channels = 1;
  t.height = t.width = patch.side;
  t.data.assign(patch.heights.begin(), patch.heights.end());
  for (std::size_t i = 0; i < 3; ++i) t = conv_relu_pool(t, layers_[i]);

  std::vector<float> v = std::move(t.data);  // (channel, row, col) flatten
  v = dense(v, layers_[3], true);
  v = dense(v, layers_[4], true);
  const double logit = dense(v, layers_[5], false)[0];
  const double y = 1.0 / (1.0 + std::exp(-logit));
  return std::clamp(y, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

std::vector<double> CnnModel::forward_batch(std::span<const Patch> patches) const {
  std::vector<double> out;
  out.reserve(patches.size());
  for (const auto& p : patches) out.push_back(forward(p));
  return out;
}

CnnModel CnnModel::random(std::uint64_t seed, float scale) {
  CnnModel m;
  std::mt19937_64 rng(seed);
  for (auto& layer : m.layers_) {
    const auto& d = layer.shape.dims;
    const double fan_in = layer.shape.kind == LayerShape::Kind::Conv ? d[1] * d[2] * d[3] : d[1];
    std::normal_distribution<float> w(0.0f, scale * static_cast<float>(std::sqrt(2.0 / fan_in)));
    std::uniform_real_distribution<float> b(-0.05f * scale, 0.05f * scale);
    for (auto& x : layer.weights) x = w(rng);
    for (auto& x : layer.biases) x = b(rng);
  }
  return m;
}

namespace {

std::string fingerprint_line(const LayerShape& s) {
  std::ostringstream os;
  os << (s.kind == LayerShape::Kind::Conv ? "conv" : "dense");
  for (int d : s.dims) os << ' ' << d;
  return os.str();
}

void write_floats(std::ostream& out, const std::vector<float>& v) {
  for (float f : v) {
    auto bits = std::bit_cast<std::uint32_t>(f);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    char buf[4];
    std::memcpy(buf, &bits, 4);
    out.write(buf, 4);
  }
}

void read_floats(std::istream& in, std::vector<float>& v, const std::string& what) {
  for (float& f : v) {
    char buf[4];
    if (!in.read(buf, 4)) throw WeightsError("cnn weights: truncated data in " + what);
    std::uint32_t bits;
    std::memcpy(&bits, buf, 4);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    f = std::bit_cast<float>(bits);
    if (!std::isfinite(f)) throw WeightsError("cnn weights: non-finite value in " + what);
  }
}

}  // namespace

void CnnModel::write(std::ostream& out) const {
  out << kWeightsMagic << '\n' << "layers " << layers_.size() << '\n';
  for (const auto& l : layers_) out << fingerprint_line(l.shape) << '\n';
  out << "data float32-le\n";
  for (const auto& l : layers_) {
    write_floats(out, l.weights);
    write_floats(out, l.biases);
  }
}

void CnnModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write(out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

CnnModel CnnModel::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kWeightsMagic) {
    throw WeightsError("cnn weights: bad magic line");
  }
  if (!std::getline(in, line)) throw WeightsError("cnn weights: missing layer count");
  std::istringstream count_line(line);
  std::string key;
  std::size_t count = 0;
  if (!(count_line >> key >> count) || key != "layers") throw WeightsError("cnn weights: bad layer count line");

  const auto arch = reference_architecture();
  if (count != arch.size()) {
    throw WeightsError("cnn weights: architecture has " + std::to_string(count) + " layers, expected " +
                       std::to_string(arch.size()));
  }
  std::vector<CnnLayer> layers;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw WeightsError("cnn weights: truncated header");
    if (line != fingerprint_line(arch[i])) {
      throw WeightsError("cnn weights: layer " + std::to_string(i) + " is '" + line + "', expected '" +
                         fingerprint_line(arch[i]) + "'");
    }
    layers.push_back({arch[i], std::vector<float>(arch[i].weight_count()),
                      std::vector<float>(arch[i].bias_count())});
  }
  if (!std::getline(in, line) || line != "data float32-le") {
    throw WeightsError("cnn weights: missing data marker");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    read_floats(in, layers[i].weights, "layer " + std::to_string(i) + " weights");
    read_floats(in, layers[i].biases, "layer " + std::to_string(i) + " biases");
  }
  if (in.peek() != std::char_traits<char>::eof()) throw WeightsError("cnn weights: trailing bytes");
  return CnnModel(std::move(layers));
}

CnnModel CnnModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read(in);
}

}  // namespace terranav::traversability
