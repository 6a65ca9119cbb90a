#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "terranav/traversability.hpp"

namespace terranav::traversability {

/// Shape of one learned layer as recorded in the weights-file header.
struct LayerShape {
  enum class Kind { Conv, Dense } kind = Kind::Conv;
  // Conv: {filters, in_channels, ky, kx}; Dense: {out, in}.
  std::vector<int> dims;

  std::size_t weight_count() const;
  std::size_t bias_count() const { return static_cast<std::size_t>(dims.front()); }
  bool operator==(const LayerShape&) const = default;
};

/// 48x48x1 -> conv3x3(32) -> pool -> conv3x3(64) -> pool -> conv3x3(64) -> pool
/// -> dense 1024->128 -> dense 128->64 -> dense 64->1 -> sigmoid.
/// Convolutions are unpadded, pools are 2x2 with floor division, all hidden
/// activations are ReLU. Dropout is a training-time construct and absent here.
std::vector<LayerShape> reference_architecture();

struct CnnLayer {
  LayerShape shape;
  std::vector<float> weights;  // conv: (filter, in, ky, kx); dense: (out, in)
  std::vector<float> biases;
};

class WeightsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr char kWeightsMagic[] = "TERRANAV-CNN v1";

class CnnModel {
 public:
  CnnModel();  // reference architecture, all parameters zero
  explicit CnnModel(std::vector<CnnLayer> layers);

  const std::vector<CnnLayer>& layers() const { return layers_; }
  std::vector<CnnLayer>& layers() { return layers_; }
  int input_side() const { return 48; }

  /// Traversability in (0, 1). Requires a 48x48 patch.
  double forward(const Patch& patch) const;
  std::vector<double> forward_batch(std::span<const Patch> patches) const;

  /// He-style random initialization, for tests and benchmarks.
  static CnnModel random(std::uint64_t seed, float scale = 1.0f);

  static CnnModel load(const std::filesystem::path& path);
  static CnnModel read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  void write(std::ostream& out) const;

 private:
  void validate() const;

  std::vector<CnnLayer> layers_;
};

class CnnEstimator final : public Estimator {
 public:
  explicit CnnEstimator(CnnModel model) : model_(std::move(model)) {}
  double estimate(const Patch& patch) const override { return model_.forward(patch); }
  const CnnModel& model() const { return model_; }

 private:
  CnnModel model_;
};

}  // namespace terranav::traversability
