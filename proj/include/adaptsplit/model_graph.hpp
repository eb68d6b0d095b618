#pragma once

// Layer profiles of a foundation model and contiguous segmentations of them.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace adaptsplit {

struct LayerProfile {
  std::size_t layer_index = 0;
  double compute_flops = 0.0;        // per request
  double weight_bytes = 0.0;
  double activation_out_bits = 0.0;  // emitted to the next layer per request
  bool privacy_critical = false;
};

/// Ordered, immutable layer profile. Copies share the layer storage.
class ModelProfile {
 public:
  /// Layers must be non-empty with indices 0..m-1 in order and non-negative
  /// loads; throws PreconditionError otherwise.
  ModelProfile(std::string name, std::vector<LayerProfile> layers);

  const std::string& name() const noexcept { return name_; }
  const std::vector<LayerProfile>& layers() const noexcept { return *layers_; }
  std::size_t size() const noexcept { return layers_->size(); }
  const LayerProfile& operator[](std::size_t i) const { return (*layers_)[i]; }

  double total_compute() const;
  double total_weight_bytes() const;

 private:
  std::string name_;
  std::shared_ptr<const std::vector<LayerProfile>> layers_;
};

/// Half-open interval [begin, end) of layer indices.
struct LayerRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool contains(std::size_t layer) const noexcept { return layer >= begin && layer < end; }
  friend bool operator==(const LayerRange&, const LayerRange&) = default;
};

struct Segment {
  std::size_t index = 0;
  LayerRange layers;
  double load_compute = 0.0;
  double load_mem = 0.0;
  /// Activation size leaving the segment's last layer.
  double boundary_activation_bits = 0.0;
  bool privacy_critical = false;
};

/// A segmentation of a profile into k consecutive, non-empty segments
/// described by k-1 strictly increasing cut positions.
class SplitScheme {
 public:
  const ModelProfile& profile() const noexcept { return profile_; }
  const std::vector<std::size_t>& boundaries() const noexcept { return boundaries_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::size_t size() const noexcept { return segments_.size(); }
  const Segment& operator[](std::size_t j) const { return segments_[j]; }

  /// Index of the segment containing `layer`.
  std::size_t segment_of(std::size_t layer) const;

  /// Schemes compare by their cut positions only.
  friend bool operator==(const SplitScheme& a, const SplitScheme& b) {
    return a.boundaries_ == b.boundaries_;
  }

 private:
  friend SplitScheme make_split(const ModelProfile&, std::vector<std::size_t>);
  SplitScheme(ModelProfile profile, std::vector<std::size_t> boundaries,
              std::vector<Segment> segments)
      : profile_(std::move(profile)),
        boundaries_(std::move(boundaries)),
        segments_(std::move(segments)) {}

  ModelProfile profile_;
  std::vector<std::size_t> boundaries_;
  std::vector<Segment> segments_;
};

/// Throws InvalidBoundary unless every cut lies in [1, m-1] and the list is
/// strictly increasing.
SplitScheme make_split(const ModelProfile& profile, std::vector<std::size_t> boundaries);

/// All contiguous segmentations with 1..max_segments segments, ordered
/// lexicographically by boundary list ([] < [1] < [1,2] < [2] ...).
std::vector<SplitScheme> enumerate_splits(const ModelProfile& profile, std::size_t max_segments);

/// Number of schemes enumerate_splits would return, without building them.
std::size_t count_splits(std::size_t layers, std::size_t max_segments);

/// Adds `cut` as a new boundary inside segment `segment_index`.
SplitScheme subdivide(const SplitScheme& scheme, std::size_t segment_index, std::size_t cut);

}  // namespace adaptsplit
