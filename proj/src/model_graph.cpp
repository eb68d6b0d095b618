#include "adaptsplit/model_graph.hpp"

#include <algorithm>
#include <string>

#include "adaptsplit/errors.hpp"

namespace adaptsplit {

ModelProfile::ModelProfile(std::string name, std::vector<LayerProfile> layers)
    : name_(std::move(name)) {
  if (layers.empty()) throw PreconditionError("model profile '" + name_ + "' has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.layer_index != i) {
      throw PreconditionError("layer " + std::to_string(i) + " carries index " +
                              std::to_string(l.layer_index));
    }
    if (!(l.compute_flops >= 0.0) || !(l.weight_bytes >= 0.0) || !(l.activation_out_bits >= 0.0)) {
      throw PreconditionError("layer " + std::to_string(i) + " has a negative load");
    }
  }
  layers_ = std::make_shared<const std::vector<LayerProfile>>(std::move(layers));
}

double ModelProfile::total_compute() const {
  double sum = 0.0;
  for (const auto& l : *layers_) sum += l.compute_flops;
  return sum;
}

double ModelProfile::total_weight_bytes() const {
  double sum = 0.0;
  for (const auto& l : *layers_) sum += l.weight_bytes;
  return sum;
}

std::size_t SplitScheme::segment_of(std::size_t layer) const {
  if (layer >= profile_.size()) throw PreconditionError("layer index out of range");
  auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), layer);
  return static_cast<std::size_t>(it - boundaries_.begin());
}

SplitScheme make_split(const ModelProfile& profile, std::vector<std::size_t> boundaries) {
  const std::size_t m = profile.size();
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    const std::size_t b = boundaries[i];
    if (b < 1 || b > m - 1) {
      throw InvalidBoundary("cut " + std::to_string(b) + " outside [1, " + std::to_string(m - 1) +
                            "]");
    }
    if (i > 0 && b <= boundaries[i - 1]) {
      throw InvalidBoundary("cuts must be strictly increasing");
    }
  }

  std::vector<Segment> segments;
  segments.reserve(boundaries.size() + 1);
  std::size_t begin = 0;
  for (std::size_t j = 0; j <= boundaries.size(); ++j) {
    const std::size_t end = j < boundaries.size() ? boundaries[j] : m;
    Segment s;
    s.index = j;
    s.layers = {begin, end};
    for (std::size_t l = begin; l < end; ++l) {
      s.load_compute += profile[l].compute_flops;
      s.load_mem += profile[l].weight_bytes;
      s.privacy_critical = s.privacy_critical || profile[l].privacy_critical;
    }
    s.boundary_activation_bits = profile[end - 1].activation_out_bits;
    segments.push_back(s);
    begin = end;
  }
  return SplitScheme(profile, std::move(boundaries), std::move(segments));
}

namespace {

void enumerate_from(const ModelProfile& profile, std::size_t max_cuts,
                    std::vector<std::size_t>& prefix, std::vector<SplitScheme>& out) {
  out.push_back(make_split(profile, prefix));
  if (prefix.size() == max_cuts) return;
  const std::size_t first = prefix.empty() ? 1 : prefix.back() + 1;
  for (std::size_t cut = first; cut < profile.size(); ++cut) {
    prefix.push_back(cut);
    enumerate_from(profile, max_cuts, prefix, out);
    prefix.pop_back();
  }
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::vector<SplitScheme> enumerate_splits(const ModelProfile& profile, std::size_t max_segments) {
  if (max_segments < 1 || max_segments > profile.size()) {
    throw PreconditionError("max_segments must lie in [1, " + std::to_string(profile.size()) + "]");
  }
  std::vector<SplitScheme> out;
  out.reserve(count_splits(profile.size(), max_segments));
  std::vector<std::size_t> prefix;
  enumerate_from(profile, max_segments - 1, prefix, out);
  return out;
}

std::size_t count_splits(std::size_t layers, std::size_t max_segments) {
  std::size_t total = 0;
  for (std::size_t k = 1; k <= std::min(max_segments, layers); ++k) total += binomial(layers - 1, k - 1);
  return total;
}

SplitScheme subdivide(const SplitScheme& scheme, std::size_t segment_index, std::size_t cut) {
  if (segment_index >= scheme.size()) {
    throw InvalidBoundary("segment " + std::to_string(segment_index) + " does not exist");
  }
  const LayerRange r = scheme[segment_index].layers;
  if (cut <= r.begin || cut >= r.end) {
    throw InvalidBoundary("cut " + std::to_string(cut) + " is not interior to segment [" +
                          std::to_string(r.begin) + ", " + std::to_string(r.end) + ")");
  }
  std::vector<std::size_t> boundaries = scheme.boundaries();
  boundaries.insert(boundaries.begin() + static_cast<std::ptrdiff_t>(segment_index), cut);
  return make_split(scheme.profile(), std::move(boundaries));
}

}  // namespace adaptsplit
