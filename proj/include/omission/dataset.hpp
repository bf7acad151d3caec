// Copyright 2026 The omission-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OMISSION_DATASET_HPP
#define OMISSION_DATASET_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "omission/errors.hpp"
#include "omission/rng.hpp"

namespace omission {

// One labeled feature vector. `id` is the sample's index within the dataset
// it was created in; subsets built by attacks keep the original ids.
struct Sample {
  std::vector<double> features;
  int label = 0;
  int id = 0;
};

struct Dataset {
  std::vector<Sample> samples;
  int dim = 0;
  std::vector<int> classes;  // sorted, distinct

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }

  std::size_t count_label(int label) const {
    std::size_t n = 0;
    for (const Sample& s : samples) {
      if (s.label == label) ++n;
    }
    return n;
  }
};

inline std::vector<int> distinct_sorted_labels(const std::vector<Sample>& samples) {
  std::set<int> labels;
  for (const Sample& s : samples) labels.insert(s.label);
  return {labels.begin(), labels.end()};
}

// Builds a Dataset with dense ids [0, n) and validates dimensions.
inline Dataset make_dataset(std::vector<Sample> samples, int dim) {
  if (dim <= 0) throw ValidationError("dataset dim must be positive");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (static_cast<int>(samples[i].features.size()) != dim) {
      throw ValidationError("sample " + std::to_string(i) +
                            " has wrong dimensionality");
    }
    samples[i].id = static_cast<int>(i);
  }
  Dataset d;
  d.dim = dim;
  d.classes = distinct_sorted_labels(samples);
  d.samples = std::move(samples);
  return d;
}

// Two-blob generator spec. Class `src` is labeled 0, class `trgt` is
// labeled 1; each blob is an isotropic normal around its center.
struct SyntheticSpec {
  int n = 400;
  std::array<double, 2> center_src{0.0, 0.0};
  std::array<double, 2> center_trgt{2.0, 2.0};
  double sigma = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (n < 4 || n % 2 != 0) {
      throw ValidationError("SyntheticSpec: n must be even and >= 4");
    }
    if (!(sigma > 0.0)) {
      throw ValidationError("SyntheticSpec: sigma must be positive");
    }
  }
};

constexpr int kSyntheticSrcLabel = 0;
constexpr int kSyntheticTrgtLabel = 1;

inline Dataset gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<Sample> samples;
  samples.reserve(spec.n);
  const int half = spec.n / 2;
  for (int i = 0; i < half; ++i) {
    samples.push_back({{rng.normal(spec.center_src[0], spec.sigma),
                        rng.normal(spec.center_src[1], spec.sigma)},
                       kSyntheticSrcLabel,
                       0});
  }
  for (int i = 0; i < half; ++i) {
    samples.push_back({{rng.normal(spec.center_trgt[0], spec.sigma),
                        rng.normal(spec.center_trgt[1], spec.sigma)},
                       kSyntheticTrgtLabel,
                       0});
  }
  return make_dataset(std::move(samples), 2);
}

// Fixed target placement on the segment between the two centers, at
// `fraction` of the way from center_src towards center_trgt. Kept strictly
// below 0.5 so the target starts out on the src side.
inline Sample synthetic_target(const SyntheticSpec& spec, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ValidationError("synthetic_target: fraction must lie in (0, 1)");
  }
  Sample s;
  s.features = {
      spec.center_src[0] + fraction * (spec.center_trgt[0] - spec.center_src[0]),
      spec.center_src[1] + fraction * (spec.center_trgt[1] - spec.center_src[1])};
  s.label = kSyntheticSrcLabel;
  s.id = 0;
  return s;
}

namespace detail {

inline std::uint32_t read_be_u32(std::istream& in, const std::string& path) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (!in) throw ParseError(path + ": truncated file (header)");
  return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
         (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

}  // namespace detail

constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

// IDX image/label pair. Pixels are scaled to [0, 1], labels kept as-is.
inline Dataset load_idx(const std::string& images_path,
                        const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw ParseError(images_path + ": cannot open file");
  const std::uint32_t img_magic = detail::read_be_u32(img, images_path);
  if (img_magic != kIdxImagesMagic) {
    throw ParseError(images_path + ": bad magic number (expected 0x00000803)");
  }
  const std::uint32_t n_images = detail::read_be_u32(img, images_path);
  const std::uint32_t rows = detail::read_be_u32(img, images_path);
  const std::uint32_t cols = detail::read_be_u32(img, images_path);

  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw ParseError(labels_path + ": cannot open file");
  const std::uint32_t lab_magic = detail::read_be_u32(lab, labels_path);
  if (lab_magic != kIdxLabelsMagic) {
    throw ParseError(labels_path + ": bad magic number (expected 0x00000801)");
  }
  const std::uint32_t n_labels = detail::read_be_u32(lab, labels_path);
  if (n_images != n_labels) {
    throw ParseError("image/label count mismatch: " + std::to_string(n_images) +
                     " images vs " + std::to_string(n_labels) + " labels");
  }

  const std::size_t dim = std::size_t(rows) * cols;
  if (dim == 0) throw ParseError(images_path + ": zero image dimensions");
  std::vector<unsigned char> pixel_buf(dim);
  std::vector<Sample> samples;
  samples.reserve(n_images);
  for (std::uint32_t i = 0; i < n_images; ++i) {
    img.read(reinterpret_cast<char*>(pixel_buf.data()), pixel_buf.size());
    if (!img) throw ParseError(images_path + ": truncated file (image data)");
    Sample s;
    s.features.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) s.features[j] = pixel_buf[j] / 255.0;
    const int c = lab.get();
    if (c == EOF) throw ParseError(labels_path + ": truncated file (label data)");
    s.label = c;
    samples.push_back(std::move(s));
  }
  return make_dataset(std::move(samples), static_cast<int>(dim));
}

// CSV fallback: one row per sample, label in the first column. `scale`
// multiplies every feature (1/255 recovers the IDX pixel scaling).
inline Dataset load_csv(const std::string& path, double scale = 1.0) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::vector<Sample> samples;
  int dim = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Sample s;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      try {
        if (first) {
          s.label = std::stoi(cell);
          first = false;
        } else {
          s.features.push_back(std::stod(cell) * scale);
        }
      } catch (const std::exception&) {
        throw ParseError(path + ": line " + std::to_string(line_no) +
                         ": malformed value '" + cell + "'");
      }
    }
    if (first) throw ParseError(path + ": line " + std::to_string(line_no) +
                                ": missing label column");
    if (dim < 0) dim = static_cast<int>(s.features.size());
    if (static_cast<int>(s.features.size()) != dim) {
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": inconsistent column count");
    }
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw ParseError(path + ": no samples");
  return make_dataset(std::move(samples), dim);
}

// Uniform draw without replacement of `per_class` samples for each wanted
// label. Ids are re-densified in the result.
inline Dataset subsample_per_class(const Dataset& d,
                                   const std::vector<int>& wanted_labels,
                                   std::size_t per_class, std::uint64_t seed) {
  if (per_class == 0) throw ValidationError("per_class must be positive");
  Rng rng(seed);
  std::vector<Sample> picked;
  picked.reserve(wanted_labels.size() * per_class);
  for (int label : wanted_labels) {
    std::vector<int> ids;
    for (const Sample& s : d.samples) {
      if (s.label == label) ids.push_back(s.id);
    }
    if (ids.size() < per_class) {
      throw CapacityError("label " + std::to_string(label) + " has only " +
                          std::to_string(ids.size()) + " samples, need " +
                          std::to_string(per_class));
    }
    std::vector<int> chosen = rng.sample_indices(ids.size(), per_class);
    std::sort(chosen.begin(), chosen.end());
    for (int idx : chosen) picked.push_back(d.samples[ids[idx]]);
  }
  return make_dataset(std::move(picked), d.dim);
}

// Splits one per-class uniform draw into consecutive disjoint parts
// (train / target pool / validation). Each part gets dense ids.
inline std::vector<Dataset> split_per_class(const Dataset& d,
                                            const std::vector<int>& wanted_labels,
                                            const std::vector<std::size_t>& part_sizes,
                                            std::uint64_t seed) {
  std::size_t total = 0;
  for (std::size_t p : part_sizes) total += p;
  Rng rng(seed);
  std::vector<std::vector<Sample>> parts(part_sizes.size());
  for (int label : wanted_labels) {
    std::vector<int> ids;
    for (const Sample& s : d.samples) {
      if (s.label == label) ids.push_back(s.id);
    }
    if (ids.size() < total) {
      throw CapacityError("label " + std::to_string(label) + " has only " +
                          std::to_string(ids.size()) + " samples, need " +
                          std::to_string(total));
    }
    std::vector<int> chosen = rng.sample_indices(ids.size(), total);
    std::size_t offset = 0;
    for (std::size_t p = 0; p < part_sizes.size(); ++p) {
      std::vector<int> slice(chosen.begin() + offset,
                             chosen.begin() + offset + part_sizes[p]);
      std::sort(slice.begin(), slice.end());
      for (int idx : slice) parts[p].push_back(d.samples[ids[idx]]);
      offset += part_sizes[p];
    }
  }
  std::vector<Dataset> out;
  out.reserve(parts.size());
  for (auto& part : parts) out.push_back(make_dataset(std::move(part), d.dim));
  return out;
}

}  // namespace omission

#endif  // OMISSION_DATASET_HPP
