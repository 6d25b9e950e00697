// Copyright 2026 The UnionST Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UNIONST_DATASET_IO_HPP_
#define UNIONST_DATASET_IO_HPP_

#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "unionst/corpus.hpp"
#include "unionst/image.hpp"

namespace unionst {

// Identity card of a generated dataset, stored as manifest.json.
struct DatasetManifest {
  uint64_t count = 0;
  uint64_t seed = 0;
  uint64_t config_hash = 0;
  uint64_t charset_hash = 0;
  bool packed = false;
  // count / (count + rejected attempts) during generation; 1.0 when the
  // dataset was not produced by the generation pipeline.
  double accepted_fraction = 1.0;

  void save(const std::string& path) const;
  static DatasetManifest load(const std::string& path);
};

// Per-sample generation record, one meta.tsv row. Columns (in order):
// id, seed (hex), font, category, size, orient, curved, vertical, mids,
// retries.
struct SampleMeta {
  uint64_t seed = 0;
  int font_id = -1;
  std::string category;
  double size = 0;
  double orient = 0;
  bool curved = false;
  bool vertical = false;
  int mids = 0;
  int retries = 0;
};

// Index-ordered dataset writer. Producers may commit samples in any order
// from any thread; labels.tsv / meta.tsv rows (and packed image records)
// always come out in sample-index order, so output is invariant to worker
// scheduling. Directory layout:
//   root/labels.tsv           relative_image_path<TAB>label
//   root/meta.tsv             per-sample generation parameters
//   root/manifest.json        DatasetManifest
//   root/images/NNNNNNNN.png  (directory mode)
//   root/images.pack + root/images.idx  (packed mode)
class DatasetWriter {
 public:
  // Creates the directory tree. Throws IoError if `root/labels.tsv`
  // already exists (refuses to mix runs) or the tree cannot be created.
  DatasetWriter(const std::string& root, bool packed = false);
  ~DatasetWriter();

  DatasetWriter(const DatasetWriter&) = delete;
  DatasetWriter& operator=(const DatasetWriter&) = delete;

  // Thread-safe. Stores the image and enqueues the label/meta rows for
  // index-ordered commit. Returns the image id (zero-padded index).
  std::string write_sample(uint64_t index, const ImageRgb& image,
                           const TextSample& label, const SampleMeta& meta);

  // Flushes, verifies the index sequence has no gaps, writes the manifest
  // and returns it. Throws GenerationError when a gap remains.
  DatasetManifest close(uint64_t seed, uint64_t config_hash, uint64_t charset_hash,
                        double accepted_fraction = 1.0);

  const std::string& root() const { return root_; }

 private:
  void flush_ready_locked();

  struct Pending {
    std::string label_row;
    std::string meta_row;
    std::vector<uint8_t> png;  // packed mode only
  };

  std::string root_;
  bool packed_ = false;
  bool closed_ = false;
  std::mutex mu_;
  std::map<uint64_t, Pending> pending_;
  uint64_t next_ = 0;
  uint64_t pack_offset_ = 0;
  std::ofstream labels_;
  std::ofstream meta_;
  std::ofstream pack_;
  std::ofstream idx_;
};

// Reads labels.tsv rows as (image_ref, label) pairs, unescaped.
std::vector<std::pair<std::string, std::string>> read_labels(const std::string& path);

// Random access into a packed dataset (root/images.pack + root/images.idx).
class PackReader {
 public:
  explicit PackReader(const std::string& root);
  uint64_t count() const { return offsets_.size(); }
  ImageRgb image(uint64_t index) const;

 private:
  std::string pack_path_;
  std::vector<uint64_t> offsets_;
  uint64_t pack_size_ = 0;
};

// One external recognizer prediction over an unlabeled image.
struct PredictionRecord {
  std::string image_id;
  std::string text;        // UTF-8
  double confidence = 0;   // [0, 1]
};

// Parses `image_id<TAB>text<TAB>confidence` rows. Malformed rows are
// skipped and out-of-range confidences clamped to [0, 1]; both append to
// `*warnings` when given. Unreadable file throws IoError.
std::vector<PredictionRecord> read_predictions(const std::string& path,
                                               std::vector<std::string>* warnings = nullptr);

// Turns predictions into a Pseudo-category corpus. Frequencies are kept
// (no dedup) so synthesis mirrors the prediction distribution; empty texts
// and texts over 25 codepoints are dropped with a warning.
std::vector<TextSample> predictions_to_corpus(const std::vector<PredictionRecord>& records,
                                              std::vector<std::string>* warnings = nullptr);

}  // namespace unionst

#endif  // UNIONST_DATASET_IO_HPP_
