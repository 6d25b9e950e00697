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

#include "unionst/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "unionst/error.hpp"
#include "unionst/png_io.hpp"
#include "unionst/tsv.hpp"
#include "unionst/utf8.hpp"

namespace unionst {

namespace fs = std::filesystem;

namespace {

std::string image_id_for(uint64_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08llu", static_cast<unsigned long long>(index));
  return buf;
}

std::string hex64(uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

uint64_t parse_hex64(const std::string& s) {
  return std::stoull(s, nullptr, 16);
}

void append_u32_le(std::ofstream& out, uint32_t v) {
  char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
               static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
  out.write(b, 4);
}

void append_u64_le(std::ofstream& out, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out.write(b, 8);
}

}  // namespace

void DatasetManifest::save(const std::string& path) const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["count"] = count;
  j["seed"] = seed;
  j["config_hash"] = hex64(config_hash);
  j["charset_hash"] = hex64(charset_hash);
  j["packed"] = packed;
  j["accepted_fraction"] = accepted_fraction;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("manifest write failed: " + path);
}

DatasetManifest DatasetManifest::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read manifest: " + path);
  nlohmann::json j;
  try {
    in >> j;
    DatasetManifest m;
    m.count = j.at("count").get<uint64_t>();
    m.seed = j.at("seed").get<uint64_t>();
    m.config_hash = parse_hex64(j.at("config_hash").get<std::string>());
    m.charset_hash = parse_hex64(j.at("charset_hash").get<std::string>());
    m.packed = j.at("packed").get<bool>();
    m.accepted_fraction = j.value("accepted_fraction", 1.0);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed manifest " + path + ": " + e.what());
  } catch (const std::exception& e) {
    throw IoError("malformed manifest " + path + ": " + e.what());
  }
}

DatasetWriter::DatasetWriter(const std::string& root, bool packed)
    : root_(root), packed_(packed) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw IoError("cannot create dataset root " + root_ + ": " + ec.message());
  if (fs::exists(root_ + "/labels.tsv"))
    throw IoError("refusing to overwrite existing dataset: " + root_ + "/labels.tsv");
  if (!packed_) {
    fs::create_directories(root_ + "/images", ec);
    if (ec) throw IoError("cannot create images dir: " + ec.message());
  }
  labels_.open(root_ + "/labels.tsv", std::ios::binary);
  meta_.open(root_ + "/meta.tsv", std::ios::binary);
  if (!labels_ || !meta_) throw IoError("cannot open dataset files under " + root_);
  if (packed_) {
    pack_.open(root_ + "/images.pack", std::ios::binary);
    idx_.open(root_ + "/images.idx", std::ios::binary);
    if (!pack_ || !idx_) throw IoError("cannot open packed shard under " + root_);
  }
}

DatasetWriter::~DatasetWriter() = default;

std::string DatasetWriter::write_sample(uint64_t index, const ImageRgb& image,
                                        const TextSample& label,
                                        const SampleMeta& meta) {
  std::string id = image_id_for(index);
  std::vector<uint8_t> png = encode_png(image);

  std::string image_ref;
  if (packed_) {
    image_ref = "pack:" + id;
  } else {
    image_ref = "images/" + id + ".png";
    std::string path = root_ + "/" + image_ref;
    if (fs::exists(path)) throw IoError("image path collision: " + path);
    std::ofstream img(path, std::ios::binary);
    img.write(reinterpret_cast<const char*>(png.data()),
              static_cast<std::streamsize>(png.size()));
    if (!img) throw IoError("cannot write image: " + path);
  }

  std::ostringstream meta_row;
  meta_row << id << '\t' << hex64(meta.seed) << '\t' << meta.font_id << '\t'
           << tsv::escape(meta.category) << '\t' << meta.size << '\t' << meta.orient
           << '\t' << (meta.curved ? 1 : 0) << '\t' << (meta.vertical ? 1 : 0) << '\t'
           << meta.mids << '\t' << meta.retries;

  Pending p;
  p.label_row = image_ref + "\t" + tsv::escape(label.text);
  p.meta_row = meta_row.str();
  if (packed_) p.png = std::move(png);

  std::lock_guard<std::mutex> lock(mu_);
  if (closed_) throw IoError("write_sample on closed dataset writer");
  if (index < next_ || pending_.count(index))
    throw IoError("duplicate sample index " + std::to_string(index));
  pending_.emplace(index, std::move(p));
  flush_ready_locked();
  return id;
}

void DatasetWriter::flush_ready_locked() {
  for (auto it = pending_.begin(); it != pending_.end() && it->first == next_;
       it = pending_.begin()) {
    Pending& p = it->second;
    labels_ << p.label_row << '\n';
    meta_ << p.meta_row << '\n';
    if (packed_) {
      append_u64_le(idx_, pack_offset_);
      append_u32_le(pack_, static_cast<uint32_t>(p.png.size()));
      pack_.write(reinterpret_cast<const char*>(p.png.data()),
                  static_cast<std::streamsize>(p.png.size()));
      pack_offset_ += 4 + p.png.size();
    }
    pending_.erase(it);
    ++next_;
  }
}

DatasetManifest DatasetWriter::close(uint64_t seed, uint64_t config_hash,
                                     uint64_t charset_hash, double accepted_fraction) {
  std::lock_guard<std::mutex> lock(mu_);
  if (closed_) throw IoError("dataset writer already closed");
  flush_ready_locked();
  if (!pending_.empty())
    throw GenerationError("dataset has a gap: sample " + std::to_string(next_) +
                          " missing but " + std::to_string(pending_.begin()->first) +
                          " committed");
  labels_.flush();
  meta_.flush();
  if (packed_) {
    pack_.flush();
    idx_.flush();
    if (!pack_ || !idx_) throw IoError("packed shard write failed under " + root_);
  }
  if (!labels_ || !meta_) throw IoError("dataset write failed under " + root_);
  closed_ = true;

  DatasetManifest m;
  m.count = next_;
  m.seed = seed;
  m.config_hash = config_hash;
  m.charset_hash = charset_hash;
  m.packed = packed_;
  m.accepted_fraction = accepted_fraction;
  m.save(root_ + "/manifest.json");
  return m;
}

std::vector<std::pair<std::string, std::string>> read_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read labels: " + path);
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = tsv::split_fields(line);
    if (fields.size() != 2)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected 2 fields, got " +
                    std::to_string(fields.size()));
    rows.emplace_back(tsv::unescape(fields[0]), tsv::unescape(fields[1]));
  }
  return rows;
}

PackReader::PackReader(const std::string& root) : pack_path_(root + "/images.pack") {
  std::ifstream idx(root + "/images.idx", std::ios::binary);
  if (!idx) throw IoError("cannot read pack index: " + root + "/images.idx");
  char b[8];
  while (idx.read(b, 8)) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<uint8_t>(b[i])) << (8 * i);
    offsets_.push_back(v);
  }
  std::error_code ec;
  pack_size_ = fs::file_size(pack_path_, ec);
  if (ec) throw IoError("cannot stat pack: " + pack_path_);
  for (uint64_t off : offsets_)
    if (off + 4 > pack_size_) throw IoError("pack index points past shard end");
}

ImageRgb PackReader::image(uint64_t index) const {
  if (index >= offsets_.size())
    throw InvalidArgument("pack index out of range: " + std::to_string(index));
  std::ifstream pack(pack_path_, std::ios::binary);
  if (!pack) throw IoError("cannot read pack: " + pack_path_);
  pack.seekg(static_cast<std::streamoff>(offsets_[index]));
  char b[4];
  if (!pack.read(b, 4)) throw IoError("pack record header truncated");
  uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len |= static_cast<uint32_t>(static_cast<uint8_t>(b[i])) << (8 * i);
  if (offsets_[index] + 4 + len > pack_size_) throw IoError("pack record truncated");
  std::vector<uint8_t> png(len);
  if (!pack.read(reinterpret_cast<char*>(png.data()), len))
    throw IoError("pack record read failed");
  return decode_png(png);
}

std::vector<PredictionRecord> read_predictions(const std::string& path,
                                               std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read predictions: " + path);
  std::vector<PredictionRecord> records;
  std::string line;
  int lineno = 0;
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(path + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = tsv::split_fields(line);
    if (fields.size() != 3) {
      warn("expected 3 fields, got " + std::to_string(fields.size()) + "; row skipped");
      continue;
    }
    const std::string conf_str = tsv::unescape(fields[2]);
    char* end = nullptr;
    double conf = std::strtod(conf_str.c_str(), &end);
    if (end == conf_str.c_str() || *end != '\0' || std::isnan(conf)) {
      warn("bad confidence '" + conf_str + "'; row skipped");
      continue;
    }
    if (conf < 0 || conf > 1) {
      warn("confidence " + conf_str + " clamped to [0, 1]");
      conf = std::clamp(conf, 0.0, 1.0);
    }
    records.push_back({tsv::unescape(fields[0]), tsv::unescape(fields[1]), conf});
  }
  return records;
}

std::vector<TextSample> predictions_to_corpus(const std::vector<PredictionRecord>& records,
                                              std::vector<std::string>* warnings) {
  std::vector<TextSample> corpus;
  corpus.reserve(records.size());
  for (const PredictionRecord& rec : records) {
    if (rec.text.empty()) {
      if (warnings) warnings->push_back("empty prediction for " + rec.image_id + " dropped");
      continue;
    }
    if (utf8::length(rec.text) > kMaxTextLen) {
      if (warnings)
        warnings->push_back("prediction for " + rec.image_id + " over " +
                            std::to_string(kMaxTextLen) + " chars dropped");
      continue;
    }
    TextSample sample;
    sample.text = rec.text;
    sample.category = Category::Pseudo;
    sample.source_id = rec.image_id;
    corpus.push_back(std::move(sample));
  }
  return corpus;
}

}  // namespace unionst
