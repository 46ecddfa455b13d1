// Copyright 2026 The Morp Authors. All Rights Reserved.
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

#include "morp/manifest.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>

#include "json.hpp"
#include "morp/error.h"
#include "morp/parallel.h"

namespace morp {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void FormatFail(const std::string& message, const std::string& context) {
  throw Error(ErrorCode::kFormat, message, context);
}

const Json& Field(const Json& obj, const char* key, const std::string& context) {
  if (!obj.is_object()) FormatFail("expected a JSON object", context);
  const auto it = obj.find(key);
  if (it == obj.end()) FormatFail(std::string("missing field \"") + key + "\"", context);
  return *it;
}

std::string GetString(const Json& obj, const char* key, const std::string& context) {
  const Json& v = Field(obj, key, context);
  if (!v.is_string()) FormatFail(std::string("field \"") + key + "\" must be a string", context);
  return v.get<std::string>();
}

double GetNumber(const Json& obj, const char* key, const std::string& context) {
  const Json& v = Field(obj, key, context);
  if (!v.is_number()) FormatFail(std::string("field \"") + key + "\" must be a number", context);
  return v.get<double>();
}

std::int64_t GetInteger(const Json& obj, const char* key, const std::string& context) {
  const Json& v = Field(obj, key, context);
  if (!v.is_number_integer()) {
    FormatFail(std::string("field \"") + key + "\" must be an integer", context);
  }
  return v.get<std::int64_t>();
}

SecondsInterval GetInterval(const Json& obj, const char* key, const std::string& context) {
  const Json& v = Field(obj, key, context);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    FormatFail(std::string("field \"") + key + "\" must be [start, end]", context);
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

void CheckInterval(const SecondsInterval& s, double duration, const std::string& context) {
  if (!(0.0 <= s.start && s.start < s.end && s.end <= duration)) {
    throw Error(ErrorCode::kRange,
                "boundary must satisfy 0 <= start < end <= duration (" +
                    std::to_string(duration) + ")",
                context);
  }
}

std::string RebasePath(const std::string& path, const std::filesystem::path& base_dir,
                       const std::filesystem::path& target_dir) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (path.empty() || p.is_absolute() || base_dir.empty()) return path;
  const fs::path from = fs::weakly_canonical(fs::absolute(base_dir));
  const fs::path to = fs::weakly_canonical(fs::absolute(target_dir));
  if (from == to) return path;
  const fs::path abs = fs::weakly_canonical(from / p);
  const fs::path rel = abs.lexically_relative(to);
  return rel.empty() ? abs.generic_string() : rel.generic_string();
}

Json IntervalJson(const SecondsInterval& s) { return Json::array({s.start, s.end}); }

}  // namespace

std::string_view StatusName(AnnotationStatus status) {
  switch (status) {
    case AnnotationStatus::kRaw: return "raw";
    case AnnotationStatus::kKept: return "kept";
    case AnnotationStatus::kDropped: return "dropped";
    case AnnotationStatus::kAdjusted: return "adjusted";
    case AnnotationStatus::kCorrected: return "corrected";
  }
  return "raw";
}

AnnotationStatus ParseStatus(std::string_view name) {
  for (auto s : {AnnotationStatus::kRaw, AnnotationStatus::kKept, AnnotationStatus::kDropped,
                 AnnotationStatus::kAdjusted, AnnotationStatus::kCorrected}) {
    if (StatusName(s) == name) return s;
  }
  throw Error(ErrorCode::kFormat, "unknown annotation status", std::string(name));
}

std::string_view ErrorTagName(ErrorTag tag) {
  switch (tag) {
    case ErrorTag::kIdle: return "idle";
    case ErrorTag::kUnmatched: return "unmatched";
    case ErrorTag::kImprecise: return "imprecise";
    case ErrorTag::kClean: return "clean";
  }
  return "clean";
}

ErrorTag ParseErrorTag(std::string_view name) {
  for (auto t : {ErrorTag::kIdle, ErrorTag::kUnmatched, ErrorTag::kImprecise,
                 ErrorTag::kClean}) {
    if (ErrorTagName(t) == name) return t;
  }
  throw Error(ErrorCode::kFormat, "unknown error tag", std::string(name));
}

bool IsAllowedTransition(AnnotationStatus from, AnnotationStatus to) {
  using S = AnnotationStatus;
  switch (from) {
    case S::kRaw: return to == S::kKept || to == S::kDropped;
    case S::kKept: return to == S::kAdjusted;
    case S::kAdjusted: return to == S::kCorrected;
    case S::kDropped:
    case S::kCorrected: return false;
  }
  return false;
}

void SetStatus(PseudoAnnotation& annotation, AnnotationStatus status) {
  if (!IsAllowedTransition(annotation.status, status)) {
    throw Error(ErrorCode::kContract,
                "illegal status transition " + std::string(StatusName(annotation.status)) +
                    " -> " + std::string(StatusName(status)),
                annotation.annotation_id);
  }
  annotation.status = status;
}

void SetBoundary(PseudoAnnotation& annotation, const Boundary& frames,
                 const VideoEntry& video) {
  if (frames.timeline_len() != video.num_frames) {
    throw Error(ErrorCode::kContract, "boundary timeline differs from video frame count",
                annotation.annotation_id);
  }
  annotation.boundary_frames = frames;
  annotation.boundary_seconds = {
      FramesToSeconds(frames.start(), video.duration_seconds, video.num_frames),
      FramesToSeconds(frames.end(), video.duration_seconds, video.num_frames)};
}

Boundary SecondsToBoundary(const SecondsInterval& seconds, const VideoEntry& video) {
  const int t = video.num_frames;
  int start = SecondsToFrames(seconds.start, video.duration_seconds, t);
  int end = SecondsToFrames(seconds.end, video.duration_seconds, t);
  if (start >= t) start = t - 1;
  if (end <= start) end = start + 1;
  return Boundary(start, end, t);
}

std::optional<Boundary> GroundTruthFrames(const PseudoAnnotation& annotation,
                                          const VideoEntry& video) {
  if (!annotation.gt_boundary_seconds) return std::nullopt;
  return SecondsToBoundary(*annotation.gt_boundary_seconds, video);
}

std::filesystem::path CorpusManifest::ResolvePath(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

VideoIndex BuildVideoIndex(const CorpusManifest& manifest) {
  VideoIndex index;
  index.reserve(manifest.videos.size());
  for (std::size_t i = 0; i < manifest.videos.size(); ++i) {
    index.emplace(manifest.videos[i].video_id, i);
  }
  return index;
}

CorpusManifest ParseManifest(std::string_view text, const std::filesystem::path& base_dir,
                             std::optional<int> query_rows) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kFormat, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) FormatFail("manifest root must be an object", "");

  CorpusManifest m;
  m.base_dir = base_dir;
  const Json& version = Field(root, "format_version", "manifest");
  if (!version.is_number_integer() || version.get<std::int64_t>() != kManifestFormatVersion) {
    throw Error(ErrorCode::kVersion, "unsupported manifest format_version",
                version.dump());
  }

  if (const auto it = root.find("header"); it != root.end()) {
    const std::string ctx = "header";
    Provenance p;
    p.tool = GetString(*it, "tool", ctx);
    p.version = GetString(*it, "version", ctx);
    p.config_hash = GetString(*it, "config_hash", ctx);
    const Json& seed = Field(*it, "seed", ctx);
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
      FormatFail("header seed must be a non-negative integer", ctx);
    }
    p.seed = seed.get<std::uint64_t>();
    m.header = p;
  }

  const Json& videos = Field(root, "videos", "manifest");
  if (!videos.is_array()) FormatFail("\"videos\" must be an array", "manifest");
  std::set<std::string> video_ids;
  for (const Json& v : videos) {
    VideoEntry e;
    e.video_id = GetString(v, "video_id", "video");
    const std::string ctx = "video " + e.video_id;
    e.duration_seconds = GetNumber(v, "duration_seconds", ctx);
    const std::int64_t frames = GetInteger(v, "num_frames", ctx);
    e.feature_file_path = GetString(v, "feature_file_path", ctx);
    if (!(e.duration_seconds > 0.0)) {
      throw Error(ErrorCode::kRange, "duration_seconds must be positive", ctx);
    }
    if (frames < 1 || frames > std::numeric_limits<int>::max()) {
      throw Error(ErrorCode::kRange, "num_frames must be >= 1", ctx);
    }
    e.num_frames = static_cast<int>(frames);
    if (!video_ids.insert(e.video_id).second) {
      throw Error(ErrorCode::kReferential, "duplicate video_id", e.video_id);
    }
    m.videos.push_back(std::move(e));
  }
  if (root.contains("queries_file_path")) {
    m.queries_file_path = GetString(root, "queries_file_path", "manifest");
  }

  const VideoIndex index = BuildVideoIndex(m);
  const Json& annotations = Field(root, "annotations", "manifest");
  if (!annotations.is_array()) FormatFail("\"annotations\" must be an array", "manifest");
  std::set<std::string> annotation_ids;
  m.annotations.reserve(annotations.size());
  for (const Json& a : annotations) {
    PseudoAnnotation p;
    p.annotation_id = GetString(a, "annotation_id", "annotation");
    const std::string& ctx = p.annotation_id;
    if (!annotation_ids.insert(p.annotation_id).second) {
      throw Error(ErrorCode::kReferential, "duplicate annotation_id", ctx);
    }
    p.video_id = GetString(a, "video_id", ctx);
    p.query_text = GetString(a, "query_text", ctx);
    const std::int64_t ref = GetInteger(a, "query_feature_ref", ctx);
    if (ref < 0 || (query_rows && ref >= *query_rows) ||
        ref > std::numeric_limits<int>::max()) {
      throw Error(ErrorCode::kReferential, "query_feature_ref out of range", ctx);
    }
    p.query_feature_ref = static_cast<int>(ref);
    p.boundary_seconds = GetInterval(a, "boundary_seconds", ctx);
    p.status = ParseStatus(GetString(a, "status", ctx));
    if (a.contains("gt_boundary_seconds") && !a["gt_boundary_seconds"].is_null()) {
      p.gt_boundary_seconds = GetInterval(a, "gt_boundary_seconds", ctx);
    }
    if (a.contains("error_tag") && !a["error_tag"].is_null()) {
      p.error_tag = ParseErrorTag(GetString(a, "error_tag", ctx));
    }

    const auto vit = index.find(p.video_id);
    if (vit == index.end()) {
      throw Error(ErrorCode::kReferential, "annotation references unknown video " + p.video_id,
                  ctx);
    }
    const VideoEntry& video = m.videos[vit->second];
    CheckInterval(p.boundary_seconds, video.duration_seconds, ctx);
    if (p.gt_boundary_seconds) {
      CheckInterval(*p.gt_boundary_seconds, video.duration_seconds, ctx + " (ground truth)");
    }
    p.boundary_frames = SecondsToBoundary(p.boundary_seconds, video);
    m.annotations.push_back(std::move(p));
  }

  if (const auto it = root.find("synth"); it != root.end() && !it->is_null()) {
    m.synth_json = it->dump();
  }
  return m;
}

std::string SerializeManifest(const CorpusManifest& manifest,
                              const std::filesystem::path& target_dir) {
  Json root;
  root["format_version"] = manifest.format_version;
  if (manifest.header) {
    const Provenance& p = *manifest.header;
    root["header"] = Json{{"tool", p.tool},
                          {"version", p.version},
                          {"config_hash", p.config_hash},
                          {"seed", p.seed}};
  }
  Json videos = Json::array();
  for (const VideoEntry& v : manifest.videos) {
    videos.push_back(Json{
        {"video_id", v.video_id},
        {"duration_seconds", v.duration_seconds},
        {"num_frames", v.num_frames},
        {"feature_file_path", RebasePath(v.feature_file_path, manifest.base_dir, target_dir)}});
  }
  root["videos"] = std::move(videos);
  root["queries_file_path"] =
      RebasePath(manifest.queries_file_path, manifest.base_dir, target_dir);
  Json annotations = Json::array();
  for (const PseudoAnnotation& a : manifest.annotations) {
    Json j{{"annotation_id", a.annotation_id},
           {"video_id", a.video_id},
           {"query_text", a.query_text},
           {"query_feature_ref", a.query_feature_ref},
           {"boundary_seconds", IntervalJson(a.boundary_seconds)},
           {"status", StatusName(a.status)}};
    if (a.gt_boundary_seconds) j["gt_boundary_seconds"] = IntervalJson(*a.gt_boundary_seconds);
    if (a.error_tag) j["error_tag"] = ErrorTagName(*a.error_tag);
    annotations.push_back(std::move(j));
  }
  root["annotations"] = std::move(annotations);
  if (!manifest.synth_json.empty()) root["synth"] = Json::parse(manifest.synth_json);
  return root.dump(2) + "\n";
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open file for reading", path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open file for writing", path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed", path.string());
}

CorpusManifest ReadManifest(const std::filesystem::path& path) {
  const std::filesystem::path base = path.parent_path();
  CorpusManifest m = ParseManifest(ReadTextFile(path), base);
  if (!m.annotations.empty()) {
    const FeatureHeader h = ReadFeatureHeader(m.ResolvePath(m.queries_file_path));
    for (const PseudoAnnotation& a : m.annotations) {
      if (a.query_feature_ref >= static_cast<std::int64_t>(h.rows)) {
        throw Error(ErrorCode::kReferential,
                    "query_feature_ref beyond the queries file (" +
                        std::to_string(h.rows) + " rows)",
                    a.annotation_id);
      }
    }
  }
  return m;
}

void WriteManifest(const CorpusManifest& manifest, const std::filesystem::path& path) {
  const std::filesystem::path dir =
      path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  WriteTextFile(path, SerializeManifest(manifest, dir));
}

std::span<const float> Corpus::QueryFeature(const PseudoAnnotation& annotation) const {
  if (!queries || annotation.query_feature_ref >= queries->rows()) {
    throw Error(ErrorCode::kReferential, "query feature not loaded",
                annotation.annotation_id);
  }
  return queries->row(annotation.query_feature_ref);
}

Corpus LoadCorpus(CorpusManifest manifest, int threads) {
  Corpus corpus;
  if (!manifest.queries_file_path.empty()) {
    corpus.queries = ReadFeatureFile(manifest.ResolvePath(manifest.queries_file_path));
  } else if (!manifest.annotations.empty()) {
    throw Error(ErrorCode::kReferential, "manifest has annotations but no queries file");
  }

  std::vector<std::optional<FeatureMatrix>> loaded(manifest.videos.size());
  ParallelFor(manifest.videos.size(), threads, [&](std::size_t i) {
    const VideoEntry& v = manifest.videos[i];
    FeatureMatrix features = ReadFeatureFile(manifest.ResolvePath(v.feature_file_path));
    if (features.rows() != v.num_frames) {
      throw Error(ErrorCode::kDataQuality,
                  "feature file has " + std::to_string(features.rows()) +
                      " frames, manifest says " + std::to_string(v.num_frames),
                  v.video_id);
    }
    loaded[i] = std::move(features);
  });

  const int dim = corpus.queries ? corpus.queries->dim() : 0;
  corpus.video_features.reserve(loaded.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    if (dim != 0 && loaded[i]->dim() != dim) {
      throw Error(ErrorCode::kDataQuality,
                  "feature dimension differs from the queries file (" +
                      std::to_string(dim) + ")",
                  manifest.videos[i].video_id);
    }
    corpus.video_features.push_back(std::move(*loaded[i]));
  }
  for (const PseudoAnnotation& a : manifest.annotations) {
    if (!corpus.queries || a.query_feature_ref >= corpus.queries->rows()) {
      throw Error(ErrorCode::kReferential, "query_feature_ref beyond the queries file",
                  a.annotation_id);
    }
  }
  corpus.manifest = std::move(manifest);
  return corpus;
}

Corpus LoadCorpus(const std::filesystem::path& manifest_path, int threads) {
  return LoadCorpus(ReadManifest(manifest_path), threads);
}

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& dir,
                 const std::string& manifest_name) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create directory", dir.string());

  auto write_matrix = [&](const FeatureMatrix& m, const std::string& rel) {
    if (fs::path(rel).is_absolute()) {
      throw Error(ErrorCode::kContract, "WriteCorpus needs relative feature paths", rel);
    }
    const fs::path target = dir / rel;
    if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
    WriteFeatureFile(m, target);
  };
  for (std::size_t i = 0; i < corpus.video_features.size(); ++i) {
    write_matrix(corpus.video_features[i], corpus.manifest.videos[i].feature_file_path);
  }
  if (corpus.queries) write_matrix(*corpus.queries, corpus.manifest.queries_file_path);

  CorpusManifest m = corpus.manifest;
  m.base_dir = dir;
  WriteManifest(m, dir / manifest_name);
}

}  // namespace morp
