#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabalign/corrections.hpp"
#include "tabalign/model.hpp"
#include "tabalign/pipeline.hpp"

namespace tabalign {

enum class DatasetKind { Icdar, Fintabnet, Canonical };

struct ManifestFile {
  std::string path;
  std::optional<Split> split;
  std::optional<std::string> words_path;     // JSON: table_id -> [{text, bbox}]
  std::map<int, double> page_heights;        // ICDAR only
};

struct DatasetManifest {
  DatasetKind kind = DatasetKind::Canonical;
  std::string name = "dataset";
  std::vector<ManifestFile> files;
  std::optional<std::string> corrections_path;
  std::string base_dir;  // directory of the manifest file; paths resolve against it
};

struct ParseFailure {
  std::string file;
  std::string record;  // region id or line number
  std::string reason;
};

struct LoadedDataset {
  std::string name;
  PipelineMode mode = PipelineMode::Fintabnet;
  std::vector<TableAnnotation> tables;  // ordered by (file, record)
  std::vector<ParseFailure> failures;
  std::vector<ManualCorrection> corrections;
};

DatasetManifest load_manifest(const std::string& path);

// Record-level parsing fans out across threads; tables and failures come back
// ordered by (file, record) regardless of the thread count.
LoadedDataset load_dataset(const DatasetManifest& manifest, int threads = 1);

// Words file: JSON object mapping table_id to a list of {"text", "bbox"}
// entries, boxes already in the top-left frame.
std::map<std::string, std::vector<Word>> load_words_file(const std::string& path);

}  // namespace tabalign
