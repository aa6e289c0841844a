#include "tabalign/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tabalign/canonical_json.hpp"
#include "tabalign/errors.hpp"
#include "tabalign/fintabnet.hpp"
#include "tabalign/icdar.hpp"
#include "tabalign/parallel.hpp"

namespace tabalign {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (fs::path(base_dir) / p).string();
}

}  // namespace

std::map<std::string, std::vector<Word>> load_words_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ManifestError, "words file '" + path + "': " + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorCode::ManifestError, "words file '" + path + "' must map table ids to words");
  std::map<std::string, std::vector<Word>> out;
  for (const auto& [table_id, list] : j.items()) {
    std::vector<Word>& words = out[table_id];
    for (const auto& wj : list) {
      Word w;
      w.text = wj.at("text").get<std::string>();
      const auto& b = wj.at("bbox");
      w.box = BBox{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
      words.push_back(std::move(w));
    }
  }
  return out;
}

DatasetManifest load_manifest(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ManifestError, "manifest '" + path + "': " + e.what());
  }

  DatasetManifest m;
  const std::string kind = j.value("kind", std::string());
  if (kind == "icdar")
    m.kind = DatasetKind::Icdar;
  else if (kind == "fintabnet")
    m.kind = DatasetKind::Fintabnet;
  else if (kind == "canonical")
    m.kind = DatasetKind::Canonical;
  else
    throw Error(ErrorCode::ManifestError,
                "manifest '" + path + "': kind must be icdar, fintabnet, or canonical");
  m.name = j.value("name", std::string("dataset"));
  m.base_dir = fs::path(path).parent_path().string();

  if (!j.contains("files") || !j["files"].is_array() || j["files"].empty())
    throw Error(ErrorCode::ManifestError, "manifest '" + path + "' lists no files");
  for (const auto& fj : j["files"]) {
    ManifestFile f;
    f.path = fj.at("path").get<std::string>();
    if (fj.contains("split")) f.split = split_from_name(fj["split"].get<std::string>());
    if (fj.contains("words")) f.words_path = fj["words"].get<std::string>();
    if (fj.contains("page_heights")) {
      for (const auto& [page, height] : fj["page_heights"].items())
        f.page_heights[std::stoi(page)] = height.get<double>();
    }
    m.files.push_back(std::move(f));
  }
  if (j.contains("corrections")) m.corrections_path = j["corrections"].get<std::string>();
  return m;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

LoadedDataset load_dataset(const DatasetManifest& manifest, int threads) {
  LoadedDataset out;
  out.name = manifest.name;
  out.mode = manifest.kind == DatasetKind::Icdar ? PipelineMode::Icdar : PipelineMode::Fintabnet;

  for (const ManifestFile& file : manifest.files) {
    const std::string path = resolve(manifest.base_dir, file.path);
    std::map<std::string, std::vector<Word>> words;
    if (file.words_path) words = load_words_file(resolve(manifest.base_dir, *file.words_path));

    if (manifest.kind == DatasetKind::Icdar) {
      try {
        IcdarParseResult parsed =
            parse_icdar_xml(read_file(path), file.page_heights, &words,
                            file.split.value_or(Split::Test), fs::path(file.path).filename());
        for (TableAnnotation& t : parsed.tables) out.tables.push_back(std::move(t));
        for (UnreadableTable& u : parsed.unreadable)
          out.failures.push_back(ParseFailure{file.path, u.table_ref, u.reason});
      } catch (const Error& e) {
        out.failures.push_back(ParseFailure{file.path, "-", e.what()});
      }
      continue;
    }

    // Line-oriented formats: parse records concurrently, merge in line order.
    const std::vector<std::string> lines = read_lines(path);
    struct Slot {
      std::optional<TableAnnotation> table;
      std::optional<std::string> failure;
    };
    std::vector<Slot> slots(lines.size());
    const bool fintabnet = manifest.kind == DatasetKind::Fintabnet;
    parallel_for_index(lines.size(), threads, [&](std::size_t i) {
      if (lines[i].empty()) return;
      try {
        TableAnnotation t =
            fintabnet ? parse_fintabnet_record(lines[i], file.split.value_or(Split::Train),
                                               file.path + "#L" + std::to_string(i + 1))
                      : table_from_canonical_line(lines[i]);
        if (file.split) t.split = *file.split;
        slots[i].table = std::move(t);
      } catch (const std::exception& e) {
        // Any per-record failure is logged, never fatal.
        slots[i].failure = e.what();
      }
    });
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].table) {
        const auto it = words.find(slots[i].table->table_id);
        if (it != words.end()) slots[i].table->words = it->second;
        out.tables.push_back(std::move(*slots[i].table));
      } else if (slots[i].failure) {
        out.failures.push_back(ParseFailure{file.path, "L" + std::to_string(i + 1),
                                            *slots[i].failure});
      }
    }
  }

  if (manifest.corrections_path)
    out.corrections = load_corrections_file(resolve(manifest.base_dir, *manifest.corrections_path));
  return out;
}

}  // namespace tabalign
