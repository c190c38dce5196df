#pragma once

#include "reqont/corpus.hpp"
#include "reqont/schema.hpp"
#include "reqont/validator.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace reqont {

/// On-disk layout: <root>/structure.json, <root>/extractions/<key>.json and
/// the optional <root>/iterations.json and <root>/manifest.json.
struct RepositoryLayout {
  std::filesystem::path root;
  std::filesystem::path structure_file;
  std::filesystem::path extractions_dir;
  std::optional<std::filesystem::path> iterations_file;
  std::optional<std::filesystem::path> manifest_file;

  /// Throws IoError if structure.json or extractions/ is missing.
  static RepositoryLayout at(const std::filesystem::path& root);
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Extraction files of a directory (*.json), sorted by file name.
std::vector<std::filesystem::path> extraction_files(const std::filesystem::path& dir);

struct LoadedExtractions {
  std::vector<ExtractionRecord> records;
  std::vector<Finding> findings;  // FieldErrors and file-name mismatches
};

/// Parses every extraction file of `dir`. ParseError propagates (with the
/// file name prepended); FieldErrors become findings and skip the file.
LoadedExtractions load_extractions(const std::filesystem::path& dir, const TaxonomySchema& schema);

struct LoadedRepository {
  RepositoryLayout layout;
  TaxonomySchema schema;
  std::vector<ExtractionRecord> records;
  ValidationReport report;
  /// The strict snapshot when the corpus links cleanly; otherwise the
  /// largest consistent subset found by quarantining offending references.
  std::shared_ptr<const OntologySnapshot> snapshot;
  std::vector<std::string> quarantined;
  std::vector<IterationLog> iterations;
  std::optional<CorpusManifest> manifest;
};

/// Throws IoError or ParseError; domain problems end up in `report`.
LoadedRepository load_repository(const RepositoryLayout& layout);

}  // namespace reqont
