#include "reqont/repository.hpp"

#include "reqont/text.hpp"
#include "reqont/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace reqont {

RepositoryLayout RepositoryLayout::at(const fs::path& root) {
  RepositoryLayout layout;
  layout.root = root;
  layout.structure_file = root / "structure.json";
  layout.extractions_dir = root / "extractions";
  if (!fs::is_regular_file(layout.structure_file)) {
    throw IoError("structure file not found: " + layout.structure_file.string());
  }
  if (!fs::is_directory(layout.extractions_dir)) {
    throw IoError("extractions directory not found: " + layout.extractions_dir.string());
  }
  if (fs::is_regular_file(root / "iterations.json")) layout.iterations_file = root / "iterations.json";
  if (fs::is_regular_file(root / "manifest.json")) layout.manifest_file = root / "manifest.json";
  return layout;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

std::vector<fs::path> extraction_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

LoadedExtractions load_extractions(const fs::path& dir, const TaxonomySchema& schema) {
  LoadedExtractions out;
  for (const auto& file : extraction_files(dir)) {
    const std::string name = file.filename().string();
    const std::string raw = read_file(file);
    try {
      ExtractionRecord record = parse_extraction(raw, schema);
      if (file.stem().string() != record.reference.key) {
        out.findings.push_back({"file-name-mismatch", Severity::error, name,
                                "file should be named '" + record.reference.key + ".json'"});
      }
      out.records.push_back(std::move(record));
    } catch (const FieldError& e) {
      out.findings.push_back({e.code(), Severity::error, name + ":" + e.path(), e.what()});
    } catch (const ParseError& e) {
      throw ParseError(name + ": " + e.location(), e.message());
    }
  }
  return out;
}

namespace {

std::string factor_key_or_empty(std::string_view name) {
  try {
    return text::normalize_factor_name(name);
  } catch (const EmptyName&) {
    return {};
  }
}

// References involved in a link finding. Object-level subjects carry the
// reference key before '#'; factor-level subjects ("factor:<key>") implicate
// every reference naming that factor.
std::set<std::string> implicated_references(const Finding& finding, const std::vector<ExtractionRecord>& records) {
  std::set<std::string> out;
  if (auto hash = finding.subject.find('#'); hash != std::string::npos) {
    out.insert(finding.subject.substr(0, hash));
    return out;
  }
  const std::string prefix = std::string(vocab::kFactor) + ":";
  if (!finding.subject.starts_with(prefix)) return out;
  const std::string key = finding.subject.substr(prefix.size());
  for (const auto& record : records) {
    for (const auto& o : record.objects) {
      bool hit = false;
      for (const auto& [_, text] : o.notes) {
        for (std::size_t start = 0; start <= text.size() && !hit;) {
          auto end = text.find(vocab::kAliasSeparator, start);
          if (end == std::string::npos) end = text.size();
          hit = factor_key_or_empty(text.substr(start, end - start)) == key;
          start = end + 1;
        }
      }
      for (const auto& [_, targets] : o.relations) {
        for (const auto& t : targets) hit = hit || factor_key_or_empty(t) == key;
      }
      if (hit) out.insert(record.reference.key);
    }
  }
  return out;
}

std::shared_ptr<const OntologySnapshot> quarantine_build(const TaxonomySchema& schema,
                                                         std::vector<ExtractionRecord> records,
                                                         std::vector<std::string>& quarantined) {
  std::set<std::string> excluded;
  while (true) {
    std::vector<ExtractionRecord> kept;
    for (const auto& r : records) {
      if (!excluded.contains(r.reference.key)) kept.push_back(r);
    }
    std::set<std::string> offenders;
    try {
      auto snapshot = std::make_shared<const OntologySnapshot>(build_snapshot(schema, kept));
      quarantined.assign(excluded.begin(), excluded.end());
      return snapshot;
    } catch (const DuplicateReference& e) {
      offenders.insert(e.keys().begin(), e.keys().end());
    } catch (const LinkError& e) {
      for (const auto& f : e.findings()) {
        auto refs = implicated_references(f, kept);
        offenders.insert(refs.begin(), refs.end());
      }
    }
    const std::size_t before = excluded.size();
    excluded.insert(offenders.begin(), offenders.end());
    if (excluded.size() == before) {
      for (const auto& r : kept) excluded.insert(r.reference.key);
    }
  }
}

}  // namespace

LoadedRepository load_repository(const RepositoryLayout& layout) {
  LoadedRepository repo;
  repo.layout = layout;
  try {
    repo.schema = parse_structure(read_file(layout.structure_file));
  } catch (const ParseError& e) {
    throw ParseError("structure.json: " + e.location(), e.message());
  }
  LoadedExtractions loaded = load_extractions(layout.extractions_dir, repo.schema);
  repo.records = loaded.records;

  CorpusCheck check = check_corpus(repo.schema, loaded.records, std::move(loaded.findings));
  repo.report = std::move(check.report);
  if (check.snapshot) {
    repo.snapshot = std::make_shared<const OntologySnapshot>(std::move(*check.snapshot));
  } else {
    repo.snapshot = quarantine_build(repo.schema, repo.records, repo.quarantined);
  }

  if (layout.iterations_file) repo.iterations = parse_iterations(read_file(*layout.iterations_file));
  if (layout.manifest_file) repo.manifest = parse_manifest(read_file(*layout.manifest_file));
  if (!repo.iterations.empty()) {
    repo.report.ending_conditions = check_ending_conditions(*repo.snapshot, repo.iterations, repo.manifest);
  }
  return repo;
}

}  // namespace reqont
