#pragma once

#include "reqont/corpus.hpp"
#include "reqont/error.hpp"
#include "reqont/repository.hpp"
#include "reqont/schema.hpp"
#include "reqont/validator.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace reqont::testing {

namespace fs = std::filesystem;

inline const fs::path kSeedDir = REQONT_SEED_DIR;
inline const fs::path kFixtureDir = REQONT_FIXTURE_DIR;
inline const fs::path kGoldenDir = REQONT_GOLDEN_DIR;

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = fs::temp_directory_path() / ("reqont-test-" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

/// Copies a repository directory (structure, extractions, logs) into `dest`.
inline void copy_repository(const fs::path& from, const fs::path& dest) {
  fs::copy(from, dest, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

/// A crafted violation: a structure and in-memory extraction documents that
/// must yield exactly one finding code.
struct ViolationCase {
  std::string name;
  std::string description;
  std::string expected_code;
  std::string structure;
  std::vector<std::string> extractions;
};

inline std::vector<ViolationCase> violation_cases() {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(kFixtureDir / "violations")) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<ViolationCase> out;
  for (const auto& file : files) {
    const auto doc = nlohmann::json::parse(read_file(file));
    ViolationCase c{file.stem().string(), doc.at("description"), doc.at("expected_code"), doc.at("structure").dump(),
                    {}};
    for (const auto& e : doc.at("extractions")) c.extractions.push_back(e.dump());
    out.push_back(std::move(c));
  }
  return out;
}

/// Every finding the pipeline reports for a case: field errors raised while
/// parsing, then the corpus check (schema, objects, links, conflicts, lints).
inline std::vector<Finding> run_violation_case(const ViolationCase& c) {
  const TaxonomySchema schema = parse_structure(c.structure);
  std::vector<ExtractionRecord> records;
  std::vector<Finding> upstream;
  for (const auto& raw : c.extractions) {
    try {
      records.push_back(parse_extraction(raw, schema));
    } catch (const FieldError& e) {
      upstream.push_back({e.code(), Severity::error, e.path(), e.what()});
    }
  }
  return check_corpus(schema, std::move(records), std::move(upstream)).report.all_findings();
}

struct RandomCorpus {
  TaxonomySchema schema;
  std::vector<ExtractionRecord> records;
};

/// Random schema of 1..3 taxonomies (plain dimensions and clusters, no
/// relations) and up to `max_objects` objects spread over a few references.
inline RandomCorpus random_corpus(std::mt19937& rng, std::size_t max_objects) {
  const auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  RandomCorpus out;
  out.schema.version = 1;
  const std::size_t n_taxonomies = pick(1, 3);
  for (std::size_t t = 0; t < n_taxonomies; ++t) {
    TaxonomyDef tax;
    tax.name = "t" + std::to_string(t);
    const std::size_t n_dims = pick(1, 4);
    for (std::size_t d = 0; d < n_dims; ++d) {
      DimensionDef dim;
      dim.name = "d" + std::to_string(d);
      const std::size_t n_chars = pick(2, 4);
      for (std::size_t c = 0; c < n_chars; ++c) dim.characteristics.push_back("c" + std::to_string(c));
      dim.required = false;
      tax.dimensions.push_back(dim);
    }
    if (pick(0, 1) == 1) {
      ClusterDef cluster;
      cluster.name = "k";
      for (std::size_t m = 0, n = pick(1, 3); m < n; ++m) cluster.members.push_back("m" + std::to_string(m));
      for (std::size_t c = 0, n = pick(2, 3); c < n; ++c) cluster.characteristics.push_back("v" + std::to_string(c));
      tax.dimension_clusters.push_back(cluster);
    }
    out.schema.taxonomies.push_back(tax);
  }

  const std::size_t n_objects = pick(0, max_objects);
  const std::size_t n_refs = pick(1, 5);
  for (std::size_t r = 0; r < n_refs; ++r) {
    ExtractionRecord rec;
    rec.reference = {"ref" + std::to_string(r), "Title " + std::to_string(r), {"Author, A"}, 2000, "Venue", {}, {}};
    out.records.push_back(rec);
  }
  for (std::size_t i = 0; i < n_objects; ++i) {
    const TaxonomyDef& tax = out.schema.taxonomies[pick(0, n_taxonomies - 1)];
    OntologyObject o;
    o.taxonomy = tax.name;
    o.id = tax.name + ":o" + std::to_string(i);
    for (const auto& d : expand_clusters(tax)) {
      // Leave some dimensions unclassified.
      if (pick(0, 4) == 0) continue;
      o.values[d.name] = d.characteristics[pick(0, d.characteristics.size() - 1)];
    }
    out.records[pick(0, n_refs - 1)].objects.push_back(std::move(o));
  }
  return out;
}

}  // namespace reqont::testing
